import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from sympy.polys.rings import PolyElement

from algebra.polynomial import VariableRegistry, format_polynomial
from utilities.errors import ShapeError

logger = logging.getLogger(__name__)

STRATEGIES = ("cofactor-memo", "bareiss")


@dataclass(frozen=True)
class PolyMatrix:
    """Dense rectangular matrix of polynomials from one registry."""

    registry: VariableRegistry
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        widths = {len(row) for row in rows}
        if len(widths) > 1:
            raise ShapeError("matrix rows must all have the same length")
        ring = self.registry.ring
        for row in rows:
            for value in row:
                if not isinstance(value, PolyElement) or value.ring != ring:
                    raise ShapeError("matrix entries must be polynomials of the matrix registry")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_function(cls, registry: VariableRegistry, rows: int, cols: int, fn: Callable):
        """Build a matrix whose (i, j) entry (1-based) is ``fn(i, j)``."""
        return cls(
            registry,
            tuple(tuple(fn(i, j) for j in range(1, cols + 1)) for i in range(1, rows + 1)),
        )

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int):
        """Entry at 1-based position (i, j)."""
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise ShapeError(f"entry ({i},{j}) outside a {self.rows}x{self.cols} matrix")
        return self.entries[i - 1][j - 1]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        """Rows and columns given 1-based, in the order they should appear."""
        return PolyMatrix(
            self.registry, tuple(tuple(self.entry(i, j) for j in cols) for i in rows)
        )

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.registry, tuple(zip(*self.entries)))

    def map(self, fn: Callable, registry: Optional[VariableRegistry] = None) -> "PolyMatrix":
        return PolyMatrix(
            registry or self.registry,
            tuple(tuple(fn(value) for value in row) for row in self.entries),
        )

    def stack(self, other: "PolyMatrix") -> "PolyMatrix":
        if other.cols != self.cols:
            raise ShapeError("stacked matrices need the same number of columns")
        return PolyMatrix(self.registry, self.entries + other.entries)

    def is_zero(self) -> bool:
        return all(not value for row in self.entries for value in row)

    def to_text(self) -> str:
        return "\n".join(
            "[" + ", ".join(format_polynomial(value) for value in row) + "]"
            for row in self.entries
        )


class CofactorMemo:
    """Minors of one matrix, expanded along the last selected row.

    Sub-determinants are cached by (row tuple, column tuple), so all maximal
    minors of a section share their lower-order work.
    """

    def __init__(self, matrix: PolyMatrix):
        self.matrix = matrix
        self._cache: dict = {}
        self.hits = 0

    def minor(self, rows: Sequence[int], cols: Sequence[int]):
        rows, cols = tuple(rows), tuple(cols)
        if len(rows) != len(cols):
            raise ShapeError("a minor needs as many rows as columns")
        return self._minor(rows, cols)

    def _minor(self, rows: tuple, cols: tuple):
        ring = self.matrix.registry.ring
        if not rows:
            return ring.one
        key = (rows, cols)
        cached = self._cache.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        last = rows[-1]
        upper = rows[:-1]
        size = len(rows)
        value = ring.zero
        for pos, col in enumerate(cols):
            a = self.matrix.entries[last - 1][col - 1]
            if not a:
                continue
            rest = self._minor(upper, cols[:pos] + cols[pos + 1 :])
            if not rest:
                continue
            term = a * rest
            # sign of the (size, pos+1) cofactor
            if (size + pos + 1) % 2:
                value -= term
            else:
                value += term
        self._cache[key] = value
        return value


def _bareiss(matrix: PolyMatrix):
    n = matrix.rows
    ring = matrix.registry.ring
    a = [list(row) for row in matrix.entries]
    sign = 1
    previous = ring.one
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return ring.zero
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]).exquo(previous)
            a[i][k] = ring.zero
        previous = pivot
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def determinant(m: PolyMatrix, strategy: str = "cofactor-memo"):
    """Exact determinant of a square polynomial matrix."""
    if m.rows != m.cols:
        raise ShapeError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown determinant strategy {strategy!r}")
    if m.rows == 0:
        return m.registry.one
    if strategy == "bareiss":
        return _bareiss(m)
    memo = CofactorMemo(m)
    return memo.minor(range(1, m.rows + 1), range(1, m.cols + 1))
