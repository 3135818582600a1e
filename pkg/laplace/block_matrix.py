"""Labeled block matrices and their generalized Laplace expansion.

A cell carries a column label j (standing for column C_j of an n x (n+2)
section) or 0. Expansion runs from the bottom row block upward; each block
minor on labels (l_1..l_n) becomes sort_sign(l) * T_sorted(l).
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from algebra.matrix import PolyMatrix
from algebra.polynomial import VariableRegistry, evaluate
from grassmann.index_set import IndexSet, sort_sign
from grassmann.plucker import t_registry
from utilities.budget import Budget
from utilities.errors import BudgetExceededError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledBlockMatrix:
    n: int
    labels: tuple
    name: str = ""

    def __post_init__(self):
        labels = tuple(tuple(int(v) for v in block) for block in self.labels)
        widths = {len(block) for block in labels}
        if len(widths) != 1:
            raise ShapeError("every row block needs the same number of columns")
        if len(labels) * self.n != len(labels[0]):
            raise ShapeError(
                f"{len(labels)} blocks of {self.n} rows do not square {len(labels[0])} columns"
            )
        for block in labels:
            for value in block:
                if not 0 <= value <= self.n + 2:
                    raise ShapeError(f"column label C_{value} outside [n+2]")
        object.__setattr__(self, "labels", labels)

    @property
    def row_blocks(self) -> int:
        return len(self.labels)

    @property
    def col_count(self) -> int:
        return len(self.labels[0])

    def to_text(self) -> str:
        cell = lambda v: f"C{v}" if v else "0"
        return "\n".join(" ".join(f"{cell(v):>3}" for v in block) for block in self.labels)


@dataclass(frozen=True)
class ExpansionTerm:
    sign: int
    factors: tuple


def build_L_a(n: int, a) -> LabeledBlockMatrix:
    a = IndexSet(n + 2, tuple(a))
    if len(a) != n - 2:
        raise ShapeError(f"L_a needs |a| = n-2 = {n - 2}, got {len(a)}")
    top = tuple(range(1, n + 3)) + (0,) * (n - 2)
    bottom = tuple(range(2, n + 3)) + (0,) + a.elements
    return LabeledBlockMatrix(n, (top, bottom), name=f"L_{list(a.elements)}")


def build_L1(n: int) -> LabeledBlockMatrix:
    """Staircase matrix with n row blocks and n^2 columns.

    Column groups: g0 of width n+2, then n-2 groups of width n+1. Block 1
    holds C_1..C_{n+2} over g0; block k >= 2 holds the shifted run
    C_2..C_{n+2} over group k-2 and C_1..C_{n+1} over group k-1.
    """
    if n < 2:
        raise ShapeError("n must be at least 2")
    widths = [n + 2] + [n + 1] * (n - 2)
    offsets = [sum(widths[:g]) for g in range(len(widths))]
    total = n * n
    blocks = []
    for k in range(1, n + 1):
        row = [0] * total
        if k == 1:
            row[0 : n + 2] = range(1, n + 3)
        else:
            lower = k - 2
            start = offsets[lower]
            shifted = list(range(2, n + 3))
            if lower == 0:
                shifted.append(0)
            row[start : start + widths[lower]] = shifted
            upper = k - 1
            if upper <= n - 2:
                start = offsets[upper]
                row[start : start + widths[upper]] = range(1, n + 2)
        blocks.append(tuple(row))
    return LabeledBlockMatrix(n, tuple(blocks), name="L[1]")


def realize(matrix: LabeledBlockMatrix, section: PolyMatrix) -> PolyMatrix:
    """Replace every label C_j by column j of an n x (n+2) section."""
    if section.rows != matrix.n:
        raise ShapeError("section height must equal the block height")
    zero = section.registry.zero
    rows = []
    for block in matrix.labels:
        for i in range(1, matrix.n + 1):
            rows.append(tuple(section.entry(i, j) if j else zero for j in block))
    return PolyMatrix(section.registry, tuple(rows))


def _block_factor(labels: tuple) -> Optional[tuple]:
    sign = sort_sign(labels)
    if not sign or 0 in labels:
        return None
    return sign, tuple(sorted(labels))


class LaplaceExpander:
    """Memoized expansion keyed by (blocks left, remaining columns)."""

    def __init__(
        self,
        matrix: LabeledBlockMatrix,
        registry: Optional[VariableRegistry] = None,
        budget: Optional[Budget] = None,
    ):
        self.matrix = matrix
        self.registry = registry or t_registry(matrix.n)
        self.budget = budget
        self._memo: dict = {}
        self.nodes = 0

    def _row_sum(self, k: int) -> int:
        n = self.matrix.n
        return sum(range((k - 1) * n + 1, k * n + 1))

    def _choices(self, k: int, remaining: tuple) -> Iterator[tuple]:
        """Column choices for block k (1-based) with their Laplace sign and factor."""
        n = self.matrix.n
        block = self.matrix.labels[k - 1]
        upper = self.matrix.labels[: k - 1]
        candidates = [c for c in remaining if block[c]]
        mandatory = [c for c in remaining if all(not b[c] for b in upper)]
        if any(not block[c] for c in mandatory):
            return
        optional = [c for c in candidates if c not in mandatory]
        need = n - len(mandatory)
        if need < 0:
            return
        position = {c: i + 1 for i, c in enumerate(remaining)}
        row_sum = self._row_sum(k)
        for extra in combinations(optional, need):
            chosen = tuple(sorted(mandatory + list(extra)))
            factor = _block_factor(tuple(block[c] for c in chosen))
            if factor is None:
                continue
            laplace = -1 if (row_sum + sum(position[c] for c in chosen)) % 2 else 1
            rest = tuple(c for c in remaining if c not in chosen)
            yield laplace * factor[0], factor[1], rest

    def polynomial(self):
        cols = tuple(range(self.matrix.col_count))
        return self._expand(self.matrix.row_blocks, cols)

    def _expand(self, k: int, remaining: tuple):
        key = (k, remaining)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        self.nodes += 1
        if self.budget is not None:
            self.budget.step()
        ring = self.registry.ring
        if k == 1:
            factor = _block_factor(tuple(self.matrix.labels[0][c] for c in remaining))
            value = ring.zero if factor is None else factor[0] * self.registry.T(factor[1])
        else:
            value = ring.zero
            for sign, labels, rest in self._choices(k, remaining):
                below = self._expand(k - 1, rest)
                if below:
                    term = self.registry.T(labels) * below
                    value = value + term if sign > 0 else value - term
        self._memo[key] = value
        return value

    def terms(self) -> Iterator[ExpansionTerm]:
        """Every nonzero summand as a signed product of block factors, top block first."""
        cols = tuple(range(self.matrix.col_count))
        yield from self._walk(self.matrix.row_blocks, cols, 1, ())

    def _walk(self, k: int, remaining: tuple, sign: int, below: tuple):
        if k == 1:
            factor = _block_factor(tuple(self.matrix.labels[0][c] for c in remaining))
            if factor is not None:
                yield ExpansionTerm(
                    sign * factor[0],
                    (IndexSet(self.matrix.n + 2, factor[1]),) + below,
                )
            return
        for step_sign, labels, rest in self._choices(k, remaining):
            yield from self._walk(
                k - 1, rest, sign * step_sign, (IndexSet(self.matrix.n + 2, labels),) + below
            )


def expand(
    matrix: LabeledBlockMatrix,
    registry: Optional[VariableRegistry] = None,
    budget: Optional[Budget] = None,
):
    """Laplace expansion of a labeled block matrix as a polynomial in T."""
    expander = LaplaceExpander(matrix, registry, budget)
    try:
        result = expander.polynomial()
    except BudgetExceededError as exc:
        exc.stats.setdefault("stage", f"expansion of {matrix.name}")
        raise
    logger.debug("[laplace] expanded %s through %d memo nodes", matrix.name, expander.nodes)
    return result


def terms_to_polynomial(terms, registry: VariableRegistry):
    result = registry.zero
    for term in terms:
        product = registry.one
        for factor in term.factors:
            product = product * registry.T(factor)
        result = result + product if term.sign > 0 else result - product
    return result


def expansion_agrees_at_points(
    matrix: LabeledBlockMatrix,
    section: PolyMatrix,
    points: list,
    registry: Optional[VariableRegistry] = None,
) -> bool:
    """Compare the T-expansion with det of the realized matrix at rational x-points.

    The expansion is evaluated at the sampled maximal minors of `section`, so
    no x-polynomial of the full expansion is ever formed.
    """
    registry = registry or t_registry(matrix.n)
    expansion = expand(matrix, registry)
    realized = realize(matrix, section)
    n = matrix.n
    for point in points:
        numeric = DomainMatrix(
            [[evaluate(section.entry(i, j), point) for j in range(1, section.cols + 1)]
             for i in range(1, n + 1)],
            (n, section.cols),
            QQ,
        )
        minors = []
        for key in registry.t_index_sets:
            cols = [c - 1 for c in key]
            minors.append(numeric.extract(list(range(n)), cols).det())
        t_point = [QQ.zero] * registry.ngens
        for pos, value in zip(registry.t_positions, minors):
            t_point[pos] = value
        lhs = evaluate(expansion, t_point)
        rhs = DomainMatrix(
            [[evaluate(v, point) for v in row] for row in realized.entries],
            realized.shape,
            QQ,
        ).det()
        if lhs != rhs:
            return False
    return True
