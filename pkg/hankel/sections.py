"""Hankel sections H[r] and their minor tables."""

import json
import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

from algebra.linalg import span_rank
from algebra.matrix import CofactorMemo, PolyMatrix
from algebra.polynomial import VariableRegistry, format_polynomial, t_name
from grassmann.index_set import IndexSet
from utilities.errors import ShapeError

logger = logging.getLogger(__name__)

SHAPES = ("rect", "square")


@dataclass(frozen=True)
class HankelSpec:
    n: int
    r: int = 0
    shape: str = "rect"

    def __post_init__(self):
        if self.n < 2:
            raise ShapeError("n must be at least 2")
        if not 0 <= self.r <= self.n - 1:
            raise ShapeError(f"r must lie in 0..{self.n - 1}, got {self.r}")
        if self.shape not in SHAPES:
            raise ShapeError(f"unknown section shape {self.shape!r}")

    @property
    def var_count(self) -> int:
        return 2 * self.n + 1 - self.r

    @property
    def dims(self) -> tuple:
        if self.shape == "square":
            return (self.n + 1, self.n + 1)
        return (self.n, self.n + 2)

    def registry(self) -> VariableRegistry:
        return VariableRegistry(x_count=self.var_count)


def hankel_matrix(registry: VariableRegistry, rows: int, cols: int, last: int) -> PolyMatrix:
    """Hankel matrix with entry x_{i+j-1}, zero once the index passes `last`."""
    zero = registry.zero

    def entry(i, j):
        k = i + j - 1
        return registry.x(k) if k <= last else zero

    return PolyMatrix.from_function(registry, rows, cols, entry)


def build_section(spec: HankelSpec, registry: Optional[VariableRegistry] = None) -> PolyMatrix:
    registry = registry or spec.registry()
    rows, cols = spec.dims
    return hankel_matrix(registry, rows, cols, spec.var_count)


def build_two_row_model(n: int, registry: Optional[VariableRegistry] = None) -> PolyMatrix:
    """The 2 x (n+2) matrix (x1..x_{n+2} / x2..x_{n+2}, 0)."""
    if n < 2:
        raise ShapeError("n must be at least 2")
    registry = registry or VariableRegistry(x_count=n + 2)
    return hankel_matrix(registry, 2, n + 2, n + 2)


@dataclass(frozen=True)
class MinorTable:
    """Minors keyed by column IndexSet (maximal case) or (rows, cols) pairs."""

    registry: VariableRegistry
    entries: dict = field(compare=False)
    minor_size: int = 0
    spec: Optional[HankelSpec] = None
    label: str = ""

    def __getitem__(self, key):
        return self.entries[key]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(sorted(self.entries))

    def keys(self) -> list:
        return sorted(self.entries)

    def values(self) -> list:
        return [self.entries[k] for k in self.keys()]

    def items(self) -> list:
        return [(k, self.entries[k]) for k in self.keys()]

    @property
    def maximal(self) -> bool:
        return all(isinstance(k, IndexSet) for k in self.entries)

    def assignment(self) -> dict:
        """T-variable name -> minor, the images of the minor map."""
        if not self.maximal:
            raise ShapeError("only column-keyed tables define T-variable images")
        return {t_name(k): v for k, v in self.entries.items()}

    def to_json(self) -> str:
        def key_text(key):
            if isinstance(key, IndexSet):
                return str(key)
            return f"{key[0]}x{key[1]}"

        return json.dumps(
            {key_text(k): format_polynomial(v) for k, v in self.items()}, indent=2
        )


def minor_table(
    m: PolyMatrix, minor_size: int, spec: Optional[HankelSpec] = None, label: str = ""
) -> MinorTable:
    """All minors of one size; maximal minors of a wide matrix key by columns only."""
    if not 1 <= minor_size <= min(m.rows, m.cols):
        raise ShapeError(f"minor size {minor_size} out of range for a {m.rows}x{m.cols} matrix")
    memo = CofactorMemo(m)
    entries = {}
    if minor_size == m.rows:
        rows = tuple(range(1, m.rows + 1))
        for cols in combinations(range(1, m.cols + 1), minor_size):
            entries[IndexSet(m.cols, cols)] = memo.minor(rows, cols)
    else:
        for rows in combinations(range(1, m.rows + 1), minor_size):
            for cols in combinations(range(1, m.cols + 1), minor_size):
                key = (IndexSet(m.rows, rows), IndexSet(m.cols, cols))
                entries[key] = memo.minor(rows, cols)
    logger.debug(
        "[hankel] %d minors of size %d, %d cache hits", len(entries), minor_size, memo.hits
    )
    return MinorTable(m.registry, entries, minor_size, spec, label)


def section_minors(n: int, r: int) -> MinorTable:
    """Maximal minors [i] of the rectangular section H[r]."""
    spec = HankelSpec(n, r, "rect")
    return minor_table(build_section(spec), n, spec, label=f"I_{n}(H[{r}])")


def gruson_peskine_ranks(n: int, r: int) -> tuple:
    """Span dimensions of square n-minors, rectangular maximal minors and their union."""
    square = build_section(HankelSpec(n, r, "square"))
    rect = build_section(HankelSpec(n, r, "rect"), square.registry)
    a = minor_table(square, n).values()
    b = minor_table(rect, n).values()
    return span_rank(a), span_rank(b), span_rank(list(a) + list(b))


def verify_gruson_peskine(n: int, r: int) -> bool:
    rank_square, rank_rect, rank_union = gruson_peskine_ranks(n, r)
    ok = rank_square == rank_rect == rank_union
    logger.info(
        "[hankel] span check n=%d r=%d: square=%d rect=%d union=%d expected=%d",
        n, r, rank_square, rank_rect, rank_union, comb(n + 2, 2),
    )
    return ok
