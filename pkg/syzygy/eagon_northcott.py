import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from sympy.polys.domains import QQ

from algebra.linalg import coefficient_matrix, domain_matrix, matrix_rank, nullspace_rows
from algebra.matrix import PolyMatrix
from algebra.polynomial import VariableRegistry, is_homogeneous, total_degree
from hankel.sections import section_minors
from utilities.errors import NonHomogeneousError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyzygyMatrix:
    """Columns of linear forms v with sum_j v_j g_j = 0."""

    registry: VariableRegistry
    generators: tuple
    columns: tuple
    keys: tuple = ()

    @property
    def size(self) -> int:
        return len(self.columns)

    def annihilates(self) -> bool:
        zero = self.registry.zero
        for column in self.columns:
            total = zero
            for v, g in zip(column, self.generators):
                if v:
                    total = total + v * g
            if total:
                return False
        return True

    def as_matrix(self) -> PolyMatrix:
        """Generators index the rows, syzygies the columns."""
        if not self.columns:
            return PolyMatrix(self.registry, ())
        return PolyMatrix(self.registry, tuple(zip(*self.columns)))

    def flattened(self) -> list:
        """Coefficient vector of each column over (generator, variable) slots."""
        ngens = self.registry.ngens
        vectors = []
        for column in self.columns:
            vector = [QQ.zero] * (len(self.generators) * ngens)
            for j, v in enumerate(column):
                for monom, c in v.items():
                    vector[j * ngens + monom.index(1)] = c
            vectors.append(vector)
        return vectors


def en_syzygies(n: int, r: int) -> SyzygyMatrix:
    """Linear syzygies from a repeated row of H[r] in each (n+1)-column block."""
    table = section_minors(n, r)
    registry = table.registry
    keys = table.keys()
    index = {key.elements: pos for pos, key in enumerate(keys)}
    last = 2 * n + 1 - r
    columns = []
    for cols in combinations(range(1, n + 3), n + 1):
        for k in range(1, n + 1):
            column = [registry.zero] * len(keys)
            for j, c in enumerate(cols):
                var = c + k - 1
                if var > last:
                    continue
                deleted = cols[:j] + cols[j + 1 :]
                entry = registry.x(var)
                column[index[deleted]] = entry if j % 2 == 0 else -entry
            columns.append(tuple(column))
    logger.debug("[syzygy] %d Eagon-Northcott columns for n=%d r=%d", len(columns), n, r)
    return SyzygyMatrix(registry, tuple(table.values()), tuple(columns), tuple(keys))


def linear_syzygy_basis(
    generators: Sequence, registry: Optional[VariableRegistry] = None
) -> SyzygyMatrix:
    """All vectors of linear forms annihilating equal-degree homogeneous generators."""
    gens = [g for g in generators]
    if not gens:
        raise ShapeError("linear syzygies need at least one generator")
    registry = registry or VariableRegistry(x_count=gens[0].ring.ngens)
    if not all(is_homogeneous(g) and g for g in gens):
        raise NonHomogeneousError("generators must be nonzero and homogeneous")
    degrees = {total_degree(g) for g in gens}
    if len(degrees) != 1:
        raise NonHomogeneousError("generators must share one degree")
    ngens = registry.ngens
    variables = registry.ring.gens
    products = [v * g for g in gens for v in variables]
    matrix, _ = coefficient_matrix(products)
    basis = nullspace_rows(matrix.transpose())
    columns = []
    for vector in basis:
        column = []
        for j in range(len(gens)):
            form = registry.zero
            for k, var in enumerate(variables):
                c = vector[j * ngens + k]
                if c:
                    form = form + var * c
            column.append(form)
        columns.append(tuple(column))
    logger.info("[syzygy] %d linear syzygies on %d generators", len(columns), len(gens))
    return SyzygyMatrix(registry, tuple(gens), tuple(columns))


def span_contains(basis: SyzygyMatrix, other: SyzygyMatrix) -> bool:
    """Every column of `other` is a QQ-combination of columns of `basis`."""
    a = basis.flattened()
    b = other.flattened()
    if not b:
        return True
    width = len(b[0])
    rank_a = matrix_rank(domain_matrix(a, width)) if a else 0
    return rank_a == matrix_rank(domain_matrix(a + b, width))


def expected_en_count(n: int) -> int:
    return n * comb(n + 2, n + 1)
