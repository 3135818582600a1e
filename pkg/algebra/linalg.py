"""Exact linear algebra over QQ: coefficient matrices, null spaces and generic rank."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grevlex

from algebra.matrix import PolyMatrix, determinant
from algebra.polynomial import evaluate
from utilities.budget import Budget
from utilities.errors import RankCertificationError

logger = logging.getLogger(__name__)

RETRIES = 5
SAMPLE_BOUND = 10**4
SYMBOLIC_CERTIFY_LIMIT = 6


def domain_matrix(rows: Sequence[Sequence], ncols: Optional[int] = None) -> DomainMatrix:
    rows = [[QQ.convert(v) for v in row] for row in rows]
    width = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    return DomainMatrix(rows, (len(rows), width), QQ)


def coefficient_matrix(polys: Sequence) -> tuple:
    """Rows are polynomials, columns the union of their monomials.

    Returns:
        (DomainMatrix, monomial list) with monomials in descending grevlex.
    """
    monomials = sorted({m for p in polys for m in p.keys()}, key=grevlex, reverse=True)
    index = {m: i for i, m in enumerate(monomials)}
    rows = []
    for p in polys:
        row = [QQ.zero] * len(monomials)
        for m, c in p.items():
            row[index[m]] = c
        rows.append(row)
    return domain_matrix(rows, len(monomials)), monomials


def matrix_rank(m: DomainMatrix) -> int:
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return 0
    return m.rank()


def span_rank(polys: Sequence) -> int:
    """Dimension of the QQ-span of the given polynomials."""
    nonzero = [p for p in polys if p]
    if not nonzero:
        return 0
    matrix, _ = coefficient_matrix(nonzero)
    return matrix_rank(matrix)


def nullspace_rows(m: DomainMatrix) -> list:
    """Basis of {v : m v = 0} as lists of QQ values."""
    rows, cols = m.shape
    if cols == 0:
        return []
    if rows == 0:
        return [[QQ.one if i == j else QQ.zero for i in range(cols)] for j in range(cols)]
    return m.nullspace().to_list()


def evaluate_matrix(m: PolyMatrix, point: Sequence) -> DomainMatrix:
    return domain_matrix(
        [[evaluate(value, point) for value in row] for row in m.entries], m.cols
    )


@dataclass(frozen=True)
class RankCertificate:
    """A minor that is provably a nonzero polynomial.

    A polynomial that takes a nonzero value at a rational point is nonzero, so
    (rows, cols, point, value) is an exact lower bound for the rank.

    `symbolic` is True when the minor was also expanded with Bareiss and
    found nonzero. False means only the sampled value backs it, which still
    proves the lower bound; minors above SYMBOLIC_CERTIFY_LIMIT skip the
    expansion.
    """

    rows: tuple
    cols: tuple
    point: tuple
    value: str
    symbolic: bool

    def to_dict(self) -> dict:
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "point": [str(v) for v in self.point],
            "value": self.value,
            "symbolic": self.symbolic,
        }


@dataclass(frozen=True)
class RankResult:
    rank: int
    certificate: Optional[RankCertificate] = None


def sample_points(ngens: int, seed: int, count: int = RETRIES) -> list:
    rng = np.random.default_rng(seed)
    draws = rng.integers(-SAMPLE_BOUND, SAMPLE_BOUND + 1, size=(count, ngens))
    return [tuple(QQ(int(v)) for v in row) for row in draws]


def _certify(m: PolyMatrix, evaluated: DomainMatrix, rank: int, point: tuple) -> RankCertificate:
    _, pivot_cols = evaluated.rref()
    cols = tuple(pivot_cols[:rank])
    column_block = evaluated.extract(list(range(evaluated.shape[0])), list(cols))
    _, pivot_rows = column_block.transpose().rref()
    rows = tuple(pivot_rows[:rank])
    value = evaluated.extract(list(rows), list(cols)).det()
    if not value:
        raise RankCertificationError(f"selected {rank}-minor vanishes at the sample point")
    symbolic = False
    if rank <= SYMBOLIC_CERTIFY_LIMIT:
        minor = determinant(
            m.submatrix([r + 1 for r in rows], [c + 1 for c in cols]), strategy="bareiss"
        )
        if not minor or evaluate(minor, point) != value:
            raise RankCertificationError("symbolic minor disagrees with its sampled value")
        symbolic = True
    return RankCertificate(
        rows=tuple(r + 1 for r in rows),
        cols=tuple(c + 1 for c in cols),
        point=point,
        value=str(value),
        symbolic=symbolic,
    )


def certified_rank(
    m: PolyMatrix,
    seed: int = 42,
    certify: bool = True,
    retries: int = RETRIES,
    budget: Optional[Budget] = None,
) -> RankResult:
    """Rank over the fraction field from seeded rational sample points."""
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return RankResult(0, None)
    best_rank, best_point, best_matrix = -1, None, None
    ceiling = min(m.rows, m.cols)
    for point in sample_points(m.registry.ngens, seed, retries):
        if budget is not None:
            budget.step()
            budget.check()
        evaluated = evaluate_matrix(m, point)
        rank = matrix_rank(evaluated)
        if rank > best_rank:
            best_rank, best_point, best_matrix = rank, point, evaluated
        if best_rank == ceiling:
            break
    logger.debug("[rank] %dx%d matrix has generic rank %d", m.rows, m.cols, best_rank)
    if not certify or best_rank == 0:
        return RankResult(best_rank, None)
    return RankResult(best_rank, _certify(m, best_matrix, best_rank, best_point))


def rank_generic(
    m: PolyMatrix,
    seed: int = 42,
    certify: bool = False,
    budget: Optional[Budget] = None,
) -> int:
    return certified_rank(m, seed=seed, certify=certify, budget=budget).rank
