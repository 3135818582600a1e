import logging
from dataclasses import dataclass
from math import comb
from typing import Optional

from sympy.polys.domains import QQ

from algebra.polynomial import VariableRegistry, format_polynomial, t_name, total_degree
from grassmann.index_set import IndexSet, subsets
from grassmann.plucker import t_registry, term_ranks
from laplace.block_matrix import build_L1, build_L_a, expand
from utilities.budget import Budget
from utilities.errors import ShapeError

logger = logging.getLogger(__name__)

_flap_cache: dict = {}


def lap_polynomial(n: int, a, registry: Optional[VariableRegistry] = None):
    """Laplace quadric LAP_a from the signed pair formula.

    LAP_a = sum over pairs i<j in B = {2..n+2} minus a of
    (-1)^(i+j+1+eta_i+eta_j) * T_{{i,j} u a} * T_{[n+2] minus {i-1,j-1}}.
    """
    ambient = n + 2
    a = IndexSet(ambient, tuple(a))
    if len(a) != n - 2:
        raise ShapeError(f"LAP_a needs |a| = n-2 = {n - 2}, got {len(a)}")
    registry = registry or t_registry(n)
    full = IndexSet(ambient, tuple(range(1, ambient + 1)))
    free = [k for k in range(2, ambient + 1) if k not in a]
    result = registry.zero
    for pos, i in enumerate(free):
        for j in free[pos + 1 :]:
            exponent = i + j + 1 + a.eta(i) + a.eta(j)
            term = registry.T(a.union((i, j))) * registry.T(full.without((i - 1, j - 1)))
            result = result - term if exponent % 2 else result + term
    return result


def lap_via_expansion(n: int, a, registry: Optional[VariableRegistry] = None):
    return expand(build_L_a(n, a), registry or t_registry(n))


def lap_relations(n: int, registry: Optional[VariableRegistry] = None) -> list:
    """All C(n+2, 4) Laplace quadrics, keyed by a in lexicographic order."""
    registry = registry or t_registry(n)
    return [(a, lap_polynomial(n, a, registry)) for a in subsets(n + 2, n - 2)]


def lap_relation_counts(n: int) -> dict:
    """Six-term relations have 1 in a; all others have three terms."""
    six = comb(n + 1, n - 3) if n >= 3 else 0
    three = comb(n + 1, n - 2)
    return {"six_term": six, "three_term": three, "total": six + three}


def _anchor(n: int) -> IndexSet:
    return IndexSet(n + 2, tuple(range(2, n + 1)) + (n + 2,))


def raw_f_lap(n: int, budget: Optional[Budget] = None):
    """Expansion of L[1] before sign normalization."""
    if n < 2:
        raise ShapeError("n must be at least 2")
    if n not in _flap_cache:
        registry = t_registry(n)
        _flap_cache[n] = expand(build_L1(n), registry, budget)
        logger.info("[laplace] expanded L[1] for n=%d: %d terms", n, len(_flap_cache[n]))
    return _flap_cache[n]


def f_lap_scale(n: int, budget: Optional[Budget] = None):
    """Factor that makes the coefficient of T_{2..n,n+2}^n equal to -1."""
    raw = raw_f_lap(n, budget)
    registry = t_registry(n)
    anchor = registry.T(_anchor(n)) ** n
    coeff = raw.coeff(anchor)
    if not coeff:
        raise ValueError(f"L[1] expansion for n={n} lacks the anchor monomial")
    return -QQ.one / coeff


def f_lap(n: int, budget: Optional[Budget] = None):
    return raw_f_lap(n, budget) * f_lap_scale(n, budget)


def flap_normalization(n: int, budget: Optional[Budget] = None) -> dict:
    """The anchor monomial of f_LAP, its fixed coefficient and the applied scale."""
    scale = f_lap_scale(n, budget)
    anchor = t_registry(n).T(_anchor(n)) ** n
    return {"anchor": format_polynomial(anchor), "coefficient": "-1", "scale": str(scale)}


def relation_metadata(n: int, a, poly) -> dict:
    return {
        "n": n,
        "a": None if a is None else list(a),
        "term_count": len(poly),
        "degree": total_degree(poly) if poly else 0,
        "polynomial": format_polynomial(poly),
    }


@dataclass(frozen=True)
class StructureCheck:
    n: int
    pure_power_coeff: str
    mixed_coeff: str
    other_terms_use_fourth_variable: bool
    holds: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pure_power_coeff": self.pure_power_coeff,
            "mixed_coeff": self.mixed_coeff,
            "other_terms_use_fourth_variable": self.other_terms_use_fourth_variable,
            "holds": self.holds,
        }


def flap_structure(n: int, budget: Optional[Budget] = None) -> StructureCheck:
    """Shape of f_LAP restricted to T_{2..n+1}, T_{3..n+2} and T_{2..n,n+2}.

    Only the pure power of T_{2..n,n+2} (coefficient -1) and
    T_{2..n+1}^(n-1) T_{3..n+2} may avoid every other variable. The mixed
    coefficient alternates as (-1)^n once the pure power is anchored at -1.
    """
    registry = t_registry(n)
    poly = f_lap(n, budget)
    ambient = n + 2
    low = registry.position(t_name(range(2, n + 2)))
    high = registry.position(t_name(range(3, ambient + 1)))
    anchor = registry.position(t_name(_anchor(n)))
    special = {low, high, anchor}
    pure = registry.T(_anchor(n)) ** n
    mixed = registry.T(range(2, n + 2)) ** (n - 1) * registry.T(range(3, ambient + 1))
    pure_coeff = poly.coeff(pure)
    mixed_coeff = poly.coeff(mixed)
    allowed = {next(iter(pure.keys())), next(iter(mixed.keys()))}
    fourth = all(
        monom in allowed or any(e and i not in special for i, e in enumerate(monom))
        for monom in poly.keys()
    )
    expected_mixed = QQ(-1) ** n
    holds = pure_coeff == QQ(-1) and mixed_coeff == expected_mixed and fourth
    return StructureCheck(n, str(pure_coeff), str(mixed_coeff), fourth, holds)


def flap_decomposition_n3():
    """f_LAP(3) against T345 LAP_1 - T245 LAP_2 + T235 LAP_3 - T234 LAP_4."""
    registry = t_registry(3)
    combination = registry.zero
    for sign, i, cofactor in ((1, 1, (3, 4, 5)), (-1, 2, (2, 4, 5)), (1, 3, (2, 3, 5)), (-1, 4, (2, 3, 4))):
        term = registry.T(cofactor) * lap_polynomial(3, (i,), registry)
        combination = combination + term if sign > 0 else combination - term
    return f_lap(3) == combination


def constant_total_rank(p, registry: VariableRegistry) -> Optional[int]:
    ranks = term_ranks(p, registry)
    return ranks.pop() if len(ranks) == 1 else None


def expected_flap_rank(n: int) -> int:
    return n * (n + 1) * (n + 2) // 2


def expected_lap_rank(n: int, a) -> int:
    return sum(a) + (n + 2) * (n + 3) // 2 + 2
