"""Birationality via the linear-syzygy rank criterion, and the Rees fiber-type check."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from algebra.linalg import certified_rank
from algebra.matrix import PolyMatrix
from algebra.orders import GREVLEX, elimination_order
from algebra.polynomial import VariableRegistry, format_polynomial, total_degree
from groebner.buchberger import Ideal, buchberger, contains, ideals_equal
from groebner.fiber import (
    candidate_generators,
    fiber_report,
    joint_registry,
    kernel_via_elimination,
)
from groebner.hilbert import HilbertSummary, hilbert_summary
from hankel.sections import section_minors
from syzygy.eagon_northcott import en_syzygies, linear_syzygy_basis
from syzygy.gradient import gradient_table
from utilities.budget import Budget
from utilities.errors import BudgetExceededError

logger = logging.getLogger(__name__)

BIRATIONAL = "birational-certified"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class BirationalityReport:
    analytic_spread: int
    ambient_dim: int
    linear_syzygy_rank: int
    verdict: str
    jacobian_rank: Optional[int] = None
    certificate: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "analytic_spread": self.analytic_spread,
            "ambient_dim": self.ambient_dim,
            "linear_syzygy_rank": self.linear_syzygy_rank,
            "jacobian_rank": self.jacobian_rank,
            "verdict": self.verdict,
            "certificate": self.certificate,
        }


def jacobian_rank(generators: Sequence, registry: VariableRegistry, seed: int = 42) -> int:
    """Generic rank of the Jacobian; equals the analytic spread in characteristic 0."""
    rows = tuple(tuple(g.diff(x) for x in registry.ring.gens) for g in generators)
    return certified_rank(PolyMatrix(registry, rows), seed=seed, certify=False).rank


def birationality_check(
    generators: Sequence,
    ambient_dim: int,
    fiber_dim: int,
    registry: Optional[VariableRegistry] = None,
    seed: int = 42,
) -> BirationalityReport:
    """Maximal analytic spread plus rank M_1 >= ambient_dim - 1 certifies birationality."""
    syzygies = linear_syzygy_basis(generators, registry)
    registry = syzygies.registry
    if syzygies.size:
        result = certified_rank(syzygies.as_matrix(), seed=seed, certify=True)
        rank, certificate = result.rank, result.certificate
    else:
        rank, certificate = 0, None
    spread_ok = fiber_dim == ambient_dim
    verdict = BIRATIONAL if spread_ok and rank >= ambient_dim - 1 else INCONCLUSIVE
    if verdict == INCONCLUSIVE:
        logger.warning(
            "[rank] criterion inconclusive: spread=%d ambient=%d rank M1=%d",
            fiber_dim, ambient_dim, rank,
        )
    return BirationalityReport(
        analytic_spread=fiber_dim,
        ambient_dim=ambient_dim,
        linear_syzygy_rank=rank,
        verdict=verdict,
        jacobian_rank=jacobian_rank(generators, registry, seed),
        certificate=certificate.to_dict() if certificate else None,
    )


def minors_birationality(n: int, r: int, budget: Optional[Budget] = None, seed: int = 42):
    table = section_minors(n, r)
    fiber_dim = fiber_report(n, r, budget).hilbert.krull_dim
    return birationality_check(table.values(), 2 * n + 1 - r, fiber_dim, table.registry, seed)


def reduction_fiber_summary(n: int, budget: Optional[Budget] = None) -> HilbertSummary:
    """Hilbert data of the special fiber of J[n-1]."""
    kernel = kernel_via_elimination(gradient_table(n, n - 1), budget)
    return hilbert_summary(buchberger(kernel, GREVLEX, budget))


def reduction_fiber_multiplicity(n: int, budget: Optional[Budget] = None) -> int:
    return reduction_fiber_summary(n, budget).multiplicity


def gradient_birationality(n: int, budget: Optional[Budget] = None, seed: int = 42):
    table = gradient_table(n, n - 1)
    fiber_dim = reduction_fiber_summary(n, budget).krull_dim
    return birationality_check(table.values(), n + 2, fiber_dim, table.registry, seed)


@dataclass(frozen=True)
class BigradedGenerator:
    polynomial: object
    bidegree: tuple

    def to_dict(self) -> dict:
        return {"bidegree": list(self.bidegree), "polynomial": format_polynomial(self.polynomial)}


@dataclass(frozen=True)
class ReesReport:
    n: int
    fiber_type: Optional[bool]
    generators: tuple = ()
    checks: dict = field(default_factory=dict)

    @property
    def determined(self) -> bool:
        return self.fiber_type is not None

    def inventory(self) -> dict:
        counts: dict = {}
        for g in self.generators:
            key = f"({g.bidegree[0]},{g.bidegree[1]})"
            counts[key] = counts.get(key, 0) + 1
        return dict(sorted(counts.items()))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "fiber_type": "not determined" if self.fiber_type is None else self.fiber_type,
            "inventory": self.inventory(),
            "checks": dict(self.checks),
        }


def _bidegree(p, registry: VariableRegistry) -> tuple:
    x_degree = total_degree(p, registry.x_positions)
    t_degree = total_degree(p, registry.t_positions)
    return (x_degree, t_degree)


def _minimal_generators(polys: list, registry: VariableRegistry, budget) -> list:
    ordered = sorted(polys, key=lambda p: (total_degree(p), _bidegree(p, registry)))
    kept: list = []
    for p in ordered:
        if kept and contains(buchberger(Ideal(registry, tuple(kept)), GREVLEX, budget), [p]):
            continue
        kept.append(p)
    return kept


def en_relations(n: int, r: int, registry: VariableRegistry) -> list:
    """Eagon-Northcott syzygies as bidegree (1, 1) forms sum_j v_j T_j."""
    syz = en_syzygies(n, r)
    forms = []
    for column in syz.columns:
        form = registry.zero
        for v, key in zip(column, syz.keys):
            if v:
                form = form + registry.convert(v) * registry.T(key)
        forms.append(form)
    return forms


def rees_fiber_type_check(n: int = 2, r: int = 1, budget: Optional[Budget] = None) -> ReesReport:
    """Eliminate t from (T_i - [i] t) and read off the bidegrees of minimal generators."""
    table = section_minors(n, r)
    joint = joint_registry(table, extra=("t",))
    t = joint.gen("t")
    gens = tuple(joint.T(key) - joint.convert(value) * t for key, value in table.items())
    order = elimination_order(joint.extra_positions, joint.ngens)
    rees = joint_registry(table)
    try:
        gb = buchberger(Ideal(joint, gens, f"Rees graph n={n}"), order, budget)
        t_pos = joint.extra_positions[0]
        eliminated = [
            rees.convert(g.set_ring(joint.ring))
            for g in gb.elements
            if all(not monom[t_pos] for monom in g.keys())
        ]
        minimal = _minimal_generators(eliminated, rees, budget)
        generators = tuple(BigradedGenerator(g, _bidegree(g, rees)) for g in minimal)
        fiber_type = all(b[0] == 0 or b[1] == 1 for b in (g.bidegree for g in generators))
        expected = (
            en_relations(n, r, rees)
            + [rees.convert(g) for g in candidate_generators(n, r, budget)]
        )
        rees_ideal = Ideal(rees, tuple(minimal), "Rees ideal")
        fiber_part = [g.polynomial for g in generators if g.bidegree[0] == 0]
        kernel = kernel_via_elimination(table, budget)
        checks = {
            "expected_generators_equal": ideals_equal(
                Ideal(rees, tuple(expected), "EN + fiber relations"), rees_ideal, GREVLEX, budget
            ),
            "fiber_part_equals_kernel": ideals_equal(
                Ideal(kernel.registry, tuple(kernel.registry.convert(g) for g in fiber_part)),
                kernel,
                GREVLEX,
                budget,
            ),
        }
    except BudgetExceededError as exc:
        logger.warning("[kernel] Rees elimination for n=%d not determined: %s", n, exc)
        return ReesReport(n, None, (), {"budget": False})
    logger.info("[kernel] Rees ideal n=%d: %d minimal generators, fiber type %s",
                n, len(generators), fiber_type)
    return ReesReport(n, fiber_type, generators, checks)
