"""Special fiber rings of Hankel minor ideals.

The candidate presentations come from the relation families: Pluecker quadrics
for every r, f_LAP for r = 1 and the Laplace quadrics for r = n-1. Their
Groebner bases give the Hilbert data that is compared with closed forms, and
elimination gives the true kernel of the minor map for certification.
"""

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np

from algebra.orders import GREVLEX, TermOrder, elimination_order, permuted_grevlex
from algebra.polynomial import VariableRegistry, format_polynomial, substitute
from grassmann.plucker import PosetIso, phi_map, plucker_relations, t_registry
from groebner.buchberger import GroebnerBasis, Ideal, buchberger, contains, ideals_equal
from groebner.hilbert import HilbertSummary, hilbert_function_matches, hilbert_summary
from hankel.sections import MinorTable, build_two_row_model, minor_table, section_minors
from laplace.relations import f_lap, lap_relations
from utilities.budget import Budget
from utilities.errors import ShapeError, UnassignedVariableError

logger = logging.getLogger(__name__)


def psi_substitute(p, table: MinorTable):
    """Image of a T-polynomial under T_i -> [i]."""
    try:
        return substitute(p, table.assignment(), target=table.registry, identity_fallback=False)
    except UnassignedVariableError as exc:
        raise UnassignedVariableError(exc.name, f"minor table {table.label or ''}".strip()) from exc


def candidate_generators(n: int, r: int, budget: Optional[Budget] = None) -> list:
    """Relations expected to generate the kernel of the minor map of H[r]."""
    if not 0 <= r <= n - 1:
        raise ShapeError(f"r must lie in 0..{n - 1}, got {r}")
    registry = t_registry(n)
    gens = plucker_relations(n, registry)
    if r == 0:
        return gens
    if r not in (1, n - 1):
        raise ShapeError(f"no relation family is known for 2 <= r={r} <= n-2")
    if r == 1:
        gens = gens + [f_lap(n, budget)]
    if r == n - 1:
        gens = gens + [lap for _, lap in lap_relations(n, registry)]
    return gens


def candidate_ideal(n: int, r: int, budget: Optional[Budget] = None) -> Ideal:
    return Ideal(t_registry(n), tuple(candidate_generators(n, r, budget)), f"K[{r}] candidate n={n}")


def expected_invariants(n: int, r: int) -> dict:
    """Closed forms for dimension, multiplicity, h-degree and a-invariant."""
    if r == 0:
        return {"dim": 2 * n + 1, "e": comb(2 * n, n) // (n + 1)}
    if r == n - 1:
        h = (n + 2) // 2
        return {"dim": n + 2, "e": 2 ** (n + 1) - n - 2, "h_degree": h, "a": h - (n + 2)}
    if r == 1:
        return {"dim": 2 * n, "e": n * comb(2 * n, n) // (n + 1), "h_degree": 2 * n - 2, "a": -2}
    return {"dim": 2 * n - r + 1}


@dataclass(frozen=True)
class FiberSummary:
    n: int
    r: int
    generators: dict
    hilbert: HilbertSummary
    checks: dict
    expected: dict
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def metrics(self) -> dict:
        h = self.hilbert
        return {
            "dim": h.krull_dim,
            "e": h.multiplicity,
            "h_degree": h.h_degree,
            "reg": h.regularity,
            "a": h.a_invariant,
        }

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "generators": {str(k): v for k, v in self.generators.items()},
            "hilbert": self.hilbert.to_dict(),
            "checks": dict(self.checks),
            "expected": dict(self.expected),
            "stats": dict(self.stats),
            "note": "a and reg are conditional on Cohen-Macaulayness",
        }


def fiber_report(
    n: int, r: int, budget: Optional[Budget] = None, order: TermOrder = GREVLEX
) -> FiberSummary:
    ideal = candidate_ideal(n, r, budget)
    table = section_minors(n, r)
    vanishing = all(not psi_substitute(g, table) for g in ideal.generators)
    gb = buchberger(ideal, order, budget)
    summary = hilbert_summary(gb, cm_assumed=True)
    expected = expected_invariants(n, r)
    checks = {"psi_vanishing": vanishing}
    observed = {
        "dim": summary.krull_dim,
        "e": summary.multiplicity,
        "h_degree": summary.h_degree,
        "a": summary.a_invariant,
    }
    for key, value in expected.items():
        checks[f"{key}_matches"] = observed[key] == value
    checks["dim_is_analytic_spread"] = summary.krull_dim == 2 * n - r + 1
    if r == n - 1:
        checks["height"] = summary.codim == comb(n + 2, 2) - (n + 2)
    checks["hilbert_function_brute_force"] = hilbert_function_matches(gb, summary)
    report = FiberSummary(
        n, r, ideal.degrees(), summary, checks, expected, gb.stats.to_dict()
    )
    level = logging.INFO if report.passed else logging.WARNING
    logger.log(level, "[fiber] n=%d r=%d dim=%d e=%d h=%d checks=%s",
               n, r, summary.krull_dim, summary.multiplicity, summary.h_degree, checks)
    return report


def joint_registry(table: MinorTable, extra: tuple = ()) -> VariableRegistry:
    return VariableRegistry(
        x_count=table.registry.x_count, t_index_sets=tuple(table.keys()), extra=extra
    )


def kernel_via_elimination(table: MinorTable, budget: Optional[Budget] = None) -> Ideal:
    """Kernel of T_i -> [i], eliminating x from (T_i - [i]) under a block order."""
    joint = joint_registry(table)
    gens = tuple(joint.T(key) - joint.convert(value) for key, value in table.items())
    order = elimination_order(joint.x_positions, joint.ngens)
    gb = buchberger(Ideal(joint, gens, f"graph of {table.label or 'minor map'}"), order, budget)
    x_positions = joint.x_positions
    target = VariableRegistry(x_count=0, t_index_sets=tuple(table.keys()))
    kernel = [
        target.convert(g.set_ring(joint.ring))
        for g in gb.elements
        if all(not monom[i] for monom in g.keys() for i in x_positions)
    ]
    logger.info("[kernel] %s: %d kernel generators from %d basis elements",
                table.label, len(kernel), len(gb.elements))
    return Ideal(target, tuple(kernel), f"ker psi {table.label}")


@dataclass(frozen=True)
class KernelCertificate:
    n: int
    r: int
    kernel_size: int
    candidate_size: int
    equal: bool
    kernel: tuple = field(default=(), compare=False)

    def basis_text(self) -> list:
        """The eliminated kernel generators in the text grammar."""
        return [format_polynomial(g) for g in self.kernel]

    def to_dict(self, with_basis: bool = False) -> dict:
        data = {
            "n": self.n,
            "r": self.r,
            "kernel_generators": self.kernel_size,
            "candidate_generators": self.candidate_size,
            "equal": self.equal,
        }
        if with_basis:
            data["kernel"] = self.basis_text()
        return data


def certify_kernel(n: int, r: int, budget: Optional[Budget] = None) -> KernelCertificate:
    kernel = kernel_via_elimination(section_minors(n, r), budget)
    candidate = candidate_ideal(n, r, budget)
    equal = ideals_equal(kernel, candidate, GREVLEX, budget)
    return KernelCertificate(n, r, len(kernel), len(candidate), equal, kernel.generators)


def containment_chain(n: int, budget: Optional[Budget] = None) -> dict:
    """K[0] inside K[1] inside K[n-1], checked on the candidate presentations."""
    k0 = candidate_ideal(n, 0)
    k1 = candidate_ideal(n, 1, budget)
    result = {"K0_in_K1": contains(buchberger(k1, GREVLEX, budget), k0.generators)}
    if n >= 3:
        top = buchberger(candidate_ideal(n, n - 1), GREVLEX, budget)
        result["K1_in_Kn-1"] = contains(top, k1.generators)
    return result


PAIR_ORDERINGS = {
    "lex": lambda i, j: (i, j),
    "colex": lambda i, j: (j, i),
    "diagonal": lambda i, j: (j - i, i),
    "antidiagonal": lambda i, j: (i + j, i),
}


@dataclass(frozen=True)
class KoszulProbe:
    name: str
    max_degree: int
    basis_size: int
    quadratic: bool


def pulled_back_order(iso: PosetIso, key, reverse: bool = False) -> TermOrder:
    """grevlex on Gr(n, n+2) variables induced by an ordering of their duals."""
    source = iso.source
    positions = {k: pos for pos, k in zip(source.t_positions, source.t_index_sets)}
    ranked = sorted(iso.forward.items(), key=lambda item: key(*item[1].elements), reverse=reverse)
    return permuted_grevlex([positions[a.elements] for a, _ in ranked])


def koszul_search(
    n: int, budget: Optional[Budget] = None, random_orders: int = 0, seed: int = 42
) -> list:
    """Probe pulled-back grevlex orders for a quadratic basis of the r = n-1 candidate.

    The outcome is reported, never asserted.
    """
    iso = PosetIso(n)
    ideal = candidate_ideal(n, n - 1)
    orders = []
    for name, key in PAIR_ORDERINGS.items():
        orders.append((name, pulled_back_order(iso, key)))
        orders.append((f"{name}-reversed", pulled_back_order(iso, key, reverse=True)))
    rng = np.random.default_rng(seed)
    for k in range(random_orders):
        perm = [int(v) for v in rng.permutation(ideal.registry.ngens)]
        orders.append((f"random-{k}", permuted_grevlex(perm)))
    probes = []
    for name, order in orders:
        gb = buchberger(ideal, order, budget.fresh(f"koszul {name}") if budget else None)
        probes.append(KoszulProbe(name, gb.max_degree, len(gb.elements), gb.max_degree <= 2))
        logger.info("[groebner] koszul probe %s: max degree %d", name, gb.max_degree)
    return probes


def verify_two_row_isomorphism(n: int, budget: Optional[Budget] = None) -> dict:
    """phi carries the r = n-1 candidate onto the kernel of the 2-minors of the two-row model."""
    iso = PosetIso(n)
    images = [phi_map(iso, g) for g in candidate_generators(n, n - 1)]
    model = minor_table(build_two_row_model(n), 2, label=f"2-minors of L, n={n}")
    vanishing = all(not psi_substitute(g, model) for g in images)
    kernel = kernel_via_elimination(model, budget)
    equal = ideals_equal(Ideal(iso.target, tuple(images), "phi image"), kernel, GREVLEX, budget)
    return {"phi_images_vanish": vanishing, "kernel_equal": equal}
