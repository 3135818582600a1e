"""Buchberger's algorithm with sugar selection and Gebauer-Moeller pair elimination."""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from algebra.orders import GREVLEX, TermOrder
from algebra.polynomial import Polynomial, VariableRegistry
from utilities.budget import Budget
from utilities.errors import BudgetExceededError, IncompleteBasisError

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 500


@dataclass(frozen=True)
class Ideal:
    registry: VariableRegistry
    generators: tuple
    label: str = ""

    def __post_init__(self):
        kept = []
        for g in self.generators:
            if not g:
                continue
            if not self.registry.owns(g):
                g = self.registry.convert(g)
            if any(g == h for h in kept):
                continue
            kept.append(g)
        object.__setattr__(self, "generators", tuple(kept))

    def __len__(self):
        return len(self.generators)

    def degrees(self) -> dict:
        counts: dict = {}
        for g in self.generators:
            d = max(sum(m) for m in g.keys())
            counts[d] = counts.get(d, 0) + 1
        return dict(sorted(counts.items()))

    def plus(self, extra: Iterable[Polynomial], label: str = "") -> "Ideal":
        return Ideal(self.registry, self.generators + tuple(extra), label or self.label)


@dataclass
class GroebnerStats:
    pairs: int = 0
    reductions: int = 0
    zero_reductions: int = 0
    max_degree: int = 0

    def to_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "reductions": self.reductions,
            "zero_reductions": self.zero_reductions,
            "max_degree": self.max_degree,
        }


@dataclass(frozen=True)
class GroebnerBasis:
    registry: VariableRegistry
    order: TermOrder
    elements: tuple
    stats: GroebnerStats = field(default_factory=GroebnerStats, compare=False)
    complete: bool = True

    @property
    def ring(self):
        return self.registry.ring.clone(order=self.order.sympy_order())

    @property
    def leading_monomials(self) -> list:
        return [g.LM for g in self.elements]

    @property
    def max_degree(self) -> int:
        return max((max(sum(m) for m in g.keys()) for g in self.elements), default=0)

    def in_registry(self) -> list:
        """Basis elements moved back into the registry's default ring."""
        return [g.set_ring(self.registry.ring) for g in self.elements]


def spoly(f, g, lmf, lmg):
    """S-polynomial of monic f and g."""
    ring = f.ring
    lcm = ring.monomial_lcm(lmf, lmg)
    return f.mul_monom(ring.monomial_div(lcm, lmf)) - g.mul_monom(ring.monomial_div(lcm, lmg))


def reduce_fully(p, basis, lms, stats: Optional[GroebnerStats] = None):
    """Remainder of p on division by monic `basis`; the first divisor in list order wins."""
    ring = p.ring
    div = ring.monomial_div
    work = p.copy()
    remainder = ring.zero
    while work:
        lead = work.leading_expv()
        coeff = work[lead]
        for g, lm in zip(basis, lms):
            quotient = div(lead, lm)
            if quotient is not None:
                work = work._iadd_poly_monom(g, (quotient, -coeff))
                if stats is not None:
                    stats.reductions += 1
                break
        else:
            remainder[lead] = coeff
            del work[lead]
    return remainder


def _update(G, lms, pairs, heap, sugar, f, lmf):
    """Add f to G, dropping pairs by the Gebauer-Moeller criteria."""
    ring = f.ring
    lcm = ring.monomial_lcm
    mul = ring.monomial_mul
    div = ring.monomial_div
    k = len(G)

    for p in list(pairs):
        i, j = p
        lij = lcm(lms[i], lms[j])
        if div(lij, lmf) is not None and lij != lcm(lms[i], lmf) and lij != lcm(lms[j], lmf):
            pairs.discard(p)

    lcm_groups: dict = {}
    for i in range(k):
        lcm_groups.setdefault(lcm(lms[i], lmf), []).append(i)
    minimal = []
    for L in sorted(lcm_groups, key=ring.order):
        if all(div(L, other) is None for other in minimal):
            minimal.append(L)
    G.append(f)
    lms.append(lmf)
    degree_f = sum(lmf)
    for L in minimal:
        group = lcm_groups[L]
        if any(lcm(lms[i], lmf) == mul(lms[i], lmf) for i in group):
            continue
        i = min(group)
        pair_sugar = max(sugar[i] + sum(L) - sum(lms[i]), sugar[k] + sum(L) - degree_f)
        pairs.add((i, k))
        heapq.heappush(heap, (pair_sugar, k, i))


def _minimalize(G, lms, order):
    chosen = []
    for g, lm in sorted(zip(G, lms), key=lambda item: order(item[1])):
        if all(g.ring.monomial_div(lm, other) is None for _, other in chosen):
            chosen.append((g, lm))
    return chosen


def _interreduce(chosen):
    basis = [g for g, _ in chosen]
    lms = [lm for _, lm in chosen]
    reduced = []
    for i, g in enumerate(basis):
        others = basis[:i] + basis[i + 1 :]
        other_lms = lms[:i] + lms[i + 1 :]
        reduced.append(reduce_fully(g, others, other_lms).monic())
    return reduced


def buchberger(
    ideal: Ideal,
    order: TermOrder = GREVLEX,
    budget: Optional[Budget] = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of `ideal` under `order`.

    Pairs are processed by (sugar, newer index, older index). When the budget
    runs out the raised BudgetExceededError carries the partial basis as
    ``partial`` with ``complete=False``.
    """
    budget = budget or Budget.unlimited("groebner")
    ring = ideal.registry.ring.clone(order=order.sympy_order())
    stats = GroebnerStats()
    G: list = []
    lms: list = []
    sugar: list = []
    pairs: set = set()
    heap: list = []
    label = ideal.label or "ideal"
    logger.info(
        "[groebner] %s: %d generators, %d variables, order %s",
        label, len(ideal), ring.ngens, order.describe(),
    )

    def add(poly, poly_sugar):
        poly = poly.monic()
        sugar.append(poly_sugar)
        stats.max_degree = max(stats.max_degree, max(sum(m) for m in poly.keys()))
        _update(G, lms, pairs, heap, sugar, poly, poly.LM)

    try:
        for g in sorted(
            (g.set_ring(ring) for g in ideal.generators),
            key=lambda p: (max(sum(m) for m in p.keys()), ring.order(p.LM)),
        ):
            r = reduce_fully(g, G, lms, stats)
            if r:
                add(r, max(sum(m) for m in g.keys()))
        while pairs:
            pair_sugar, j, i = heapq.heappop(heap)
            if (i, j) not in pairs:
                continue
            pairs.discard((i, j))
            budget.charge()
            stats.pairs += 1
            if stats.pairs % PROGRESS_EVERY == 0:
                logger.debug(
                    "[groebner] %s: %d pairs, basis %d, queue %d, sugar %d",
                    label, stats.pairs, len(G), len(pairs), pair_sugar,
                )
            s = spoly(G[i], G[j], lms[i], lms[j])
            r = reduce_fully(s, G, lms, stats)
            if r:
                add(r, pair_sugar)
            else:
                stats.zero_reductions += 1
    except BudgetExceededError as exc:
        exc.stats.update(stats.to_dict())
        exc.stats.setdefault("stage", label)
        exc.partial = GroebnerBasis(ideal.registry, order, tuple(G), stats, complete=False)
        raise

    elements = tuple(
        sorted(_interreduce(_minimalize(G, lms, ring.order)), key=lambda g: ring.order(g.LM))
    )
    logger.info(
        "[groebner] %s: basis of %d elements after %d pairs (%d reductions, max degree %d)",
        label, len(elements), stats.pairs, stats.reductions, stats.max_degree,
    )
    return GroebnerBasis(ideal.registry, order, elements, stats, complete=True)


def normal_form(p: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Unique remainder of p modulo a complete basis, in the registry ring."""
    if not gb.complete:
        raise IncompleteBasisError("normal form needs a complete Groebner basis")
    if not gb.registry.owns(p):
        p = gb.registry.convert(p)
    ring = gb.ring
    basis = list(gb.elements)
    remainder = reduce_fully(p.set_ring(ring), basis, [g.LM for g in basis])
    return remainder.set_ring(gb.registry.ring)


def contains(gb: GroebnerBasis, polys: Iterable[Polynomial]) -> bool:
    return all(not normal_form(p, gb) for p in polys)


def is_groebner(gb: GroebnerBasis) -> bool:
    """Every S-pair of the basis reduces to zero."""
    basis = list(gb.elements)
    lms = [g.LM for g in basis]
    for j in range(len(basis)):
        for i in range(j):
            s = spoly(basis[i], basis[j], lms[i], lms[j])
            if reduce_fully(s, basis, lms):
                return False
    return True


def ideals_equal(
    a: Ideal, b: Ideal, order: TermOrder = GREVLEX, budget: Optional[Budget] = None
) -> bool:
    """Two-sided membership of generators; never compares bases verbatim."""
    gb_a = buchberger(a, order, budget)
    gb_b = buchberger(b, order, budget)
    return contains(gb_a, b.generators) and contains(gb_b, a.generators)
