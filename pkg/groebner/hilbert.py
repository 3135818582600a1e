"""Hilbert series of monomial ideals by pivot recursion."""

import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.rings import ring

from algebra.polynomial import is_homogeneous
from groebner.buchberger import GroebnerBasis
from utilities.errors import NonHomogeneousError

logger = logging.getLogger(__name__)

SERIES_RING, t = ring("t", ZZ)
BRUTE_FORCE_DEGREE = 6


def _minimal(monomials) -> tuple:
    gens = sorted(set(monomials), key=lambda m: (sum(m), m))
    kept = []
    for m in gens:
        if not any(all(a <= b for a, b in zip(g, m)) for g in kept):
            kept.append(m)
    return tuple(kept)


def _coprime(gens) -> bool:
    seen = set()
    for m in gens:
        support = {i for i, e in enumerate(m) if e}
        if support & seen:
            return False
        seen |= support
    return True


def hilbert_numerator(monomials: Sequence[tuple], nvars: int):
    """N(t) with HS(S/M) = N(t) / (1-t)^nvars."""
    memo: dict = {}

    def numerator(gens: tuple):
        if gens in memo:
            return memo[gens]
        if _coprime(gens):
            value = SERIES_RING.one
            for m in gens:
                value = value * (1 - t ** sum(m))
            memo[gens] = value
            return value
        counts = [0] * nvars
        for m in gens:
            if sum(m) > 1:
                for i, e in enumerate(m):
                    if e:
                        counts[i] += 1
        pivot = max(range(nvars), key=lambda i: (counts[i], -i))
        unit = tuple(1 if i == pivot else 0 for i in range(nvars))
        added = _minimal([m for m in gens if not m[pivot]] + [unit])
        colon = _minimal(
            [tuple(e - 1 if i == pivot and e else e for i, e in enumerate(m)) for m in gens]
        )
        value = numerator(added) + t * numerator(colon)
        memo[gens] = value
        return value

    return numerator(_minimal(monomials))


@dataclass(frozen=True)
class HilbertSummary:
    """q(t)/(1-t)^krull_dim with q(1) != 0; a-invariant and regularity assume CM."""

    numerator: tuple
    krull_dim: int
    nvars: int
    cm_assumed: bool = True

    @property
    def multiplicity(self) -> int:
        return sum(self.numerator)

    @property
    def h_degree(self) -> int:
        return len(self.numerator) - 1

    @property
    def a_invariant(self) -> int:
        return self.h_degree - self.krull_dim

    @property
    def regularity(self) -> int:
        return self.h_degree

    @property
    def reduction_number(self) -> int:
        return self.h_degree

    @property
    def codim(self) -> int:
        return self.nvars - self.krull_dim

    def hilbert_function(self, degree: int) -> int:
        if self.krull_dim == 0:
            return self.numerator[degree] if degree < len(self.numerator) else 0
        return sum(
            q * comb(degree - i + self.krull_dim - 1, self.krull_dim - 1)
            for i, q in enumerate(self.numerator)
            if degree >= i
        )

    def to_dict(self) -> dict:
        return {
            "h_vector": list(self.numerator),
            "dim": self.krull_dim,
            "e": self.multiplicity,
            "h_degree": self.h_degree,
            "a": self.a_invariant,
            "reg": self.regularity,
            "reduction_number": self.reduction_number,
            "cm_assumed": self.cm_assumed,
        }


def summary_from_monomials(monomials: Sequence[tuple], nvars: int, cm_assumed: bool = True):
    if any(sum(m) == 0 for m in monomials):
        raise ValueError("the unit ideal has an empty quotient")
    q = hilbert_numerator(monomials, nvars)
    one_minus_t = 1 - t
    dim = nvars
    while dim > 0 and q(1) == 0:
        q = q.exquo(one_minus_t)
        dim -= 1
    coeffs = [0] * (q.degree() + 1)
    for (e,), c in q.items():
        coeffs[e] = int(c)
    return HilbertSummary(tuple(coeffs), dim, nvars, cm_assumed)


def hilbert_summary(gb: GroebnerBasis, cm_assumed: bool = True) -> HilbertSummary:
    """Hilbert data of R/I read off the initial ideal of a homogeneous basis."""
    if not all(is_homogeneous(g) for g in gb.elements):
        raise NonHomogeneousError("Hilbert series needs a homogeneous ideal")
    summary = summary_from_monomials(gb.leading_monomials, gb.registry.ngens, cm_assumed)
    logger.info(
        "[hilbert] dim=%d e=%d h_degree=%d a=%d",
        summary.krull_dim, summary.multiplicity, summary.h_degree, summary.a_invariant,
    )
    return summary


def standard_monomial_counts(
    monomials: Sequence[tuple], nvars: int, max_degree: int = BRUTE_FORCE_DEGREE
) -> list:
    """Brute-force count of monomials outside the ideal, degrees 0..max_degree."""
    lms = np.array(monomials, dtype=np.int64).reshape(-1, nvars)
    counts = []
    for d in range(max_degree + 1):
        if d == 0:
            counts.append(0 if any(not row.any() for row in lms) else 1)
            continue
        exps = np.zeros((comb(nvars + d - 1, d), nvars), dtype=np.int64)
        for row, combo in enumerate(combinations_with_replacement(range(nvars), d)):
            exps[row] = np.bincount(combo, minlength=nvars)
        inside = np.zeros(len(exps), dtype=bool)
        for lm in lms:
            inside |= (exps >= lm).all(axis=1)
        counts.append(int((~inside).sum()))
    return counts


def hilbert_function_matches(
    gb: GroebnerBasis, summary: HilbertSummary, max_degree: int = BRUTE_FORCE_DEGREE
) -> bool:
    brute = standard_monomial_counts(gb.leading_monomials, gb.registry.ngens, max_degree)
    return brute == [summary.hilbert_function(d) for d in range(max_degree + 1)]
