"""Declarative verification cases and the loop that runs them.

Each case is a picklable callable returning a CaseOutcome. Cases are grouped
by suite and expanded over the configured (n, r) grid. A case that raises
never stops the others: budget overruns become "not-determined", any other
error becomes "fail".
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from math import comb
from typing import Callable, Optional

from algebra.polynomial import format_polynomial
from grassmann.plucker import PosetIso, order_preserved, plucker_relations, t_registry
from groebner.buchberger import buchberger, normal_form
from groebner.fiber import (
    candidate_ideal,
    certify_kernel,
    containment_chain,
    fiber_report,
    koszul_search,
    psi_substitute,
    verify_two_row_isomorphism,
)
from hankel.sections import gruson_peskine_ranks, section_minors
from laplace.relations import (
    constant_total_rank,
    expected_flap_rank,
    expected_lap_rank,
    f_lap,
    flap_decomposition_n3,
    flap_structure,
    lap_relation_counts,
    lap_relations,
    lap_via_expansion,
)
from suite.config import SuiteConfig
from syzygy.birational import (
    gradient_birationality,
    minors_birationality,
    reduction_fiber_summary,
    rees_fiber_type_check,
)
from syzygy.eagon_northcott import (
    en_syzygies,
    expected_en_count,
    linear_syzygy_basis,
    span_contains,
)
from syzygy.gradient import euler_identity, verify_linsyz
from utilities.budget import Budget
from utilities.errors import BudgetExceededError, HankelFiberError

logger = logging.getLogger(__name__)

TOOL_VERSION = "0.1.0"
SCHEMA_VERSION = "1.0.0"

PASS = "pass"
FAIL = "fail"
NOT_DETERMINED = "not-determined"


@dataclass
class CaseOutcome:
    passed: bool
    metrics: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Case:
    case_id: str
    suite: str
    run: Callable
    required: bool = False
    slow: bool = False


@dataclass
class CaseResult:
    case_id: str
    suite: str
    status: str
    metrics: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    required: bool = False
    error: Optional[str] = None
    wall_time: Optional[float] = None

    def to_dict(self, timings: bool = False) -> dict:
        data = {
            "id": self.case_id,
            "suite": self.suite,
            "status": self.status,
            "metrics": dict(self.metrics),
            "certificates": dict(self.certificates),
        }
        if self.error:
            data["error"] = self.error
        if timings and self.wall_time is not None:
            data["wall_time"] = round(self.wall_time, 3)
        return data


@dataclass
class ReportDocument:
    version: str
    schema: str
    config: dict
    cases: list
    timings: bool = False

    @property
    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, NOT_DETERMINED: 0}
        for case in self.cases:
            counts[case.status] += 1
        counts["total"] = len(self.cases)
        return counts

    @property
    def failed(self) -> bool:
        return any(
            c.status == FAIL or (c.required and c.status == NOT_DETERMINED) for c in self.cases
        )

    def to_dict(self) -> dict:
        return {
            "version": {"tool": self.version, "schema": self.schema},
            "config": self.config,
            "cases": [c.to_dict(self.timings) for c in self.cases],
            "summary": self.summary,
        }


# relations


def plucker_psi_case(n: int, r: int, budget: Budget) -> CaseOutcome:
    table = section_minors(n, r)
    relations = plucker_relations(n)
    nonzero = [format_polynomial(p) for p in relations if psi_substitute(p, table)]
    return CaseOutcome(not nonzero, {"relations": len(relations), "nonvanishing": len(nonzero)})


def lap_psi_case(n: int, budget: Budget) -> CaseOutcome:
    table = section_minors(n, n - 1)
    relations = lap_relations(n)
    nonzero = [str(a) for a, p in relations if psi_substitute(p, table)]
    counts = lap_relation_counts(n)
    return CaseOutcome(
        not nonzero and counts["total"] == len(relations) == comb(n + 2, 4),
        {"relations": len(relations), **counts},
        {"nonvanishing": nonzero},
    )


def lap_expansion_case(n: int, budget: Budget) -> CaseOutcome:
    registry = t_registry(n)
    mismatched = [
        str(a) for a, p in lap_relations(n, registry) if lap_via_expansion(n, a, registry) != p
    ]
    return CaseOutcome(not mismatched, {"mismatched": len(mismatched)})


def flap_psi_case(n: int, budget: Budget) -> CaseOutcome:
    poly = f_lap(n, budget)
    image = psi_substitute(poly, section_minors(n, 1))
    return CaseOutcome(not image, {"terms": len(poly), "degree": n})


def flap_structure_case(n: int, budget: Budget) -> CaseOutcome:
    check = flap_structure(n, budget)
    return CaseOutcome(check.holds, check.to_dict())


def total_rank_case(n: int, budget: Budget) -> CaseOutcome:
    registry = t_registry(n)
    plucker_ok = all(constant_total_rank(p, registry) is not None for p in plucker_relations(n))
    lap_ok = all(
        constant_total_rank(p, registry) == expected_lap_rank(n, a)
        for a, p in lap_relations(n, registry)
    )
    metrics = {"plucker_constant": plucker_ok, "lap_matches": lap_ok}
    if n <= 4:
        metrics["flap_rank"] = constant_total_rank(f_lap(n, budget), registry)
        flap_ok = metrics["flap_rank"] == expected_flap_rank(n)
    else:
        flap_ok = True
    return CaseOutcome(plucker_ok and lap_ok and flap_ok, metrics)


def gruson_peskine_case(n: int, r: int, budget: Budget) -> CaseOutcome:
    square, rect, union = gruson_peskine_ranks(n, r)
    return CaseOutcome(
        square == rect == union, {"square_span": square, "rect_span": rect, "union_span": union}
    )


def poset_case(n: int, budget: Budget) -> CaseOutcome:
    iso = PosetIso(n)
    return CaseOutcome(
        iso.is_involutive() and order_preserved(iso),
        {"involutive": iso.is_involutive(), "order_preserved": order_preserved(iso)},
    )


def flap_decomposition_case(budget: Budget) -> CaseOutcome:
    holds = flap_decomposition_n3()
    return CaseOutcome(holds, {"decomposes": holds})


def flap_nonmembership_case(budget: Budget) -> CaseOutcome:
    gb = buchberger(candidate_ideal(3, 0), budget=budget)
    remainder = normal_form(f_lap(3, budget), gb)
    return CaseOutcome(bool(remainder), {"remainder_terms": len(remainder)})


# fiber


def fiber_case(n: int, r: int, budget: Budget) -> CaseOutcome:
    report = fiber_report(n, r, budget)
    return CaseOutcome(report.passed, report.metrics(), {"checks": report.checks})


def two_row_case(n: int, budget: Budget) -> CaseOutcome:
    checks = verify_two_row_isomorphism(n, budget)
    return CaseOutcome(all(checks.values()), dict(checks))


def containment_case(n: int, budget: Budget) -> CaseOutcome:
    checks = containment_chain(n, budget)
    return CaseOutcome(all(checks.values()), dict(checks))


def koszul_case(n: int, budget: Budget) -> CaseOutcome:
    probes = koszul_search(n, budget)
    quadratic = [p.name for p in probes if p.quadratic]
    return CaseOutcome(
        True,
        {"orders": len(probes), "quadratic_orders": len(quadratic)},
        {"quadratic": quadratic},
    )


# kernel


def kernel_case(n: int, r: int, budget: Budget) -> CaseOutcome:
    certificate = certify_kernel(n, r, budget)
    return CaseOutcome(certificate.equal, certificate.to_dict())


# syzygy


def en_case(n: int, r: int, budget: Budget) -> CaseOutcome:
    syz = en_syzygies(n, r)
    annihilates = syz.annihilates()
    return CaseOutcome(
        annihilates and syz.size == expected_en_count(n),
        {"columns": syz.size, "annihilates": annihilates},
    )


def linear_syzygy_case(n: int, r: int, budget: Budget, seed: int = 42) -> CaseOutcome:
    report = minors_birationality(n, r, budget, seed)
    basis = linear_syzygy_basis(section_minors(n, r).values())
    contains_en = span_contains(basis, en_syzygies(n, r))
    expected = comb(n + 2, 2) - 1
    metrics = {
        "linear_syzygies": basis.size,
        "rank": report.linear_syzygy_rank,
        "expected_rank": expected,
        "jacobian_rank": report.jacobian_rank,
        "contains_en": contains_en,
        "verdict": report.verdict,
    }
    return CaseOutcome(
        report.linear_syzygy_rank == expected and contains_en and report.verdict == "birational-certified",
        metrics,
        {"rank": report.certificate},
    )


def linsyz_case(n: int, budget: Budget, seed: int = 42) -> CaseOutcome:
    check = verify_linsyz(n, seed)
    euler = euler_identity(n) if n <= 3 else True
    return CaseOutcome(
        check.holds and euler,
        {"product_zero": check.product_zero, "rank": check.rank, "euler": euler},
        {"rank": check.certificate},
    )


def gradient_case(n: int, budget: Budget, seed: int = 42) -> CaseOutcome:
    summary = reduction_fiber_summary(n, budget)
    report = gradient_birationality(n, budget, seed)
    fiber = fiber_report(n, n - 1, budget)
    expected = 2 ** (n + 1) - n - 2
    metrics = {
        "e_reduction": summary.multiplicity,
        "e_fiber": fiber.hilbert.multiplicity,
        "expected_e": expected,
        "dim": summary.krull_dim,
        "verdict": report.verdict,
    }
    return CaseOutcome(
        summary.multiplicity == fiber.hilbert.multiplicity == expected
        and report.verdict == "birational-certified",
        metrics,
        {"rank": report.certificate},
    )


# rees


def rees_case(n: int, budget: Budget) -> CaseOutcome:
    report = rees_fiber_type_check(n, 1, budget)
    if not report.determined:
        raise BudgetExceededError(f"Rees ideal for n={n} not determined")
    inventory = report.inventory()
    metrics = {"fiber_type": report.fiber_type, "inventory": inventory}
    return CaseOutcome(
        bool(report.fiber_type) and all(report.checks.values()),
        metrics,
        {"checks": report.checks},
    )


def _fiber_rs(n: int) -> list:
    return sorted({0, 1, n - 1})


def build_cases(config: SuiteConfig) -> list:
    """Every case the configuration enables, in declared suite order."""
    cases: list = []
    seed = config.seed
    for suite in config.suites:
        for n in config.n_range:
            rs = [r for r in range(n) if config.r_allowed(r)]
            if suite == "relations":
                for r in rs:
                    cases.append(Case(f"relations/plucker-psi/n{n}/r{r}", suite, partial(plucker_psi_case, n, r)))
                    cases.append(Case(f"relations/gruson-peskine/n{n}/r{r}", suite, partial(gruson_peskine_case, n, r)))
                cases.append(Case(f"relations/poset/n{n}", suite, partial(poset_case, n)))
                if config.r_allowed(n - 1):
                    cases.append(Case(f"relations/lap-psi/n{n}", suite, partial(lap_psi_case, n)))
                    cases.append(Case(f"relations/lap-expansion/n{n}", suite, partial(lap_expansion_case, n)))
                if n <= 4:
                    cases.append(Case(f"relations/flap-psi/n{n}", suite, partial(flap_psi_case, n), slow=n == 4))
                    cases.append(Case(f"relations/flap-structure/n{n}", suite, partial(flap_structure_case, n)))
                cases.append(Case(f"relations/total-rank/n{n}", suite, partial(total_rank_case, n)))
                if n == 3:
                    cases.append(Case("relations/flap-decomposition/n3", suite, partial(flap_decomposition_case)))
                    cases.append(Case("relations/flap-nonmembership/n3", suite, partial(flap_nonmembership_case)))
            elif suite == "fiber":
                for r in _fiber_rs(n):
                    if config.r_allowed(r):
                        slow = n >= 4 and r == 1
                        cases.append(Case(f"fiber/report/n{n}/r{r}", suite, partial(fiber_case, n, r), slow=slow))
                if n <= 3:
                    cases.append(Case(f"fiber/two-row/n{n}", suite, partial(two_row_case, n)))
                    cases.append(Case(f"fiber/containment/n{n}", suite, partial(containment_case, n)))
                if n == 3:
                    cases.append(Case(f"fiber/koszul/n{n}", suite, partial(koszul_case, n)))
            elif suite == "kernel" and n <= 3:
                for r in rs:
                    cases.append(Case(f"kernel/n{n}/r{r}", suite, partial(kernel_case, n, r), required=True))
            elif suite == "syzygy":
                for r in rs:
                    cases.append(Case(f"syzygy/en/n{n}/r{r}", suite, partial(en_case, n, r)))
                    if n in (3, 4) and r >= 1:
                        cases.append(
                            Case(
                                f"syzygy/linear-rank/n{n}/r{r}",
                                suite,
                                partial(linear_syzygy_case, n, r, seed=seed),
                                slow=n == 4,
                            )
                        )
                cases.append(Case(f"syzygy/linsyz/n{n}", suite, partial(linsyz_case, n, seed=seed)))
                if n <= 3:
                    cases.append(Case(f"syzygy/gradient/n{n}", suite, partial(gradient_case, n, seed=seed)))
            elif suite == "rees" and n <= 3:
                cases.append(Case(f"rees/n{n}", suite, partial(rees_case, n), required=n == 2, slow=n == 3))
    if not config.include_slow:
        cases = [c for c in cases if not c.slow]
    return cases


def run_case(case: Case, config: SuiteConfig) -> CaseResult:
    budget = config.budget(case.case_id)
    logger.info("[suite] %s started", case.case_id)
    started = time.monotonic()
    try:
        outcome = case.run(budget)
        status = PASS if outcome.passed else FAIL
        result = CaseResult(
            case.case_id, case.suite, status, outcome.metrics, outcome.certificates, case.required
        )
    except BudgetExceededError as exc:
        stage = exc.stats.get("stage", case.case_id)
        logger.warning("[suite] %s not determined in %s: %s", case.case_id, stage, exc)
        result = CaseResult(
            case.case_id, case.suite, NOT_DETERMINED, {"budget": exc.stats}, {}, case.required,
            f"{exc} (in {stage})",
        )
    except (HankelFiberError, ArithmeticError, ValueError, KeyError) as exc:
        logger.error("[suite] %s failed: %s", case.case_id, exc)
        result = CaseResult(case.case_id, case.suite, FAIL, {}, {}, case.required, str(exc))
    except Exception as exc:
        logger.exception("[suite] %s crashed", case.case_id)
        result = CaseResult(case.case_id, case.suite, FAIL, {}, {}, case.required, repr(exc))
    result.wall_time = time.monotonic() - started
    logger.info("[suite] %s finished: %s", case.case_id, result.status)
    return result


def run_suite(config: SuiteConfig) -> ReportDocument:
    cases = build_cases(config)
    logger.info("[suite] running %d cases with %d worker(s)", len(cases), config.workers)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(run_case, cases, [config] * len(cases)))
    else:
        results = [run_case(case, config) for case in cases]
    results.sort(key=lambda r: r.case_id)
    doc = ReportDocument(TOOL_VERSION, SCHEMA_VERSION, config.echo(), results, config.timings)
    logger.info("[suite] summary %s", doc.summary)
    return doc
