import pytest

from grassmann.plucker import t_registry
from groebner.fiber import (
    candidate_generators,
    certify_kernel,
    containment_chain,
    expected_invariants,
    fiber_report,
    koszul_search,
    psi_substitute,
    verify_two_row_isomorphism,
)
from hankel.sections import section_minors
from utilities.budget import Budget
from utilities.errors import BudgetExceededError, ShapeError, UnassignedVariableError


@pytest.mark.parametrize(
    "n,r,dim,e",
    [(2, 0, 5, 2), (3, 0, 7, 5)],
)
def test_grassmannian_fiber(n, r, dim, e):
    report = fiber_report(n, r)
    assert report.passed, report.checks
    assert report.metrics()["dim"] == dim
    assert report.metrics()["e"] == e


@pytest.mark.parametrize(
    "n,r,dim,e,h,a",
    [(2, 1, 4, 4, 2, -2), (3, 2, 5, 11, 2, -3), (3, 1, 6, 15, 4, -2)],
)
def test_degenerate_fiber(n, r, dim, e, h, a):
    report = fiber_report(n, r)
    assert report.passed, report.checks
    metrics = report.metrics()
    assert (metrics["dim"], metrics["e"], metrics["h_degree"], metrics["a"]) == (dim, e, h, a)
    assert metrics["reg"] == h


@pytest.mark.slow
def test_top_fiber_n4():
    report = fiber_report(4, 3)
    assert report.passed, report.checks
    assert report.metrics()["e"] == 26
    assert report.metrics()["h_degree"] == 3


def test_expected_invariants_agree_at_n2():
    assert expected_invariants(2, 1)["e"] == 4
    assert expected_invariants(4, 0) == {"dim": 9, "e": 14}
    assert expected_invariants(5, 2) == {"dim": 9}


def test_candidate_needs_a_known_family():
    with pytest.raises(ShapeError):
        candidate_generators(4, 2)
    with pytest.raises(ShapeError):
        candidate_generators(3, 3)


def test_candidate_counts():
    assert len(candidate_generators(3, 0)) == 5
    assert len(candidate_generators(3, 1)) == 6
    assert len(candidate_generators(4, 3)) == 15 + 15


@pytest.mark.parametrize("r", [0, 1])
def test_kernel_certified_n2(r):
    cert = certify_kernel(2, r)
    assert cert.equal
    assert cert.to_dict()["n"] == 2
    assert "kernel" not in cert.to_dict()
    table = section_minors(2, r)
    basis = cert.to_dict(with_basis=True)["kernel"]
    assert len(basis) == cert.kernel_size
    for text in basis:
        assert not psi_substitute(t_registry(2).parse(text), table)


@pytest.mark.slow
@pytest.mark.parametrize("r", [0, 1, 2])
def test_kernel_certified_n3(r):
    assert certify_kernel(3, r).equal


def test_kernel_budget_overrun():
    with pytest.raises(BudgetExceededError) as info:
        certify_kernel(2, 1, Budget(max_pairs=1, max_seconds=None))
    assert info.value.stats["pairs"] >= 1
    assert info.value.stats["stage"] == "graph of I_2(H[1])"


@pytest.mark.parametrize("n", [2, 3])
def test_containment_chain(n):
    chain = containment_chain(n)
    assert all(chain.values())
    assert ("K1_in_Kn-1" in chain) == (n >= 3)


def test_two_row_model_n2():
    result = verify_two_row_isomorphism(2)
    assert result == {"phi_images_vanish": True, "kernel_equal": True}


def test_psi_rejects_unassigned_variables():
    table = section_minors(2, 0)
    with pytest.raises(UnassignedVariableError):
        psi_substitute(t_registry(3).T((1, 2, 3)), table)


def test_koszul_probe_reports_every_order():
    probes = koszul_search(3, random_orders=2, seed=7)
    assert len(probes) == 10
    assert all(p.max_degree >= 2 for p in probes)
    assert all(p.quadratic == (p.max_degree <= 2) for p in probes)
