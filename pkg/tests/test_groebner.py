import pytest

from algebra.orders import GREVLEX, LEX, TermOrder, elimination_order, permuted_grevlex
from algebra.polynomial import VariableRegistry
from grassmann.plucker import plucker_relations, t_registry
from groebner.buchberger import (
    Ideal,
    buchberger,
    contains,
    ideals_equal,
    is_groebner,
    normal_form,
)
from groebner.fiber import candidate_ideal, kernel_via_elimination
from groebner.hilbert import (
    hilbert_function_matches,
    hilbert_summary,
    standard_monomial_counts,
    summary_from_monomials,
)
from hankel.sections import section_minors
from syzygy.gradient import gradient_table
from utilities.budget import Budget
from utilities.errors import BudgetExceededError, IncompleteBasisError, NonHomogeneousError


@pytest.fixture
def two():
    return VariableRegistry(x_count=2)


@pytest.fixture
def three():
    return VariableRegistry(x_count=3)


def same_basis(gb, texts):
    elements = gb.in_registry()
    expected = [gb.registry.parse(t) for t in texts]
    return len(elements) == len(expected) and all(p in elements for p in expected)


def test_lex_basis(two):
    f = two.parse("x1^2 + 2*x1*x2^2")
    g = two.parse("x1*x2 + 2*x2^3 - 1")
    gb = buchberger(Ideal(two, (f, g)), LEX)
    assert same_basis(gb, ["x1", "x2^3 - 1/2"])
    assert gb.complete


def test_grevlex_basis(two):
    f = two.parse("x1^3 - 2*x1*x2")
    g = two.parse("x1^2*x2 + x1 - 2*x2^2")
    gb = buchberger(Ideal(two, (f, g)), GREVLEX)
    assert same_basis(gb, ["x1*x2", "x1^2", "x2^2 - 1/2*x1"])
    assert is_groebner(gb)


def test_twisted_cubic(three):
    f = three.parse("x2 - x1^2")
    g = three.parse("x3 - x1^3")
    gb = buchberger(Ideal(three, (f, g)), LEX)
    assert same_basis(gb, ["x1^2 - x2", "x1*x2 - x3", "x1*x3 - x2^2", "x2^3 - x3^2"])


def test_normal_form_and_membership(three):
    ideal = Ideal(three, (three.parse("x1*x2 - x3"), three.parse("x2^2 - x1")))
    gb = buchberger(ideal)
    assert not normal_form(three.parse("x1*x2^3 - x2^2*x3"), gb)
    assert contains(gb, ideal.generators)
    assert normal_form(three.x(3), gb)


def test_ideal_equality_is_order_independent(three):
    a = Ideal(three, (three.parse("x1 - x2"), three.parse("x2 - x3")))
    b = Ideal(three, (three.parse("x1 - x3"), three.parse("x1 + x2 - 2*x3")))
    assert ideals_equal(a, b, GREVLEX)
    assert ideals_equal(a, b, LEX)
    assert not ideals_equal(a, Ideal(three, (three.parse("x1 - x2"),)))


def test_ideal_drops_zero_and_duplicates(two):
    ideal = Ideal(two, (two.zero, two.x(1), two.x(1)))
    assert len(ideal) == 1


def test_elimination_order(three):
    order = elimination_order((0,), 3)
    x2_cubed = (0, 3, 0)
    x1 = (1, 0, 0)
    assert order(x1) > order(x2_cubed)
    gb = buchberger(Ideal(three, (three.parse("x2 - x1^2"), three.parse("x3 - x1^3"))), order)
    eliminated = [g for g in gb.in_registry() if all(not m[0] for m in g.keys())]
    assert any(g == three.parse("x2^3 - x3^2") or g == three.parse("x3^2 - x2^3") for g in eliminated)


def test_permuted_order():
    order = permuted_grevlex((2, 1, 0))
    assert order((0, 0, 1)) > order((1, 0, 0))
    with pytest.raises(ValueError):
        TermOrder("grevlex", permutation=(0, 0, 1))
    with pytest.raises(ValueError):
        TermOrder("weird")


def test_budget_overrun_keeps_partial_basis(three):
    ideal = Ideal(three, (three.parse("x2 - x1^2"), three.parse("x3 - x1^3")))
    with pytest.raises(BudgetExceededError) as info:
        buchberger(ideal, LEX, Budget(max_pairs=1, max_seconds=None))
    partial = info.value.partial
    assert not partial.complete
    assert info.value.stats["pairs"] >= 1
    with pytest.raises(IncompleteBasisError):
        normal_form(three.x(1), partial)


def test_hilbert_of_monomial_ideal():
    summary = summary_from_monomials([(2, 0), (1, 1)], 2)
    assert summary.numerator == (1, 1, -1)
    assert summary.krull_dim == 1
    assert summary.multiplicity == 1
    assert [summary.hilbert_function(d) for d in range(4)] == [1, 2, 1, 1]


def test_hilbert_of_complete_intersection(three):
    gb = buchberger(Ideal(three, (three.parse("x1^2"), three.parse("x2^3"))))
    summary = hilbert_summary(gb)
    assert summary.numerator == (1, 2, 2, 1)
    assert summary.krull_dim == 1
    assert summary.multiplicity == 6
    assert summary.a_invariant == 2
    assert hilbert_function_matches(gb, summary)


def test_hilbert_artinian():
    summary = summary_from_monomials([(1, 0), (0, 2)], 2)
    assert summary.krull_dim == 0
    assert summary.numerator == (1, 1)
    assert [summary.hilbert_function(d) for d in range(4)] == [1, 1, 0, 0]


def test_hilbert_needs_homogeneous_input(two):
    gb = buchberger(Ideal(two, (two.parse("x1^2 - x2"),)))
    with pytest.raises(NonHomogeneousError):
        hilbert_summary(gb)


def test_standard_monomial_counts():
    assert standard_monomial_counts([(1, 1)], 2, max_degree=3) == [1, 2, 2, 2]


@pytest.mark.parametrize("order", [LEX, GREVLEX])
def test_returned_bases_pass_the_s_pair_check(three, order):
    gens = ("x1*x3 - x2^2", "x2*x3 - x1^3", "x3^2 - x1^2*x2")
    ideal = Ideal(three, tuple(three.parse(g) for g in gens))
    assert is_groebner(buchberger(ideal, order))


@pytest.mark.parametrize("n", [2, 3])
def test_plucker_and_candidate_bases_pass_the_s_pair_check(n):
    assert is_groebner(buchberger(Ideal(t_registry(n), tuple(plucker_relations(n)))))
    assert is_groebner(buchberger(candidate_ideal(n, 1)))


@pytest.mark.parametrize("r", [0, 1])
def test_kernel_basis_hilbert_function_by_brute_force(r):
    kernel = kernel_via_elimination(section_minors(2, r))
    gb = buchberger(kernel)
    assert is_groebner(gb)
    assert hilbert_function_matches(gb, hilbert_summary(gb))


def test_reduction_basis_hilbert_function_by_brute_force():
    gb = buchberger(kernel_via_elimination(gradient_table(2, 1)))
    summary = hilbert_summary(gb)
    assert hilbert_function_matches(gb, summary)
    assert summary.multiplicity == 4
