from math import comb

import pytest

from algebra.linalg import sample_points
from algebra.matrix import determinant
from grassmann.plucker import plucker_relations, t_registry
from groebner.buchberger import Ideal, buchberger, normal_form
from groebner.fiber import psi_substitute
from hankel.sections import HankelSpec, build_section, section_minors
from laplace.block_matrix import (
    LaplaceExpander,
    build_L1,
    build_L_a,
    expansion_agrees_at_points,
    realize,
    terms_to_polynomial,
)
from laplace.relations import (
    constant_total_rank,
    expected_flap_rank,
    expected_lap_rank,
    f_lap,
    flap_decomposition_n3,
    flap_structure,
    lap_polynomial,
    lap_relation_counts,
    lap_relations,
    lap_via_expansion,
)
from utilities.errors import ShapeError

F_LAP_3 = (
    "T[1,2,3]*T[3,4,5]^2 - T[1,2,4]*T[2,4,5]*T[3,4,5] + T[1,2,5]*T[1,4,5]*T[3,4,5]"
    " + 2*T[1,2,5]*T[2,3,5]*T[3,4,5] - T[1,2,5]*T[2,4,5]^2 + T[1,3,4]*T[1,4,5]*T[3,4,5]"
    " - T[1,3,5]^2*T[3,4,5] - T[1,3,5]*T[2,3,4]*T[3,4,5] + T[1,3,5]*T[2,3,5]*T[2,4,5]"
    " - T[1,4,5]*T[2,3,4]*T[2,4,5] - T[2,3,4]^2*T[3,4,5] + 2*T[2,3,4]*T[2,3,5]*T[2,4,5]"
    " - T[2,3,5]^3"
)


def test_L_a_layout():
    m = build_L_a(3, (4,))
    assert m.labels == ((1, 2, 3, 4, 5, 0), (2, 3, 4, 5, 0, 4))
    with pytest.raises(ShapeError):
        build_L_a(3, (1, 2))


def test_L1_layout_n3():
    m = build_L1(3)
    assert m.row_blocks == 3
    assert m.col_count == 9
    assert m.labels == (
        (1, 2, 3, 4, 5, 0, 0, 0, 0),
        (2, 3, 4, 5, 0, 1, 2, 3, 4),
        (0, 0, 0, 0, 0, 2, 3, 4, 5),
    )


def test_lap_5_6_golden():
    registry = t_registry(4)
    expected = registry.parse("-T[2,4,5,6]^2 + T[2,3,5,6]*T[3,4,5,6] + T[1,4,5,6]*T[3,4,5,6]")
    assert lap_polynomial(4, (5, 6), registry) == expected


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lap_formula_matches_block_expansion(n):
    registry = t_registry(n)
    for a, p in lap_relations(n, registry):
        assert lap_via_expansion(n, a, registry) == p


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lap_vanishes_on_top_section(n):
    table = section_minors(n, n - 1)
    for a, p in lap_relations(n):
        assert not psi_substitute(p, table), f"LAP_{a}"


@pytest.mark.parametrize("n", [3, 4, 5])
def test_lap_does_not_vanish_generically(n):
    table = section_minors(n, 0)
    assert any(psi_substitute(p, table) for _, p in lap_relations(n))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_lap_counts(n):
    counts = lap_relation_counts(n)
    assert counts["total"] == comb(n + 2, 4)
    six = [p for a, p in lap_relations(n) if 1 in a]
    assert counts["six_term"] == len(six)
    assert all(len(p) == 6 for p in six)
    assert all(len(p) == 3 for a, p in lap_relations(n) if 1 not in a)


@pytest.mark.parametrize("n", [3, 4])
def test_lap_total_rank(n):
    registry = t_registry(n)
    for a, p in lap_relations(n, registry):
        assert constant_total_rank(p, registry) == expected_lap_rank(n, a)


def test_expansion_terms_agree_with_polynomial():
    registry = t_registry(3)
    expander = LaplaceExpander(build_L1(3), registry)
    assert terms_to_polynomial(expander.terms(), registry) == expander.polynomial()


def test_expansion_is_the_determinant():
    section = build_section(HankelSpec(3, 0))
    points = sample_points(section.registry.ngens, seed=3, count=2)
    assert expansion_agrees_at_points(build_L_a(3, (2,)), section, points)
    assert expansion_agrees_at_points(build_L1(3), section, points)


def test_f_lap_n2():
    registry = t_registry(2)
    assert f_lap(2) == registry.parse("T[2,3]*T[3,4] - T[2,4]^2 + T[1,4]*T[3,4]")


def test_f_lap_n3_golden():
    poly = f_lap(3)
    assert poly == t_registry(3).parse(F_LAP_3)
    assert len(poly) == 13


@pytest.mark.parametrize("n", [2, 3])
def test_f_lap_vanishes_on_first_section(n):
    assert not psi_substitute(f_lap(n), section_minors(n, 1))


@pytest.mark.slow
def test_f_lap_vanishes_n4():
    assert not psi_substitute(f_lap(4), section_minors(4, 1))


def test_f_lap_does_not_vanish_generically():
    assert psi_substitute(f_lap(3), section_minors(3, 0))


@pytest.mark.parametrize("n,mixed", [(2, "1"), (3, "-1"), (4, "1")])
def test_f_lap_structure(n, mixed):
    check = flap_structure(n)
    assert check.holds, check.to_dict()
    assert check.pure_power_coeff == "-1"
    assert check.mixed_coeff == mixed


@pytest.mark.slow
def test_f_lap_structure_n5():
    check = flap_structure(5)
    assert check.holds, check.to_dict()
    assert check.mixed_coeff == "-1"


def test_L1_expansion_is_the_determinant_n4():
    section = build_section(HankelSpec(4, 0))
    points = sample_points(section.registry.ngens, seed=11, count=5)
    assert expansion_agrees_at_points(build_L1(4), section, points)


@pytest.mark.parametrize(
    "n,r,matrix",
    [(4, 3, lambda: build_L_a(4, (5, 6))), (2, 1, lambda: build_L1(2)), (3, 1, lambda: build_L1(3))],
)
def test_realized_block_matrix_is_singular(n, r, matrix):
    section = build_section(HankelSpec(n, r))
    assert not determinant(realize(matrix(), section), strategy="bareiss")
    assert determinant(realize(matrix(), build_section(HankelSpec(n, 0))), strategy="bareiss")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_f_lap_total_rank(n):
    assert constant_total_rank(f_lap(n), t_registry(n)) == expected_flap_rank(n)


def test_f_lap_decomposes_into_laplace_quadrics():
    assert flap_decomposition_n3()


def test_f_lap_is_not_in_the_grassmannian_ideal():
    registry = t_registry(3)
    gb = buchberger(Ideal(registry, tuple(plucker_relations(3, registry))))
    assert normal_form(f_lap(3), gb)
