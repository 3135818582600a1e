import json
from math import comb

import pytest

from algebra.polynomial import format_polynomial
from grassmann.index_set import IndexSet, PosetRelation, poset_compare, sort_sign, subsets
from grassmann.plucker import (
    PosetIso,
    hasse_document,
    hasse_edges,
    order_preserved,
    phi_inverse,
    phi_map,
    plucker_relations,
    t_registry,
    term_ranks,
)
from groebner.fiber import psi_substitute
from hankel.sections import section_minors
from laplace.relations import lap_polynomial
from utilities.errors import ShapeError, UnassignedVariableError


def test_index_set_operations():
    a = IndexSet(6, (1, 3, 4, 6))
    assert str(a) == "[1,3,4,6]"
    assert a.complement() == IndexSet(6, (2, 5))
    assert a.dual() == IndexSet(6, (2, 5))
    assert IndexSet(6, (1, 2, 4, 5)).dual() == IndexSet(6, (1, 4))
    assert a.eta(4) == 2
    assert a.total() == 14
    with pytest.raises(ShapeError):
        IndexSet(4, (1, 5))
    with pytest.raises(ShapeError):
        IndexSet(4, (2, 2))


def test_sort_sign():
    assert sort_sign((1, 2, 3)) == 1
    assert sort_sign((2, 1, 3)) == -1
    assert sort_sign((3, 1, 2)) == 1
    assert sort_sign((1, 1)) == 0


def test_poset_compare():
    assert poset_compare(IndexSet(5, (1, 2)), IndexSet(5, (2, 4))) is PosetRelation.LESS_EQUAL
    assert poset_compare(IndexSet(5, (1, 5)), IndexSet(5, (2, 4))) is PosetRelation.INCOMPARABLE
    with pytest.raises(ShapeError):
        poset_compare(IndexSet(5, (1,)), IndexSet(5, (1, 2)))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_plucker_count_and_rank(n):
    registry = t_registry(n)
    relations = plucker_relations(n, registry)
    assert len(relations) == comb(n + 2, 4)
    for p in relations:
        assert len(p) == 3
        assert len(term_ranks(p, registry)) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_plucker_vanishes_on_every_section(n):
    relations = plucker_relations(n)
    for r in range(n):
        table = section_minors(n, r)
        assert all(not psi_substitute(p, table) for p in relations)


def test_phi_on_variables():
    iso = PosetIso(4)
    source = iso.source
    target = iso.target
    assert phi_map(iso, source.T((1, 3, 4, 6))) == target.T((2, 5))
    assert phi_map(iso, source.T((1, 2, 4, 5))) == target.T((1, 4))
    assert iso.is_involutive()


def test_phi_of_laplace_quadric():
    iso = PosetIso(4)
    lap = lap_polynomial(4, (5, 6), iso.source)
    image = phi_map(iso, lap)
    assert image == iso.target.parse("-T[4,6]^2 + T[3,6]*T[5,6] + T[4,5]*T[5,6]")
    assert phi_inverse(iso, image) == lap


def test_phi_rejects_foreign_variables():
    iso = PosetIso(3)
    other = t_registry(4)
    with pytest.raises(UnassignedVariableError):
        phi_map(iso, other.T((1, 2, 3, 4)))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_duality_preserves_order(n):
    assert order_preserved(PosetIso(n))


def test_hasse_diagram():
    edges = hasse_edges(4, 2)
    assert (IndexSet(4, (1, 2)), IndexSet(4, (1, 3))) in edges
    assert (IndexSet(4, (1, 2)), IndexSet(4, (2, 3))) not in edges
    assert len(edges) == 6
    doc = json.loads(hasse_document(2, "json"))
    assert len(doc["nodes"]) == len(subsets(4, 2))
    assert '"12" -> "13";' in hasse_document(2, "dot")


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_complement_and_reversal_commute(n):
    for size in range(n + 3):
        for a in subsets(n + 2, size):
            assert a.complement().reversal() == a.reversal().complement()
            assert a.complement().complement() == a
            assert a.reversal().reversal() == a
            assert a.dual().dual() == a


def grassmann_2_quadrics(n: int, registry) -> list:
    quadrics = []
    for p, q, r, s in subsets(n + 2, 4):
        T = lambda i, j: registry.T((i, j))
        quadrics.append(T(p, q) * T(r, s) - T(p, r) * T(q, s) + T(q, r) * T(p, s))
    return quadrics


@pytest.mark.parametrize("n", [3, 4, 5])
def test_phi_matches_plucker_quadrics(n):
    iso = PosetIso(n)
    images = sorted(format_polynomial(phi_map(iso, p)) for p in plucker_relations(n, iso.source))
    expected = sorted(format_polynomial(q) for q in grassmann_2_quadrics(n, iso.target))
    assert len(set(images)) == comb(n + 2, 4)
    assert images == expected


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_plucker_terms_pair_sets_sharing_n_minus_2(n):
    registry = t_registry(n)
    for p in plucker_relations(n, registry):
        for monom in p.keys():
            keys = [set(registry.t_index_sets[pos]) for pos, e in enumerate(monom) if e]
            assert len(keys) == 2
            assert len(keys[0] & keys[1]) == n - 2
