import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddks.catalog import load_group
from ddks.group import (
    FiniteGroup,
    GroupError,
    SubgroupSet,
    _maximal_via_frattini,
    _maximal_via_lattice,
    bits,
    center,
    centralizer,
    closure_mask,
    derived_subgroup,
    direct_product,
    frattini_subgroup,
    generates,
    is_isomorphic,
    iter_isomorphisms,
    mask_of,
    maximal_subgroups,
    normal_closure,
    quotient,
    subgroup_generated,
)


def cyclic(n):
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], label=f"C{n}")


def test_table_validation_rejects_non_groups():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1, 2], [1, 2, 0]])


def test_basic_arithmetic_s3():
    G = load_group("S3")
    assert G.order == 6 and not G.is_abelian
    for g in range(6):
        assert G.mul(g, G.inv[g]) == 0
        assert G.power(g, int(G.element_orders[g])) == 0
    assert sorted(G.element_orders.tolist()) == [1, 2, 2, 2, 3, 3]
    assert len(G.conjugacy_classes) == 3


def test_commutator_convention():
    G = load_group("D8")
    for g in range(8):
        for h in range(8):
            want = G.mul(G.mul(G.mul(g, h), G.inv[g]), G.inv[h])
            assert G.comm(g, h) == want == G.commutator_table[g, h]


@pytest.mark.parametrize("label,z,d", [("Q8", 2, 2), ("D8", 2, 2), ("S3", 1, 3), ("A4", 1, 4), ("G(32,49)", 2, 2)])
def test_center_and_derived(label, z, d):
    G = load_group(label)
    assert center(G).order == z
    assert derived_subgroup(G).order == d


def test_subgroup_ops():
    G = load_group("S4")
    H = subgroup_generated(G, [1])
    assert H.is_closed() and H.order == int(G.element_orders[1])
    assert normal_closure(G, [1]).is_normal()
    K = derived_subgroup(G)
    assert K.order == 12 and K.is_normal()
    assert (K & H) <= H
    assert SubgroupSet(G.full_mask, G).order == 24


def test_quotient_and_products():
    G = load_group("G(32,49)")
    Q, proj = quotient(G, center(G))
    assert Q.order == 16 and Q.is_abelian
    for g in range(G.order):
        for h in range(G.order):
            assert proj[G.mul(g, h)] == Q.mul(proj[g], proj[h])
    P = direct_product(cyclic(2), cyclic(3))
    assert is_isomorphic(P, cyclic(6)) is not None
    assert is_isomorphic(cyclic(4), load_group("V4")) is None


def test_isomorphisms_are_homomorphisms():
    G, H = load_group("D8"), load_group("D8")
    maps = list(iter_isomorphisms(G, H))
    assert len(maps) == 8  # |Aut(D8)|
    for phi in maps:
        for g in range(8):
            for h in range(8):
                assert phi[G.mul(g, h)] == H.mul(phi[g], phi[h])


@pytest.mark.parametrize("label,count", [("S4", 8), ("G(60,5)", 21), ("G(32,49)", 15), ("G(64,266)", 31)])
def test_maximal_subgroup_counts(label, count):
    G = load_group(label)
    Ms = maximal_subgroups(G)
    assert len(Ms) == count
    assert all(M.is_closed() and M.order < G.order for M in Ms)


@pytest.mark.parametrize("label", ["D8", "Q8", "D16", "QD16", "Pauli16", "G(32,49)", "G(32,50)"])
def test_maximal_two_routes_agree(label):
    G = load_group(label)
    assert sorted(_maximal_via_frattini(G, 2)) == sorted(_maximal_via_lattice(G))


def test_frattini_of_extraspecial():
    G = load_group("G(32,50)")
    assert frattini_subgroup(G) == center(G) == derived_subgroup(G)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 31), min_size=1, max_size=4))
def test_generates_matches_closure(xs):
    G = load_group("G(32,49)")
    assert generates(G, xs) == (closure_mask(G, xs) == G.full_mask)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(0, 63), max_size=10))
def test_mask_roundtrip(s):
    assert set(bits(mask_of(s))) == s


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 23))
def test_centralizer_is_subgroup(g):
    G = load_group("S4")
    C = centralizer(G, g)
    assert C.is_closed() and g in C
    assert all(G.comm(g, h) == 0 for h in C)
