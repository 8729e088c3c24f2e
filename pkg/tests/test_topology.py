import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddks import catalog
from ddks.automorphisms import automorphism_group
from ddks.group import FiniteGroup
from ddks.presentation import Presentation, Word
from ddks.snf import AbelianInvariants, smith_normal_form
from ddks.structures import find_structures
from ddks.topology import (
    TopologyError,
    abelianized_relators,
    coset_system,
    compute_h1,
    orbifold_presentation,
    rewrite_consistent,
    schreier_rewrite,
    surface_invariants,
)


def test_orbifold_presentation_shape():
    P = orbifold_presentation(2, 2)
    assert P.ngens == 9 and len(P.relators) == 23
    assert smith_normal_form(abelianized_relators(P)) == AbelianInvariants(8)
    P3 = orbifold_presentation(3, 2)
    assert P3.ngens == 13 and len(P3.relators) == 45
    with pytest.raises(TopologyError):
        orbifold_presentation(2, 1)


def test_free_group_index_two():
    """Nielsen-Schreier: index-2 subgroup of F2 is free of rank 3."""
    C2 = FiniteGroup([[0, 1], [1, 0]])
    P = Presentation(["a", "b"], [])
    S = schreier_rewrite(P, [1, 0], C2)
    assert S.matrix.shape == (0, 3)
    assert smith_normal_form(S.matrix, 3) == AbelianInvariants(3)


def test_transversal_is_prefix_closed():
    G = catalog.load_group("S4")
    imgs = list(G.generators.values())
    cs = coset_system(G, imgs)
    from ddks.presentation import evaluate_word

    for g in range(G.order):
        assert evaluate_word(G, imgs, cs.word(g)) == g
        p = cs.parent[g]
        if p is not None:
            assert len(cs.word(p[0])) + 1 == len(cs.word(g))


def test_rejects_non_homomorphism():
    G = catalog.load_group("G(32,49)")
    with pytest.raises(TopologyError):
        schreier_rewrite(orbifold_presentation(2, 2), [1] * 9, G)


@pytest.fixture(scope="module")
def s199():
    G = catalog.load_group("G(64,199)")
    return G, tuple(int(x) for x in find_structures(G, first=1).structures[0])


def test_schreier_shape_and_consistency(s199):
    G, s = s199
    P = orbifold_presentation(2, 2)
    S = schreier_rewrite(P, s, G)
    assert S.matrix.shape == (64 * 23, 64 * 9 - 63)
    assert rewrite_consistent(S, P)
    # z^2 row block: entries only in z columns, summing to 2 per coset
    zrows = S.matrix[22 * 64 : 23 * 64]
    zcol = np.array([x == 8 for _, x in S.columns])
    assert not zrows[:, ~zcol].any()


def test_h1_shuffled_rows_and_aut_invariance(s199):
    G, s = s199
    S = schreier_rewrite(orbifold_presentation(2, 2), s, G)
    h = smith_normal_form(S.matrix, S.matrix.shape[1])
    perm = np.random.default_rng(0).permutation(S.matrix.shape[0])
    assert smith_normal_form(S.matrix[perm], S.matrix.shape[1]) == h
    A = automorphism_group(G)
    t2 = tuple(int(x) for x in A[7][list(s)])
    assert compute_h1(G, t2) == h == AbelianInvariants(8, (2, 2, 2, 2))


def test_invariant_examples():
    r = surface_invariants(64, 2, 2, 1, 1, q=4)
    assert (r.c1_sq, r.c2, r.sigma, r.b1_base, r.b2_base, r.g1, r.g2) == (736, 320, 32, 2, 2, 81, 81)
    r = surface_invariants(64, 2, 2, 2, 2, q=6)
    assert (r.b1_base, r.g1, r.p_g, r.betti) == (3, 41, 93, (1, 12, 342, 12, 1))
    r = surface_invariants(32, 2, 2, 1, 1)
    assert (r.c1_sq, r.c2, r.sigma, r.p_g) == (368, 160, 16, None)
    with pytest.raises(TopologyError):
        surface_invariants(64, 2, 2, 3, 1)
    with pytest.raises(TopologyError):
        surface_invariants(7, 2, 3)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 40), st.integers(2, 6), st.integers(2, 8))
def test_signature_identity(k, b, n):
    order = 12 * n * n * k  # keeps every division exact
    r = surface_invariants(order, b, n)
    assert 3 * r.sigma == r.c1_sq - 2 * r.c2
    assert 12 * r.chi == r.c1_sq + r.c2
