import numpy as np
import pytest

from ddks import catalog
from ddks.automorphisms import (
    MAX_AUT_ORDER,
    apply_to_tuple,
    automorphism_group,
    compose,
    inverse,
    is_automorphism,
    is_closed_under_composition,
    stabilizer_size,
)


@pytest.mark.parametrize("label,order", [("S3", 6), ("D8", 8), ("Q8", 24), ("A4", 24), ("S4", 24), ("G(32,49)", 1152)])
def test_aut_orders(label, order):
    A = automorphism_group(catalog.load_group(label))
    assert len(A) == order
    assert np.array_equal(A[0], np.arange(A.shape[1]))
    assert len({r.tobytes() for r in A}) == order


def test_rows_are_automorphisms_and_closed():
    G = catalog.load_group("Q8")
    A = automorphism_group(G)
    assert all(is_automorphism(G, r) for r in A)
    assert is_closed_under_composition(A)
    phi = A[5]
    assert np.array_equal(compose(phi, inverse(phi)), np.arange(8))
    assert not is_automorphism(G, [0] * 8)
    assert not is_automorphism(G, [1, 0, 2, 3, 4, 5, 6, 7])


def test_sampled_closure_for_large_lists():
    A = automorphism_group(catalog.load_group("G(32,50)"))
    assert is_closed_under_composition(A, max_pairs=20000)


def test_stabilizer_of_generating_tuple_is_trivial():
    G = catalog.load_group("S4")
    A = automorphism_group(G)
    gens = list(catalog.load_group("S4").generators.values())
    assert stabilizer_size(A, gens) == 1
    assert stabilizer_size(A, [0]) == len(A)
    assert apply_to_tuple(A[0], gens) == tuple(gens)


def test_order_limit():
    assert MAX_AUT_ORDER >= 64
