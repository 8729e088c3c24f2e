import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddks.snf import AbelianInvariants, determinantal_invariants, invariant_factors, smith_normal_form


def test_trivial_cases():
    assert smith_normal_form([[0] * 5]) == AbelianInvariants(5)
    assert smith_normal_form([[2, 0, 0], [0, 6, 0]]) == AbelianInvariants(1, (2, 6))
    assert smith_normal_form(np.zeros((0, 3), dtype=np.int64), 3) == AbelianInvariants(3)
    assert smith_normal_form([[4, 0], [0, 6]]) == AbelianInvariants(0, (2, 12))


def test_invariants_validation_and_format():
    with pytest.raises(ValueError):
        AbelianInvariants(0, (2, 3))
    with pytest.raises(ValueError):
        AbelianInvariants(0, (1,))
    h = AbelianInvariants(12, (2, 2, 4))
    assert h.format() == "Z^12 + (Z2)^2 + Z4"
    assert AbelianInvariants.from_record(h.to_record()) == h
    assert AbelianInvariants(0).format() == "0"


def test_invariant_factors_chain():
    assert invariant_factors([6, 4, 1, 0]) == [1, 2, 12]


def test_overflow_promotes_to_big_integers():
    M = [[2**40, 3], [5, 2**45]]
    assert smith_normal_form(M) == determinantal_invariants(M)
    M = [[2**62, 2**61], [2**61, 2**62 - 1]]
    assert smith_normal_form(M) == determinantal_invariants(M)


def test_against_minor_oracle_random_500():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        r, c = (int(x) for x in rng.integers(1, 6, 2))
        M = rng.integers(-6, 7, (r, c))
        if rng.random() < 0.3:
            M = M * int(rng.integers(2, 5))
        assert smith_normal_form(M.tolist(), c) == determinantal_invariants(M.tolist(), c)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=1, max_size=4)))
def test_row_order_and_unimodular_invariance(M):
    a = smith_normal_form(M)
    assert smith_normal_form(M[::-1]) == a
    # add row 0 to the last row: same row space
    N = [row[:] for row in M]
    N[-1] = [x + y for x, y in zip(N[-1], M[0])] if len(M) > 1 else N[-1]
    assert smith_normal_form(N) == a
    assert a == determinantal_invariants(M)
