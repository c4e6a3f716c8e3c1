import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from andreadakis.congruence import (CongruenceMatrix, depth, diagonal_witness,
                                    elementary_witness, group_commutator, ident, int_inverse, mat,
                                    parse_expr, random_depth_one, shear, symbol,
                                    verify_bracket_compat, verify_det_tr_square, verify_lie_ring)
from andreadakis.lattice import determinant


def test_frozen_commutator_example():
    A, B = shear(2, 1, 2, 3), shear(2, 2, 1, 3)
    C = group_commutator(A, B)
    assert depth(C, 3) == 2
    s = symbol(C, 3)
    assert s.entries == ((1, 0), (0, 2))
    assert verify_bracket_compat(A, B, 3).passed


def test_depth_of_identity_and_non_congruent():
    assert depth(ident(3), 5) == math.inf
    assert symbol(ident(3), 5) is None
    with pytest.raises(ValueError):
        CongruenceMatrix.make([[2, 0], [0, 1]], 3)


def test_witness_expression_frozen():
    w = elementary_witness(5, 3, 3, 1, 2, 27)
    assert str(w.expr) == "(comm (comm E(1,2,3) E(2,3,3)) E(3,2,3))"
    assert w.verified
    assert parse_expr(str(w.expr)) == w.expr


@pytest.mark.parametrize("k", [1, 2, 3])
def test_all_elementary_witnesses(k):
    for a in range(1, 6):
        for b in range(1, 6):
            if a != b:
                w = elementary_witness(5, 3, k, a, b, 3 ** k)
                assert w.verified and w.commutator_depth == k


def test_witness_needs_room():
    with pytest.raises(ValueError):
        elementary_witness(4, 3, 2, 1, 2, 9)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_diagonal_witness(k):
    ex, target = diagonal_witness(5, 3, k, 2)
    if ex is None:  # degree one uses an explicit lift, not a commutator
        val = target
        assert symbol(val, 3).entries[0][:2] == (1, 1)
    else:
        val, inv = ex.evaluate(5)
        assert np.array_equal(val, target)
    assert depth(val, 3) == k
    assert determinant(val) == 1


def test_lie_ring_composite_q():
    assert verify_lie_ring(5, 4, 2, samples=5).passed


@given(st.integers(0, 10 ** 6), st.sampled_from((3, 4, 5)))
def test_det_tr_square(seed, q):
    rng = random.Random(seed)
    M = random_depth_one(5, q, rng)
    r = verify_det_tr_square(M, q)
    assert r.passed and r.sl_consistent is True


@given(st.integers(0, 10 ** 6), st.sampled_from((3, 4, 5)))
def test_strong_centrality(seed, q):
    rng = random.Random(seed)
    A, B = random_depth_one(5, q, rng, 2), random_depth_one(5, q, rng, 2)
    A = A.dot(A)  # raises the depth when q is prime
    assert verify_bracket_compat(A, B, q).passed


@given(st.lists(st.integers(-3, 3), min_size=9, max_size=9))
def test_int_inverse(v):
    M = ident(3) + 3 * mat([v[0:3], v[3:6], v[6:9]])
    if abs(determinant(M)) == 1:
        assert np.array_equal(M.dot(int_inverse(M)), ident(3))
