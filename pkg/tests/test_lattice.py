from functools import reduce
from math import gcd

import numpy as np
from hypothesis import given, strategies as st

from andreadakis.lattice import (determinant, hnf, hnf_rows, lattice_contains, lattice_equal,
                                 left_kernel, left_kernel_mod_p, quotient_structure, rank_mod_p,
                                 smith_divisors, snf, xgcd)


def matrices(rows=(1, 5), cols=(1, 5), lo=-9, hi=9):
    return st.tuples(st.integers(*rows), st.integers(*cols)).flatmap(
        lambda rc: st.lists(st.lists(st.integers(lo, hi), min_size=rc[1], max_size=rc[1]),
                            min_size=rc[0], max_size=rc[0])).map(lambda m: np.array(m, dtype=np.int64))


def test_frozen_examples():
    H, U = hnf([[2, 4], [6, 8]])
    assert H.tolist() == [[2, 0], [0, 4]]
    assert snf(np.diag([2, 3]))[1] == [1, 6]
    q = quotient_structure(2, [[2, 0], [0, 3]])
    assert q.free_rank == 0 and q.torsion == (6,)
    q = quotient_structure(3, [[1, 1, 0]])
    assert q.free_rank == 2 and q.is_free
    assert determinant([[2, 1], [7, 4]]) == 1
    assert xgcd(12, 18)[0] == 6


@given(matrices())
def test_hnf_transform(M):
    H, U = hnf(M)
    assert np.array_equal(U.astype(object) @ M.astype(object), H.astype(object))
    assert abs(determinant(U)) == 1


@given(matrices(rows=(2, 4), cols=(2, 4)), st.integers(0, 10 ** 6))
def test_hnf_is_canonical(M, seed):
    rng = np.random.default_rng(seed)
    n = M.shape[0]
    V = np.eye(n, dtype=np.int64)
    for _ in range(4):  # random unimodular row operations
        i, j = rng.choice(n, 2, replace=False)
        V[i] += int(rng.integers(-2, 3)) * V[j]
    assert np.array_equal(hnf_rows(V @ M), hnf_rows(M))
    assert lattice_equal(V @ M, M)


@given(matrices(rows=(1, 4), cols=(1, 4)))
def test_smith_divisors(M):
    d = smith_divisors(M)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert len(d) == np.linalg.matrix_rank(M.astype(float))
    if d:
        assert d[0] == reduce(gcd, (abs(int(x)) for x in M.ravel()))
    if M.shape[0] == M.shape[1]:
        prod = 1
        for x in d:
            prod *= x
        assert prod == abs(determinant(M)) or len(d) < M.shape[0]


@given(matrices(rows=(1, 6), cols=(1, 4)))
def test_left_kernel(M):
    K = left_kernel(M)
    if K.shape[0]:
        assert not np.any(K.astype(object) @ M.astype(object))
    assert K.shape[0] + len(smith_divisors(M)) == M.shape[0]


@given(matrices(rows=(1, 5), cols=(1, 5)))
def test_mod_p_kernel(M):
    K = left_kernel_mod_p(M, 5)
    assert K.shape[0] + rank_mod_p(M, 5) == M.shape[0]
    if K.shape[0]:
        assert not np.any((K @ M) % 5)


def test_containment():
    A = np.array([[1, 0], [0, 1]])
    B = np.array([[2, 0], [0, 3]])
    assert lattice_contains(A, B) and not lattice_contains(B, A)


def test_overflow_promotes_to_python_ints():
    big = 2 ** 40
    M = np.array([[big, 1], [1, big]], dtype=np.int64)
    assert determinant(M) == big * big - 1
    d = smith_divisors(M)
    assert d[0] * d[1] == big * big - 1
