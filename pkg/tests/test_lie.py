from itertools import product

import pytest
from hypothesis import given, strategies as st

from andreadakis.lie import (Derivation, LieElement, NotLieError, basis_keys, bracket, bracketing,
                             derivation_bracket, derivation_dim, derivation_p_power, is_lyndon,
                             lie_decompose, lie_embed, lyndon_words, p_power, restricted_decompose,
                             restricted_dim, standard_factorization, witt_number)
from andreadakis.tensor import TensorPoly


def _brute_lyndon(n, k):
    out = []
    for w in product(range(1, n + 1), repeat=k):
        if all(w < w[i:] + w[:i] for i in range(1, k)):
            out.append(w)
    return out


@pytest.mark.parametrize("n,k", [(2, 1), (2, 4), (2, 6), (3, 3), (3, 4), (4, 3)])
def test_lyndon_words_against_brute_force(n, k):
    assert lyndon_words(n, k) == sorted(_brute_lyndon(n, k))
    assert witt_number(n, k) == len(_brute_lyndon(n, k))


def test_witt_numbers_frozen():
    assert [witt_number(2, k) for k in range(1, 8)] == [2, 1, 2, 3, 6, 9, 18]
    assert [witt_number(3, k) for k in range(1, 6)] == [3, 3, 8, 18, 48]


def test_restricted_dims():
    assert restricted_dim(2, 2, 2) == 3  # [X1,X2], X1^2, X2^2
    assert restricted_dim(3, 3, 3) == witt_number(3, 3) + 3
    assert derivation_dim(4, 2) == 80 and derivation_dim(5, 3) == 750


def test_standard_factorization():
    assert standard_factorization((1, 1, 2)) == ((1,), (1, 2))
    assert standard_factorization((1, 2, 2)) == ((1, 2), (2,))
    assert bracketing((1, 1, 2)) == "[X1,[X1,X2]]"
    assert is_lyndon((1, 2)) and not is_lyndon((2, 1))


def test_decompose_rejects_non_lie():
    with pytest.raises(NotLieError):
        lie_decompose(TensorPoly.monomial(2, (1, 2), 1))


def test_restricted_decompose_square():
    t = TensorPoly.monomial(2, (1, 2), 1, modulus=2) - TensorPoly.monomial(2, (2, 1), 1, modulus=2)
    t.degree = 4
    x = restricted_decompose(t * t)
    assert x.p_power_part()
    with pytest.raises(NotLieError):
        restricted_decompose(TensorPoly.monomial(2, (1, 2, 1, 2), 1, modulus=2))


def _lie_elements(n, k):
    keys = basis_keys(n, k)
    return st.lists(st.integers(-3, 3), min_size=len(keys), max_size=len(keys)).map(
        lambda cs: LieElement(n, k, {key: c for key, c in zip(keys, cs) if c}))


@given(_lie_elements(3, 1), _lie_elements(3, 2), _lie_elements(3, 1))
def test_jacobi_and_antisymmetry(x, y, z):
    assert bracket(x, y) == -bracket(y, x)
    s = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert not s.coeffs


@given(_lie_elements(3, 3))
def test_embed_decompose_roundtrip(x):
    assert lie_decompose(lie_embed(x)) == x


def _derivations(n, k):
    dim = derivation_dim(n, k)
    return st.lists(st.integers(-2, 2), min_size=dim, max_size=dim).map(
        lambda v: Derivation.from_vector(n, k, v))


@given(_derivations(2, 1), _derivations(2, 1), _lie_elements(2, 2))
def test_derivation_bracket_is_commutator(d1, d2, x):
    lhs = derivation_bracket(d1, d2).apply(x)
    rhs = d1.apply(d2.apply(x)) - d2.apply(d1.apply(x))
    assert lhs == rhs


@given(_derivations(2, 1), _lie_elements(2, 1), _lie_elements(2, 1))
def test_derivation_rule(d, x, y):
    assert d.apply(bracket(x, y)) == bracket(d.apply(x), y) + bracket(x, d.apply(y))


def test_vector_roundtrip():
    v = list(range(derivation_dim(3, 1)))
    assert Derivation.from_vector(3, 1, v).vector() == v


def test_p_power_of_generator():
    x = LieElement.gen(2, 1)
    assert p_power(x, 3).p_power_part()


@given(st.lists(st.integers(0, 2), min_size=derivation_dim(2, 1, 3), max_size=derivation_dim(2, 1, 3)))
def test_derivation_p_power_is_iterate(v):
    d = Derivation.from_vector(2, 1, v, 3, True)
    d3 = derivation_p_power(d, 3)
    for i in (1, 2):
        x = LieElement.gen(2, i, 3)
        assert d3.apply(x) == d.apply(d.apply(d.apply(x)))
