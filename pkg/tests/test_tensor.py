from hypothesis import given, strategies as st

from andreadakis.groupring import fox_derivative_word
from andreadakis.tensor import (TensorPoly, bryant_matrix_test, contract, cyclic_project, dense_magnus,
                                in_bracket_subspace, magnus, magnus_word, necklace, necklace_count,
                                necklaces, valuation)
from andreadakis.words import Word, commutator, parse_word
from strategies import words


def test_magnus_of_inverse():
    t = magnus_word(Word.gen(1, 1) ** -1, 4)
    assert t.terms == {(): 1, (1,): -1, (1, 1): 1, (1, 1, 1): -1, (1, 1, 1, 1): 1}


def test_magnus_of_commutator():
    t = magnus_word(parse_word("[x1,x2]", 2), 2)
    assert t.terms == {(): 1, (1, 2): 1, (2, 1): -1}


def test_valuation():
    assert valuation(parse_word("[[x1,x2],x1]", 2), 5) == 3
    assert valuation(Word.identity(2), 5) == "zero"
    assert valuation(parse_word("x1^3", 1), 4, modulus=3) == 3


def test_necklaces_oracle():
    # independent count by brute force on all words
    from itertools import product
    for n, k in ((2, 4), (3, 3), (4, 2), (5, 2), (5, 3)):
        brute = {min(w[i:] + w[:i] for i in range(k)) for w in product(range(1, n + 1), repeat=k)}
        assert len(brute) == necklace_count(n, k) == len(necklaces(n, k))
    assert necklace_count(4, 2) == 10 and necklace_count(5, 2) == 15 and necklace_count(5, 3) == 45


def test_necklace_is_min_rotation():
    assert necklace((2, 1, 1)) == (1, 1, 2)


def test_cyclic_projection_and_flag():
    t = TensorPoly.monomial(2, (1, 2), 1) - TensorPoly.monomial(2, (2, 1), 1)
    assert in_bracket_subspace(t)
    sq = TensorPoly.monomial(2, (1, 1, 1), 1, modulus=3, degree=3)
    assert not in_bracket_subspace(sq)
    assert in_bracket_subspace(sq, p_restricted=True)
    assert cyclic_project(TensorPoly(2, 3)).degree == 3


@given(words(2, 6), words(2, 6))
def test_magnus_is_multiplicative(u, v):
    assert magnus_word(u * v, 5) == magnus_word(u, 5) * magnus_word(v, 5)


@given(words(3, 7), st.integers(1, 3))
def test_contraction_matches_fox(w, i):
    # M(w) - 1 = sum_i M(d_i w) X_i, so contracting the last letter recovers M(d_i w)
    d = 5
    t = magnus_word(w, d)
    fox = magnus(fox_derivative_word(w, i), d - 1)
    for k in range(1, d + 1):
        assert contract(i, t.component(k)).terms == fox.component(k - 1).terms


@given(words(3, 10), st.sampled_from((2, 3)))
def test_dense_magnus_agrees(w, p):
    blocks = dense_magnus(w, 4, p)
    t = magnus_word(w, 4, p)
    n = 3
    for m, c in t.terms.items():
        idx = 0
        for a in m:
            idx = idx * n + a - 1
        assert blocks[len(m)][idx] == c % p


@given(words(2, 5), words(2, 5))
def test_commutator_leading_term_is_bracket(u, v):
    t = magnus_word(commutator(u, v), 4)
    low = [k for k in range(1, 5) if t.component(k).terms]
    if low:
        lead = t.component(low[0])
        assert low[0] >= 2
        assert in_bracket_subspace(lead)
        assert bryant_matrix_test(lead, samples=10)


def test_bryant_refutes_non_member():
    assert not bryant_matrix_test(TensorPoly.monomial(2, (1, 2), 1))
