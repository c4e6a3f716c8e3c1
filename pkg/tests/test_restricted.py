import pytest
from hypothesis import given, strategies as st

from andreadakis.lie import restricted_dim, witt_number
from andreadakis.restricted import (bracket_word, concentration_kind, gamma_p_degree, gap_bound,
                                    is_prime, johnson_p, nontame_witness, p_graded_class, power_aut,
                                    sample_p_restriction, trace_p, trace_p_algebraic,
                                    verify_gamma_p_product_formula, verify_p_concentration)
from andreadakis.words import Word, parse_word
from strategies import words


def test_gamma_p_examples():
    assert gamma_p_degree(parse_word("x1^3", 2), 3, 6) == 3
    assert gamma_p_degree(parse_word("[x1,x2]", 2), 3, 6) == 2
    assert gamma_p_degree(parse_word("[x1,x2]^3", 2), 3, 8) == 6
    assert gamma_p_degree(parse_word("x1^2", 2), 2, 6) == 2
    with pytest.raises(ValueError):
        gamma_p_degree(parse_word("x1", 2), 4, 3)


def test_bracket_word_follows_lyndon_bracketing():
    assert bracket_word(2, (1, 1, 2)) == parse_word("[x1,[x1,x2]]", 2)


@given(words(2, 6), st.sampled_from((2, 3)))
def test_p_th_power_raises_degree(w, p):
    d = gamma_p_degree(w, p, 3)
    if d <= 3:
        assert gamma_p_degree(w ** p, p, p * d) >= p * d


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 3)])
def test_product_formula(n, p):
    r = verify_gamma_p_product_formula(n, p, 3, samples=5, seed=1)
    assert r.passed
    assert r.leading_ranks == {k: restricted_dim(n, k, p) for k in (1, 2, 3)}


def test_nontame_witnesses():
    r = nontame_witness(parse_word("[x2,x3]", 3), 3)
    assert r.certified and r.cls.depth == 5
    assert str(r.value) == "X1* (x) (([X2,X3])^3)"
    r = nontame_witness(Word.gen(2, 2), 2)
    assert r.certified and r.cls.depth == 1
    with pytest.raises(ValueError):
        nontame_witness(parse_word("x1 x2", 2), 3)


def test_restricted_traces_agree_on_power_aut():
    g = p_graded_class(power_aut(3, 1, 2, 3), 2, 3)
    assert trace_p(g) == trace_p_algebraic(g)
    assert johnson_p(g).values[0].p_power_part()


def test_sampled_p_restriction():
    s = sample_p_restriction(3, 3, 30, seed=5)
    assert all(x.ok for x in s)


def test_concentration_kinds_and_bounds():
    assert concentration_kind(2, 3) == "pl-1" and concentration_kind(3, 3) == "pl"
    assert concentration_kind(4, 3) is None
    assert gap_bound(4, 2, 3) == 4 * (restricted_dim(4, 3, 3) - witt_number(4, 3)) == 16
    assert gap_bound(5, 3, 3) == 5


def test_concentration_small():
    r = verify_p_concentration(4, 3, 2)
    d = r.degrees[0]
    assert r.passed and d.gap == 16 and d.kind == "pl-1"
    r = verify_p_concentration(4, 5, 2)
    assert r.passed and r.degrees[0].gap == 0
    with pytest.raises(ValueError):
        verify_p_concentration(4, 2, 2)
    with pytest.raises(ValueError):
        verify_p_concentration(4, 3, 3)
    assert not is_prime(9)
