import pytest
from hypothesis import given

from andreadakis.groupring import (GroupRingElement, fox_derivative, fox_derivative_word,
                                   fundamental_formula_holds, jacobian, parse_element,
                                   verify_chain_rule, word_element)
from andreadakis.words import Endomorphism, Word, parse_word
from strategies import endomorphisms, words


def test_fox_of_commutator():
    w = parse_word("[x1,x2]", 2)
    assert str(fox_derivative_word(w, 1)) == "1 - x1*x2*x1^-1"
    assert str(fox_derivative_word(w, 2)) == "x1 - x1*x2*x1^-1*x2^-1"


def test_fox_of_powers():
    x = Word.gen(1, 1)
    assert fox_derivative_word(x ** 3, 1) == parse_element("1 + x1 + x1^2", 1)
    assert fox_derivative_word(x ** -2, 1) == parse_element("-x1^-1 - x1^-2", 1)


def test_fox_index_checked():
    with pytest.raises(ValueError):
        fox_derivative(parse_element("x1", 2), 3)


def test_arithmetic_and_augmentation():
    u = parse_element("2*x1*x2^-1 - 1", 2)
    assert u.augment() == 1
    assert (u * u).augment() == 1
    assert (u - u) == GroupRingElement.zero(2)
    assert u.reduce_mod(2) == parse_element("-1", 2, modulus=2)


def test_jacobian_of_inner_automorphism():
    f = Endomorphism.from_images(2, {1: parse_word("x2 x1 x2^-1", 2)})
    J = jacobian(f)
    assert str(J[0, 0]) == "x2"
    assert J[0, 1] == parse_element("1 - x2*x1*x2^-1", 2)
    assert J[1, 1] == parse_element("1", 2)


@given(words(3), words(3))
def test_leibniz(u, v):
    for i in (1, 2, 3):
        lhs = fox_derivative_word(u * v, i)
        rhs = fox_derivative_word(u, i) + word_element(u) * fox_derivative_word(v, i)
        assert lhs == rhs


@given(words(3))
def test_fundamental_identity_for_words(w):
    total = sum((fox_derivative_word(w, i) * (word_element(Word.gen(3, i)) - 1) for i in (1, 2, 3)),
                GroupRingElement.zero(3))
    assert total == word_element(w) - 1


@given(endomorphisms(3), endomorphisms(3))
def test_chain_rule(f, g):
    assert verify_chain_rule(f, g).holds


@given(endomorphisms(3))
def test_fundamental_formula(f):
    assert fundamental_formula_holds(f)
