import pytest
from hypothesis import given

from andreadakis.words import (Endomorphism, Word, WordSyntaxError, commutator, compose, conjugate,
                               dark_identity_holds, dark_table, endo_power, parse_endomorphism,
                               parse_word, verify_dark)
from strategies import endomorphisms, words

x1, x2 = Word.gen(2, 1), Word.gen(2, 2)


def test_free_reduction():
    w = Word.from_letters(2, [1, 2, -2, -1, 1])
    assert w.letters == (1,)
    assert not Word.from_letters(3, [3, -3])


def test_commutator_and_conjugation_conventions():
    assert commutator(x1, x2).letters == (1, 2, -1, -2)
    assert conjugate(x1, x2).letters == (-2, 1, 2)


def test_parse():
    assert parse_word("[x1,x2]", 2) == commutator(x1, x2)
    assert parse_word("x1^2 x2^-1", 2).letters == (1, 1, -2)
    assert parse_word("(x1 x2)^-2", 2).letters == (-2, -1, -2, -1)
    assert parse_word("1", 2).letters == ()
    with pytest.raises(WordSyntaxError):
        parse_word("x1 ^", 2)
    with pytest.raises(ValueError):
        parse_word("x3", 2)


def test_parse_endomorphism_counts_images():
    f = parse_endomorphism("x2 x1 x2^-1; x2", 2)
    assert f(x1) == x2 * x1 * x2.inverse()
    with pytest.raises(ValueError):
        parse_endomorphism("x1", 2)


def test_endo_power():
    f = Endomorphism.from_images(2, {1: x1 * x2})
    assert endo_power(f, 3).images[0] == x1 * x2 ** 3


@given(words(3), words(3))
def test_inverse_and_product(u, v):
    assert not (u * u.inverse())
    assert (u * v).inverse() == v.inverse() * u.inverse()


@given(words(3, 5), words(3, 5), words(3, 5))
def test_hall_witt(x, y, z):
    # identity for the convention [a,b] = a b a^-1 b^-1, a^b = b^-1 a b
    def t(a, b, c):
        return conjugate(commutator(commutator(a.inverse(), b).inverse(), c.inverse()), b)
    assert not (t(x, y, z) * t(y, z, x) * t(z, x, y))


@given(endomorphisms(2), endomorphisms(2), words(2))
def test_composition_is_application(f, g, w):
    assert compose(f, g)(w) == f(g(w))


def test_dark_product_small_values():
    t = dark_table("product", 3)
    assert t.entries[0].letters == ()
    assert t.entries[1] == x1 * x2
    for a in range(4):
        assert dark_identity_holds(t, a)


def test_dark_reports():
    r = verify_dark(dark_table("product", 4), 4)
    assert r.holds and r.valuation_ok and r.checked == 5
    r = verify_dark(dark_table("commutator", 3, 3), 3, 3)
    assert r.holds and r.valuation_ok
