"""Reduced words in free groups, generator-image endomorphisms, Dark tables.

A letter is a nonzero integer: ``i`` stands for ``x_i`` and ``-i`` for its
inverse.  Words are stored fully reduced, so equality of words is equality of
the underlying tuples.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence


class WordSyntaxError(ValueError):
    """Raised on malformed word text; ``pos`` is the offending column."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        for a in self.letters:
            if a == 0 or abs(a) > self.rank:
                raise ValueError(f"letter {a} out of range for rank {self.rank}")
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise ValueError("word is not reduced")

    @classmethod
    def from_letters(cls, rank: int, letters: Iterable[int]) -> "Word":
        return cls(rank, _reduce(letters))

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls(rank, ())

    @classmethod
    def gen(cls, rank: int, i: int) -> "Word":
        return cls(rank, (i,))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def _check(self, other: "Word"):
        if not isinstance(other, Word):
            return NotImplemented
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __mul__(self, other: "Word") -> "Word":
        if self._check(other) is NotImplemented:
            return NotImplemented
        a, b = self.letters, other.letters
        i = 0
        m = min(len(a), len(b))
        while i < m and a[-1 - i] == -b[i]:
            i += 1
        return Word(self.rank, a[: len(a) - i] + b[i:])

    def inverse(self) -> "Word":
        return Word(self.rank, tuple(-a for a in reversed(self.letters)))

    def __invert__(self) -> "Word":
        return self.inverse()

    def __pow__(self, e: int) -> "Word":
        if e < 0:
            return self.inverse() ** (-e)
        out = Word.identity(self.rank)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def exponent_sums(self) -> list[int]:
        sums = [0] * self.rank
        for a in self.letters:
            sums[abs(a) - 1] += 1 if a > 0 else -1
        return sums

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in self.letters)


def multiply(a: Word, b: Word) -> Word:
    return a * b


def inverse(a: Word) -> Word:
    return a.inverse()


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a b a^-1 b^-1."""
    return a * b * a.inverse() * b.inverse()


def conjugate(a: Word, b: Word) -> Word:
    """Right conjugation a^b = b^-1 a b."""
    return b.inverse() * a * b


def left_normed(words: Sequence[Word]) -> Word:
    """[[...[w1, w2], ...], wk]."""
    out = words[0]
    for w in words[1:]:
        out = commutator(out, w)
    return out


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\^)\s*(-?\d+)|([()\[\],]))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(1):
            toks.append(("gen", int(m.group(2)), start))
        elif m.group(3):
            toks.append(("pow", int(m.group(4)), start))
        else:
            toks.append((m.group(5), None, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, rank: int):
        self.toks = _tokenize(text)
        self.i = 0
        self.rank = rank

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str):
        tok = self.toks[self.i]
        if tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            raise WordSyntaxError(f"expected {want}, got {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def word(self) -> Word:
        out = self.term()
        while self.peek()[0] in ("gen", "(", "["):
            out = out * self.term()
        return out

    def term(self) -> Word:
        w = self.atom()
        if self.peek()[0] == "pow":
            w = w ** self.take("pow")[1]
        return w

    def atom(self) -> Word:
        kind, val, pos = self.peek()
        if kind == "gen":
            self.i += 1
            if not 1 <= val <= self.rank:
                raise WordSyntaxError(f"generator index {val} out of range 1..{self.rank}", pos)
            return Word.gen(self.rank, val)
        if kind == "(":
            self.i += 1
            w = self.word()
            self.take(")")
            return w
        if kind == "[":
            self.i += 1
            a = self.word()
            self.take(",")
            b = self.word()
            self.take("]")
            return commutator(a, b)
        raise WordSyntaxError(f"unexpected token {kind!r}", pos)


def parse_word(text: str, rank: int) -> Word:
    """Parse ``word := term+; term := atom ('^' int)?;
    atom := 'x' int | '(' word ')' | '[' word ',' word ']'``.

    The literal ``1`` is accepted for the empty word.
    """
    if text.strip() == "1":
        return Word.identity(rank)
    p = _Parser(text, rank)
    w = p.word()
    p.take("end")
    return w


# -- endomorphisms ----------------------------------------------------------

@dataclass(frozen=True)
class Endomorphism:
    """Endomorphism of F_n given by the images of x_1..x_n."""

    rank: int
    images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise ValueError(f"need {self.rank} images, got {len(self.images)}")
        for w in self.images:
            if w.rank != self.rank:
                raise ValueError("image rank mismatch")

    @classmethod
    def identity(cls, rank: int) -> "Endomorphism":
        return cls(rank, tuple(Word.gen(rank, i) for i in range(1, rank + 1)))

    @classmethod
    def from_images(cls, rank: int, images: dict[int, Word]) -> "Endomorphism":
        """Endomorphism moving only the listed generators."""
        imgs = [images.get(i, Word.gen(rank, i)) for i in range(1, rank + 1)]
        return cls(rank, tuple(imgs))

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def __matmul__(self, other: "Endomorphism") -> "Endomorphism":
        return compose(self, other)

    def phi(self, i: int) -> Word:
        """x_i^-1 f(x_i)."""
        return Word.gen(self.rank, -i) * self.images[i - 1]

    def abelianization(self) -> list[list[int]]:
        """Row i holds the exponent sums of f(x_i)."""
        return [w.exponent_sums() for w in self.images]

    def __str__(self) -> str:
        return "; ".join(str(w) for w in self.images)


def apply(f: Endomorphism, w: Word) -> Word:
    if f.rank != w.rank:
        raise ValueError(f"rank mismatch: {f.rank} vs {w.rank}")
    inv = {}
    out: list[int] = []
    for a in w.letters:
        if a > 0:
            img = f.images[a - 1].letters
        else:
            img = inv.get(a)
            if img is None:
                img = inv[a] = f.images[-a - 1].inverse().letters
        for b in img:
            if out and out[-1] == -b:
                out.pop()
            else:
                out.append(b)
    return Word(f.rank, tuple(out))


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """f o g: apply g first, then f."""
    if f.rank != g.rank:
        raise ValueError(f"rank mismatch: {f.rank} vs {g.rank}")
    return Endomorphism(f.rank, tuple(apply(f, w) for w in g.images))


def endo_power(f: Endomorphism, e: int) -> Endomorphism:
    if e < 0:
        raise ValueError("only non-negative powers of an endomorphism")
    out = Endomorphism.identity(f.rank)
    for _ in range(e):
        out = compose(f, out)
    return out


def parse_endomorphism(text: str, rank: int) -> Endomorphism:
    """Images separated by ';', e.g. ``"x2 x1 x2^-1; x2"``."""
    parts = [s for s in text.split(";")]
    if len(parts) != rank:
        raise ValueError(f"expected {rank} images separated by ';', got {len(parts)}")
    return Endomorphism(rank, tuple(parse_word(s, rank) for s in parts))


# -- Dark tables ------------------------------------------------------------

X = Word.gen(2, 1)
Y = Word.gen(2, 2)


@dataclass(frozen=True)
class DarkTable:
    """theta values in F_2 = <x, y> (x = x1, y = x2).

    ``product``: x^a y^a = prod_{r>=0} theta(r)^C(a, r), r increasing.
    ``commutator``: [x^a, y^b] = prod_{r,s>=1} theta(r,s)^(C(a,r) C(b,s)),
    pairs (r, s) in lexicographic order.
    """

    variant: str
    entries: dict = field(default_factory=dict)
    max_index: int | tuple[int, int] = 0


def _product_side(entries, order, weight) -> Word:
    out = Word.identity(2)
    for key in order:
        e = weight(key)
        if e:
            out = out * entries[key] ** e
    return out


def _box(a: int, b: int):
    return [(r, s) for r in range(1, a + 1) for s in range(1, b + 1)]


@functools.lru_cache(maxsize=None)
def _dark_product(r_max: int) -> dict:
    th = {0: Word.identity(2)}
    for a in range(1, r_max + 1):
        lower = _product_side(th, range(a), lambda r: comb(a, r))
        th[a] = lower.inverse() * (X ** a) * (Y ** a)
    return th


@functools.lru_cache(maxsize=None)
def _dark_commutator(r_max: int, s_max: int) -> dict:
    th: dict = {}
    for a in range(1, r_max + 1):
        for b in range(1, s_max + 1):
            below = [k for k in _box(a, b) if k != (a, b)]
            lower = _product_side(th, below, lambda k: comb(a, k[0]) * comb(b, k[1]))
            th[(a, b)] = lower.inverse() * commutator(X ** a, Y ** b)
    return th


def dark_table(variant: str, r_max: int, s_max: int | None = None) -> DarkTable:
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    if variant == "product":
        return DarkTable("product", dict(_dark_product(r_max)), r_max)
    if variant == "commutator":
        s_max = r_max if s_max is None else s_max
        return DarkTable("commutator", dict(_dark_commutator(r_max, s_max)), (r_max, s_max))
    raise ValueError(f"unknown Dark variant {variant!r}")


def dark_identity_holds(table: DarkTable, a: int, b: int | None = None) -> bool:
    th = table.entries
    if table.variant == "product":
        lhs = (X ** a) * (Y ** a)
        rhs = _product_side(th, range(a + 1), lambda r: comb(a, r))
    else:
        lhs = commutator(X ** a, Y ** b)
        rhs = _product_side(th, _box(a, b), lambda k: comb(a, k[0]) * comb(b, k[1]))
    return lhs == rhs


@dataclass
class DarkReport:
    variant: str
    holds: bool
    checked: int
    failing: tuple | None = None
    valuation_ok: bool = True
    valuation_failing: tuple | None = None
    lengths: dict = field(default_factory=dict)


def _dark_magnus(table: DarkTable, d: int) -> dict:
    """Magnus images of every theta truncated above degree d.

    Computed through the defining recursion (Magnus is a ring morphism), which
    avoids expanding letter by letter the very long high-index words.
    """
    from .tensor import TensorPoly, magnus_word

    one = TensorPoly.one(2, d)

    def power(t, e):
        # (1+u)^e = sum_j C(e,j) u^j, u of positive valuation
        u = t - one
        out, up = one, one
        for j in range(1, d + 1):
            up = up * u
            if not up.terms:
                break
            out = out + up * comb(e, j)
        return out

    def inv(t):
        u = t - one
        out, up = one, one
        for _ in range(d):
            up = up * (-u)
            if not up.terms:
                break
            out = out + up
        return out

    mg: dict = {}
    if table.variant == "product":
        mg[0] = one
        for a in range(1, table.max_index + 1):
            lower = one
            for r in range(a):
                lower = lower * power(mg[r], comb(a, r))
            mg[a] = inv(lower) * magnus_word((X ** a) * (Y ** a), d)
    else:
        r_max, s_max = table.max_index
        for a in range(1, r_max + 1):
            for b in range(1, s_max + 1):
                lower = one
                for k in _box(a, b):
                    if k != (a, b):
                        lower = lower * power(mg[k], comb(a, k[0]) * comb(b, k[1]))
                mg[(a, b)] = inv(lower) * magnus_word(commutator(X ** a, Y ** b), d)
    return mg


def verify_dark(table: DarkTable, alpha_max: int, beta_max: int | None = None) -> DarkReport:
    """Check the defining identities by word reduction, then the depth bounds.

    Product variant: theta(r) - 1 has Magnus valuation >= r.  Commutator
    variant: every monomial of theta(r,s) - 1 has at least r letters X1 and s
    letters X2 (checked up to total degree r+s+1).
    """
    checked = 0
    if table.variant == "product":
        if alpha_max > table.max_index:
            raise ValueError("table too small")
        for a in range(alpha_max + 1):
            checked += 1
            if not dark_identity_holds(table, a):
                return DarkReport("product", False, checked, (a,))
        mg = _dark_magnus(table, alpha_max + 1)
        rep = DarkReport("product", True, checked,
                         lengths={str(r): len(w) for r, w in table.entries.items()})
        for r in range(1, alpha_max + 1):
            low = [len(m) for m in mg[r].terms if m]
            if low and min(low) < r:
                rep.valuation_ok = False
                rep.valuation_failing = (r,)
                break
        return rep
    beta_max = alpha_max if beta_max is None else beta_max
    r_max, s_max = table.max_index
    if alpha_max > r_max or beta_max > s_max:
        raise ValueError("table too small")
    for a in range(1, alpha_max + 1):
        for b in range(1, beta_max + 1):
            checked += 1
            if not dark_identity_holds(table, a, b):
                return DarkReport("commutator", False, checked, (a, b))
    mg = _dark_magnus(table, alpha_max + beta_max + 1)
    rep = DarkReport("commutator", True, checked,
                     lengths={f"{r},{s}": len(w) for (r, s), w in table.entries.items()})
    for a in range(1, alpha_max + 1):
        for b in range(1, beta_max + 1):
            for m in mg[(a, b)].terms:
                if m and len(m) <= a + b + 1 and (m.count(1) < a or m.count(2) < b):
                    rep.valuation_ok = False
                    rep.valuation_failing = (a, b)
                    return rep
    return rep
