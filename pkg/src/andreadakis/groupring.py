"""Group rings ZF_n and F_pF_n, Fox derivatives, Jacobian matrices."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .words import Endomorphism, Word, apply, compose, parse_word


def _norm(c: int, modulus: int) -> int:
    return c % modulus if modulus else c


class GroupRingElement:
    """Finite linear combination of reduced words.

    ``modulus`` is 0 for integer coefficients, otherwise a prime p.
    """

    __slots__ = ("rank", "modulus", "terms")

    def __init__(self, rank: int, terms: Mapping[Word, int] | None = None, modulus: int = 0):
        self.rank = rank
        self.modulus = modulus
        clean: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            if w.rank != rank:
                raise ValueError("word rank mismatch")
            c = _norm(c, modulus)
            if c:
                clean[w] = c
        self.terms = clean

    @classmethod
    def from_word(cls, w: Word, coeff: int = 1, modulus: int = 0) -> "GroupRingElement":
        return cls(w.rank, {w: coeff}, modulus)

    @classmethod
    def scalar(cls, rank: int, c: int, modulus: int = 0) -> "GroupRingElement":
        return cls(rank, {Word.identity(rank): c}, modulus)

    @classmethod
    def zero(cls, rank: int, modulus: int = 0) -> "GroupRingElement":
        return cls(rank, {}, modulus)

    def _check(self, other: "GroupRingElement"):
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        if self.modulus != other.modulus:
            raise ValueError(f"coefficient ring mismatch: {self.modulus} vs {other.modulus}")

    def _coerce(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement.scalar(self.rank, other, self.modulus)
        if isinstance(other, Word):
            return GroupRingElement.from_word(other, 1, self.modulus)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElement(self.rank, out, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.rank, {w: -c for w, c in self.terms.items()}, self.modulus)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.rank, {w: c * other for w, c in self.terms.items()}, self.modulus)
        other = self._coerce(other)
        out: dict[Word, int] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u * v
                out[w] = out.get(w, 0) + a * b
        return GroupRingElement(self.rank, out, self.modulus)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return self._coerce(other) * self

    def __eq__(self, other):
        if isinstance(other, (int, Word)):
            other = self._coerce(other)
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return (self.rank, self.modulus, self.terms) == (other.rank, other.modulus, other.terms)

    def __hash__(self):
        return hash((self.rank, self.modulus, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def augment(self) -> int:
        return _norm(sum(self.terms.values()), self.modulus)

    def map_words(self, f: Endomorphism) -> "GroupRingElement":
        """Apply a group endomorphism to every word (ring morphism)."""
        out: dict[Word, int] = {}
        for w, c in self.terms.items():
            v = apply(f, w)
            out[v] = out.get(v, 0) + c
        return GroupRingElement(self.rank, out, self.modulus)

    def reduce_mod(self, p: int) -> "GroupRingElement":
        return GroupRingElement(self.rank, self.terms, p)

    def __repr__(self):
        return f"GroupRingElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda wc: (len(wc[0]), wc[0].letters))
        parts = []
        for w, c in items:
            mono = "*".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in w.letters)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def augment(u: GroupRingElement) -> int:
    return u.augment()


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*?)?\s*")


def parse_element(text: str, rank: int, modulus: int = 0) -> GroupRingElement:
    """Parse e.g. ``2*x1*x2^-1 - 1``.  Inside a term '*' joins word terms."""
    out = GroupRingElement.zero(rank, modulus)
    # split at top-level + / - (not inside brackets, not after '^')
    chunks: list[tuple[int, str]] = []
    depth = 0
    sign = 1
    buf = ""
    prev = ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch in "+-" and depth == 0 and prev.strip() not in ("^",) and not (ch == "-" and prev == "^"):
            if buf.strip():
                chunks.append((sign, buf))
            sign = 1 if ch == "+" else -1
            buf = ""
        else:
            buf += ch
        if not ch.isspace():
            prev = ch
    if buf.strip():
        chunks.append((sign, buf))
    for sign, chunk in chunks:
        chunk = chunk.strip()
        m = re.match(r"(\d+)\s*(\*\s*)?(.*)$", chunk, re.S)
        coeff = 1
        if m and (m.group(2) or not m.group(3).strip()):
            coeff = int(m.group(1))
            chunk = m.group(3)
        chunk = chunk.replace("*", " ").strip()
        w = parse_word(chunk, rank) if chunk else Word.identity(rank)
        out = out + GroupRingElement.from_word(w, sign * coeff, modulus)
    return out


# -- Fox calculus -------------------------------------------------------------

def fox_derivative_word(w: Word, i: int, modulus: int = 0) -> GroupRingElement:
    """d w / d x_i by one left-to-right pass.

    A letter x_i at position t contributes +prefix(t); x_i^-1 contributes
    -prefix(t+1) (the prefix including the inverse letter).
    """
    if not 1 <= i <= w.rank:
        raise ValueError(f"generator index {i} out of range 1..{w.rank}")
    out: dict[Word, int] = {}
    letters = w.letters
    for t, a in enumerate(letters):
        if a == i:
            pre = Word(w.rank, letters[:t])
            out[pre] = out.get(pre, 0) + 1
        elif a == -i:
            pre = Word(w.rank, letters[: t + 1])
            out[pre] = out.get(pre, 0) - 1
    return GroupRingElement(w.rank, out, modulus)


def fox_derivative(u: GroupRingElement | Word, i: int) -> GroupRingElement:
    if isinstance(u, Word):
        return fox_derivative_word(u, i)
    if not 1 <= i <= u.rank:
        raise ValueError(f"generator index {i} out of range 1..{u.rank}")
    out = GroupRingElement.zero(u.rank, u.modulus)
    acc: dict[Word, int] = {}
    for w, c in u.terms.items():
        for v, d in fox_derivative_word(w, i, u.modulus).terms.items():
            acc[v] = acc.get(v, 0) + c * d
    return GroupRingElement(u.rank, acc, u.modulus) if acc else out


@dataclass(frozen=True)
class JacobianMatrix:
    """entries[j][i] = d f(x_j) / d x_i."""

    entries: tuple[tuple[GroupRingElement, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ji):
        j, i = ji
        return self.entries[j][i]

    def __matmul__(self, other: "JacobianMatrix") -> "JacobianMatrix":
        m, k = self.shape
        k2, n = other.shape
        if k != k2:
            raise ValueError("shape mismatch")
        rows = []
        for a in range(m):
            row = []
            for b in range(n):
                acc = self.entries[a][0] * other.entries[0][b]
                for c in range(1, k):
                    acc = acc + self.entries[a][c] * other.entries[c][b]
                row.append(acc)
            rows.append(tuple(row))
        return JacobianMatrix(tuple(rows))

    def map_words(self, f: Endomorphism) -> "JacobianMatrix":
        return JacobianMatrix(tuple(tuple(e.map_words(f) for e in row) for row in self.entries))

    def trace(self) -> GroupRingElement:
        out = self.entries[0][0]
        for t in range(1, min(self.shape)):
            out = out + self.entries[t][t]
        return out


def jacobian(f: Endomorphism, modulus: int = 0) -> JacobianMatrix:
    n = f.rank
    return JacobianMatrix(tuple(
        tuple(fox_derivative_word(f.images[j], i + 1, modulus) for i in range(n))
        for j in range(n)
    ))


def fundamental_formula_holds(f: Endomorphism) -> bool:
    """f(x_i) - 1 == sum_j d f(x_i)/d x_j (x_j - 1) for every i."""
    n = f.rank
    D = jacobian(f)
    for i in range(n):
        rhs = GroupRingElement.zero(n)
        for j in range(n):
            rhs = rhs + D[i, j] * (GroupRingElement.from_word(Word.gen(n, j + 1)) - 1)
        if GroupRingElement.from_word(f.images[i]) - 1 != rhs:
            return False
    return True


@dataclass
class ChainRuleReport:
    holds: bool
    failing_entry: tuple[int, int] | None = None
    lhs: GroupRingElement | None = None
    rhs: GroupRingElement | None = None


def verify_chain_rule(f: Endomorphism, g: Endomorphism) -> ChainRuleReport:
    """Check D(f o g) == f(Dg) . D(f) entrywise."""
    if f.rank != g.rank:
        raise ValueError("rank mismatch")
    lhs = jacobian(compose(f, g))
    rhs = jacobian(g).map_words(f) @ jacobian(f)
    n = f.rank
    for a in range(n):
        for b in range(n):
            if lhs[a, b] != rhs[a, b]:
                return ChainRuleReport(False, (a + 1, b + 1), lhs[a, b], rhs[a, b])
    return ChainRuleReport(True)


def word_element(w: Word, modulus: int = 0) -> GroupRingElement:
    return GroupRingElement.from_word(w, 1, modulus)


def sum_elements(items: Iterable[GroupRingElement], rank: int, modulus: int = 0) -> GroupRingElement:
    out = GroupRingElement.zero(rank, modulus)
    for u in items:
        out = out + u
    return out
