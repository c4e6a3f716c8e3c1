"""Truncated tensor algebra TV, Magnus expansion, contraction and cyclic quotients."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .groupring import GroupRingElement
from .words import Word

Mono = tuple[int, ...]


def _norm(c: int, modulus: int) -> int:
    return c % modulus if modulus else c


class TensorPoly:
    """Element of TV truncated above degree ``degree``.

    Monomials are tuples of generator indices (1-based); () is the unit.
    """

    __slots__ = ("rank", "degree", "modulus", "terms")

    def __init__(self, rank: int, degree: int, terms: Mapping[Mono, int] | None = None, modulus: int = 0):
        self.rank = rank
        self.degree = degree
        self.modulus = modulus
        clean: dict[Mono, int] = {}
        for m, c in (terms or {}).items():
            if len(m) > degree:
                continue
            c = _norm(c, modulus)
            if c:
                clean[m] = c
        self.terms = clean

    @classmethod
    def one(cls, rank: int, degree: int, modulus: int = 0) -> "TensorPoly":
        return cls(rank, degree, {(): 1}, modulus)

    @classmethod
    def gen(cls, rank: int, i: int, degree: int, modulus: int = 0) -> "TensorPoly":
        return cls(rank, degree, {(i,): 1}, modulus)

    @classmethod
    def monomial(cls, rank: int, mono: Iterable[int], coeff: int = 1, modulus: int = 0,
                 degree: int | None = None) -> "TensorPoly":
        mono = tuple(mono)
        return cls(rank, len(mono) if degree is None else degree, {mono: coeff}, modulus)

    def _like(self, terms) -> "TensorPoly":
        return TensorPoly(self.rank, self.degree, terms, self.modulus)

    def _check(self, other: "TensorPoly"):
        if self.rank != other.rank or self.modulus != other.modulus:
            raise ValueError("rank or coefficient ring mismatch")

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return TensorPoly(self.rank, min(self.degree, other.degree), out, self.modulus)

    def __neg__(self) -> "TensorPoly":
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        return self + (-other)

    def __mul__(self, other) -> "TensorPoly":
        if isinstance(other, int):
            return self._like({m: c * other for m, c in self.terms.items()})
        self._check(other)
        d = min(self.degree, other.degree)
        buckets: list[list[tuple[Mono, int]]] = [[] for _ in range(d + 1)]
        for b, y in other.terms.items():
            if len(b) <= d:
                buckets[len(b)].append((b, y))
        out: dict[Mono, int] = {}
        for a, x in self.terms.items():
            room = d - len(a)
            for j in range(room + 1):
                for b, y in buckets[j]:
                    m = a + b
                    out[m] = out.get(m, 0) + x * y
        return TensorPoly(self.rank, d, out, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TensorPoly":
        out = TensorPoly.one(self.rank, self.degree, self.modulus)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self.rank == other.rank and self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, self.modulus, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def component(self, k: int) -> "TensorPoly":
        return TensorPoly(self.rank, k, {m: c for m, c in self.terms.items() if len(m) == k}, self.modulus)

    def is_homogeneous(self) -> int | None:
        """Common degree of all monomials, or None (the zero element counts)."""
        degs = {len(m) for m in self.terms}
        if len(degs) > 1:
            return None
        return degs.pop() if degs else -1

    def reduce_mod(self, p: int) -> "TensorPoly":
        return TensorPoly(self.rank, self.degree, self.terms, p)

    def commutator(self, other: "TensorPoly") -> "TensorPoly":
        return self * other - other * self

    def to_list(self) -> list[list]:
        """Sorted [coefficient, "X1X2"] pairs, for reports."""
        return [[c, mono_str(m)] for m, c in sorted(self.terms.items(), key=lambda mc: (len(mc[0]), mc[0]))]

    def __repr__(self):
        return f"TensorPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, m in self.to_list():
            body = m or "1"
            parts.append(f"{c}*{body}" if c != 1 else body)
        return " + ".join(parts)


def mono_str(m: Mono) -> str:
    return "".join(f"X{i}" for i in m)


def parse_monomial(text: str) -> Mono:
    parts = text.strip().split("X")
    if parts[0] != "":
        raise ValueError(f"bad monomial {text!r}")
    return tuple(int(s) for s in parts[1:])


# -- Magnus expansion -----------------------------------------------------------

def _append_letter(terms: dict[Mono, int], a: int, d: int, modulus: int) -> dict[Mono, int]:
    """Right-multiply by the expansion of the letter a (signed index)."""
    i = abs(a)
    out = dict(terms)
    if a > 0:
        for m, c in terms.items():
            if len(m) < d:
                m2 = m + (i,)
                out[m2] = out.get(m2, 0) + c
    else:
        for m, c in terms.items():
            sign = -1
            m2 = m
            while len(m2) < d:
                m2 = m2 + (i,)
                out[m2] = out.get(m2, 0) + sign * c
                sign = -sign
    if modulus:
        out = {m: c % modulus for m, c in out.items() if c % modulus}
    else:
        out = {m: c for m, c in out.items() if c}
    return out


def magnus_word(w: Word, d: int, modulus: int = 0) -> TensorPoly:
    terms: dict[Mono, int] = {(): 1}
    for a in w.letters:
        terms = _append_letter(terms, a, d, modulus)
    return TensorPoly(w.rank, d, terms, modulus)


def magnus(u: GroupRingElement | Word, d: int, modulus: int | None = None) -> TensorPoly:
    """Magnus image truncated above degree d: x_i -> 1 + X_i."""
    if d < 0:
        raise ValueError("truncation degree must be >= 0")
    if isinstance(u, Word):
        return magnus_word(u, d, modulus or 0)
    mod = u.modulus if modulus is None else modulus
    out: dict[Mono, int] = {}
    for w, c in u.terms.items():
        for m, x in magnus_word(w, d, mod).terms.items():
            out[m] = out.get(m, 0) + c * x
    return TensorPoly(u.rank, d, out, mod)


ZERO = "zero"


def valuation(u: GroupRingElement | Word | TensorPoly, d_max: int, modulus: int = 0):
    """Least k with a nonzero degree-k Magnus component.

    Words are read as ``w - 1``.  Returns ``d_max + 1`` when nothing up to
    d_max survives ("at least d_max+1"), and "zero" for the zero element.
    """
    if isinstance(u, Word):
        if not u.letters:
            return ZERO
        t = magnus_word(u, d_max, modulus) - TensorPoly.one(u.rank, d_max, modulus)
    elif isinstance(u, GroupRingElement):
        if not u.terms:
            return ZERO
        t = magnus(u, d_max, modulus or u.modulus)
    else:
        t = u
    if not t.terms:
        return d_max + 1
    return min(len(m) for m in t.terms)


def graded_component(t: TensorPoly, k: int) -> TensorPoly:
    if k > t.degree:
        raise ValueError(f"degree {k} is above the truncation {t.degree}")
    return t.component(k)


# -- contraction ------------------------------------------------------------------

def contract(i: int, t: TensorPoly) -> TensorPoly:
    """X_i^* applied to the last tensor factor; zero on constants."""
    k = t.is_homogeneous()
    if k is None:
        raise ValueError("contract needs a homogeneous tensor")
    out = {m[:-1]: c for m, c in t.terms.items() if m and m[-1] == i}
    return TensorPoly(t.rank, max(k - 1, 0), out, t.modulus)


# -- cyclic quotients ----------------------------------------------------------

def necklace(m: Mono) -> Mono:
    """Lexicographically minimal rotation."""
    if not m:
        return m
    return min(m[r:] + m[:r] for r in range(len(m)))


def period(m: Mono) -> int:
    k = len(m)
    for d in range(1, k + 1):
        if k % d == 0 and m[d:] + m[:d] == m:
            return d
    return k


def is_p_power_class(m: Mono, p: int) -> bool:
    k = len(m)
    return k > 0 and (k // period(m)) % p == 0


def necklaces(n: int, k: int) -> list[Mono]:
    """All necklaces of length k over 1..n, sorted."""
    out = []
    # every necklace is a rotation-minimal word; generate via enumeration
    def rec(prefix: Mono):
        if len(prefix) == k:
            if necklace(prefix) == prefix:
                out.append(prefix)
            return
        for a in range(1, n + 1):
            rec(prefix + (a,))
    rec(())
    return out


def necklace_count(n: int, k: int) -> int:
    from math import gcd
    total = sum(n ** gcd(r, k) for r in range(k))
    return total // k


@dataclass(frozen=True)
class CyclicClassVector:
    degree: int
    modulus: int = 0
    p_restricted: bool = False
    coeffs: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, CyclicClassVector):
            return NotImplemented
        return (self.degree, self.modulus, self.p_restricted, self.coeffs) == (
            other.degree, other.modulus, other.p_restricted, other.coeffs)

    def __hash__(self):
        return hash((self.degree, self.modulus, self.p_restricted, frozenset(self.coeffs.items())))

    def to_list(self) -> list[list]:
        return [[c, mono_str(m)] for m, c in sorted(self.coeffs.items())]

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*[{m}]" for c, m in self.to_list())


def cyclic_project(t: TensorPoly, p_restricted: bool = False) -> CyclicClassVector:
    k = t.is_homogeneous()
    if k is None:
        raise ValueError("cyclic_project needs a homogeneous tensor")
    if p_restricted and not t.modulus:
        raise ValueError("the p-restricted quotient needs a prime modulus")
    acc: dict[Mono, int] = {}
    for m, c in t.terms.items():
        key = necklace(m)
        acc[key] = acc.get(key, 0) + c
    out = {}
    for key, c in acc.items():
        c = _norm(c, t.modulus)
        if not c:
            continue
        if p_restricted and is_p_power_class(key, t.modulus):
            continue
        out[key] = c
    return CyclicClassVector(k if k >= 0 else t.degree, t.modulus, p_restricted, out)


def in_bracket_subspace(t: TensorPoly, p_restricted: bool = False) -> bool:
    """Membership in [TV,TV]_k (plus (TV)^p_k with the flag)."""
    return cyclic_project(t, p_restricted).is_zero()


def monomial_trace(m: Mono, coeffs: list[list[int]], k: int) -> int:
    """tr(C_{m_1} ... C_{m_k}) for C_i = sum_j coeffs[i][j] e_{j,j+1} (indices mod k)."""
    total = 0
    for j in range(k):
        prod = 1
        for t, i in enumerate(m):
            prod *= coeffs[i][(j + t) % k]
            if not prod:
                break
        total += prod
    return total


def bryant_matrix_test(t: TensorPoly, samples: int = 50, seed: int = 0, bound: int = 10) -> bool:
    """Sampling test: False certifies t is not a sum of commutators.

    Each X_i is sent to a random C_i in span{e_{j,j+1}} inside M_k; over F_p
    the entries are random in F_p, over Z in [-bound, bound].
    """
    k = t.is_homogeneous()
    if k is None:
        raise ValueError("bryant_matrix_test needs a homogeneous tensor")
    if k <= 0:
        return all(c == 0 for c in t.terms.values())
    rng = random.Random(seed)
    mod = t.modulus
    for _ in range(samples):
        coeffs = [[0] * k] + [
            [rng.randrange(mod) if mod else rng.randint(-bound, bound) for _ in range(k)]
            for _ in range(t.rank)
        ]
        tr = sum(c * monomial_trace(m, coeffs, k) for m, c in t.terms.items())
        if _norm(tr, mod):
            return False
    return True


# -- dense mod-p Magnus expansion ----------------------------------------------------

def dense_magnus(w: Word, d: int, p: int):
    """Degree blocks of the F_p Magnus image of w, as numpy vectors.

    Block k has length n^k; the monomial (i_1..i_k) sits at the base-n index
    of (i_1-1, ..., i_k-1).  Only sensible for prime p and small n^d.
    """
    import numpy as np

    n = w.rank
    blocks = [np.zeros(n ** k, dtype=np.int64) for k in range(d + 1)]
    blocks[0][0] = 1
    for a in w.letters:
        i = abs(a) - 1
        if a > 0:
            for k in range(d - 1, -1, -1):
                blocks[k + 1][i::n] += blocks[k]
                blocks[k + 1] %= p
        else:
            for k in range(d):
                blocks[k + 1][i::n] -= blocks[k]
                blocks[k + 1] %= p
    return blocks


def dense_valuation(w: Word, d: int, p: int) -> int:
    """F_p Magnus valuation of w - 1, or d+1 if nothing survives up to degree d."""
    blocks = dense_magnus(w, d, p)
    for k in range(1, d + 1):
        if blocks[k].any():
            return k
    return d + 1
