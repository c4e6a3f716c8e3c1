"""Free Lie rings in Lyndon coordinates, restricted Lie algebras, graded derivations.

Everything goes through the embedding into TV: the Lyndon polynomial P_w has
lexicographically least monomial w with coefficient 1, and P_w^(p^e) has least
monomial w^(p^e).  Decomposition is therefore a triangular solve.
"""
from __future__ import annotations

import functools
import threading
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .tensor import Mono, TensorPoly, mono_str

Key = tuple[Mono, int]  # (Lyndon word, e): the element P_w^(p^e)


class NotLieError(ValueError):
    def __init__(self, msg: str, residual: TensorPoly):
        super().__init__(f"{msg}; residual {residual}")
        self.residual = residual


def _norm(c: int, modulus: int) -> int:
    return c % modulus if modulus else c


# -- Lyndon words ------------------------------------------------------------

def lyndon_words(n: int, k: int) -> list[Mono]:
    """Lyndon words of length exactly k over 1..n, lexicographic order (Duval)."""
    out = []
    w = [0]
    while w:
        w[-1] += 1
        if len(w) == k:
            out.append(tuple(w))
        m = len(w)
        while len(w) < k:
            w.append(w[len(w) - m])
        while w and w[-1] == n:
            w.pop()
    return out


def is_lyndon(w: Mono) -> bool:
    return bool(w) and all(w < w[r:] + w[:r] for r in range(1, len(w)))


def standard_factorization(w: Mono) -> tuple[Mono, Mono]:
    """w = uv with v the longest proper Lyndon suffix."""
    for r in range(1, len(w)):
        if is_lyndon(w[r:]):
            return w[:r], w[r:]
    raise ValueError(f"{w} has length 1")


def bracketing(w: Mono) -> str:
    if len(w) == 1:
        return f"X{w[0]}"
    u, v = standard_factorization(w)
    return f"[{bracketing(u)},{bracketing(v)}]"


def mobius(n: int) -> int:
    res, m, q = 1, n, 2
    while q * q <= m:
        if m % q == 0:
            m //= q
            if m % q == 0:
                return 0
            res = -res
        q += 1
    if m > 1:
        res = -res
    return res


def witt_number(n: int, k: int) -> int:
    return sum(mobius(e) * n ** (k // e) for e in range(1, k + 1) if k % e == 0) // k


def restricted_dim(n: int, k: int, p: int) -> int:
    total, q = 0, 1
    while k % q == 0:
        total += witt_number(n, k // q)
        q *= p
    return total


@dataclass(frozen=True)
class LyndonBasis:
    rank: int
    degree: int
    words: tuple[Mono, ...]

    def __len__(self):
        return len(self.words)

    def index(self, w: Mono) -> int:
        return _basis_index(self.rank, self.degree)[w]

    def bracketings(self) -> list[str]:
        return [bracketing(w) for w in self.words]


_lock = threading.Lock()


@functools.lru_cache(maxsize=None)
def _basis(n: int, k: int) -> LyndonBasis:
    return LyndonBasis(n, k, tuple(lyndon_words(n, k)))


@functools.lru_cache(maxsize=None)
def _basis_index(n: int, k: int) -> dict:
    return {w: t for t, w in enumerate(_basis(n, k).words)}


def lyndon_basis(n: int, k: int) -> LyndonBasis:
    if n < 1 or k < 1:
        raise ValueError("n, k must be >= 1")
    with _lock:
        return _basis(n, k)


@functools.lru_cache(maxsize=None)
def _embed_terms(w: Mono) -> dict[Mono, int]:
    if len(w) == 1:
        return {w: 1}
    u, v = standard_factorization(w)
    a, b = _embed_terms(u), _embed_terms(v)
    out: dict[Mono, int] = {}
    for x, c in a.items():
        for y, d in b.items():
            out[x + y] = out.get(x + y, 0) + c * d
            out[y + x] = out.get(y + x, 0) - c * d
    return {m: c for m, c in out.items() if c}


def _power_terms(terms: Mapping[Mono, int], e: int, modulus: int) -> dict[Mono, int]:
    out: dict[Mono, int] = {(): 1}
    for _ in range(e):
        nxt: dict[Mono, int] = {}
        for x, c in out.items():
            for y, d in terms.items():
                nxt[x + y] = nxt.get(x + y, 0) + c * d
        out = {m: _norm(c, modulus) for m, c in nxt.items() if _norm(c, modulus)}
    return out


@functools.lru_cache(maxsize=None)
def _embed_key(key: Key, modulus: int) -> dict[Mono, int]:
    w, e = key
    base = _embed_terms(w)
    if e == 0:
        return {m: _norm(c, modulus) for m, c in base.items() if _norm(c, modulus)}
    return _power_terms(base, modulus ** e, modulus)


def restricted_keys(n: int, k: int, p: int) -> list[Key]:
    """Basis of the degree-k part of the free restricted Lie algebra over F_p."""
    keys = []
    q, e = 1, 0
    while k % q == 0:
        keys.extend((w, e) for w in lyndon_words(n, k // q))
        q *= p
        e += 1
    return keys


# -- Lie elements -----------------------------------------------------------------

class LieElement:
    """Homogeneous element of the free Lie ring (or restricted Lie algebra).

    ``coeffs`` maps (Lyndon word, e) to a coefficient; e > 0 only occurs when
    ``restricted`` is set, in which case ``modulus`` is the prime p.
    """

    __slots__ = ("rank", "degree", "modulus", "restricted", "coeffs")

    def __init__(self, rank: int, degree: int, coeffs: Mapping[Key, int] | None = None,
                 modulus: int = 0, restricted: bool = False):
        self.rank = rank
        self.degree = degree
        self.modulus = modulus
        self.restricted = restricted
        clean = {}
        for key, c in (coeffs or {}).items():
            if key[1] and not restricted:
                raise ValueError("p-power coordinates need a restricted element")
            c = _norm(c, modulus)
            if c:
                clean[key] = c
        self.coeffs = clean

    @classmethod
    def from_words(cls, rank: int, coeffs: Mapping[Mono, int], modulus: int = 0) -> "LieElement":
        degs = {len(w) for w in coeffs}
        if len(degs) > 1:
            raise ValueError("inhomogeneous")
        deg = degs.pop() if degs else 1
        return cls(rank, deg, {(w, 0): c for w, c in coeffs.items()}, modulus)

    @classmethod
    def gen(cls, rank: int, i: int, modulus: int = 0) -> "LieElement":
        return cls(rank, 1, {((i,), 0): 1}, modulus)

    def __add__(self, other: "LieElement") -> "LieElement":
        if (self.rank, self.modulus) != (other.rank, other.modulus):
            raise ValueError("rank or ring mismatch")
        if self.coeffs and other.coeffs and self.degree != other.degree:
            raise ValueError("degree mismatch")
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        deg = self.degree if self.coeffs else other.degree
        return LieElement(self.rank, deg, out, self.modulus, self.restricted or other.restricted)

    def __neg__(self):
        return LieElement(self.rank, self.degree, {k: -c for k, c in self.coeffs.items()},
                          self.modulus, self.restricted)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c: int):
        return LieElement(self.rank, self.degree, {k: v * c for k, v in self.coeffs.items()},
                          self.modulus, self.restricted)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return (self.rank, self.modulus, self.coeffs) == (other.rank, other.modulus, other.coeffs) and (
            not self.coeffs or self.degree == other.degree)

    def __hash__(self):
        return hash((self.rank, self.modulus, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def reduce_mod(self, p: int, restricted: bool = True) -> "LieElement":
        return LieElement(self.rank, self.degree, self.coeffs, p, restricted)

    def p_power_part(self) -> dict[Key, int]:
        return {k: c for k, c in self.coeffs.items() if k[1] > 0}

    def coordinates(self, keys: Sequence[Key] | None = None) -> list[int]:
        if keys is None:
            keys = basis_keys(self.rank, self.degree, self.modulus if self.restricted else 0)
        return [self.coeffs.get(k, 0) for k in keys]

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (w, e), c in sorted(self.coeffs.items(), key=lambda kc: (kc[0][1], kc[0][0])):
            b = bracketing(w)
            if e:
                b = f"({b})^{self.modulus ** e}"
            parts.append(b if c == 1 else f"{c}*{b}")
        return " + ".join(parts)

    __repr__ = __str__


def basis_keys(n: int, k: int, p: int = 0) -> list[Key]:
    """Lyndon keys of degree k; with p > 0 the restricted basis over F_p."""
    if p:
        return restricted_keys(n, k, p)
    return [(w, 0) for w in lyndon_basis(n, k).words]


def lie_embed(x: LieElement) -> TensorPoly:
    out: dict[Mono, int] = {}
    for key, c in x.coeffs.items():
        for m, d in _embed_key(key, x.modulus if x.restricted else 0).items():
            out[m] = out.get(m, 0) + c * d
    return TensorPoly(x.rank, x.degree, out, x.modulus)


def _decompose(t: TensorPoly, restricted: bool) -> LieElement:
    k = t.is_homogeneous()
    if k is None:
        raise ValueError("lie_decompose needs a homogeneous tensor")
    mod = t.modulus
    if restricted and not mod:
        raise ValueError("restricted decomposition needs a prime modulus")
    rest = dict(t.terms)
    coeffs: dict[Key, int] = {}
    while rest:
        m = min(rest)
        c = rest[m]
        key = _leading_key(m, mod if restricted else 0)
        if key is None:
            what = "not in the restricted Lie algebra" if restricted else "not a Lie element"
            raise NotLieError(what, TensorPoly(t.rank, k, rest, mod))
        coeffs[key] = c
        for mm, d in _embed_key(key, mod if restricted else 0).items():
            v = _norm(rest.get(mm, 0) - c * d, mod)
            if v:
                rest[mm] = v
            else:
                rest.pop(mm, None)
    return LieElement(t.rank, max(k, 1), coeffs, mod, restricted)


def _leading_key(m: Mono, p: int) -> Key | None:
    if is_lyndon(m):
        return (m, 0)
    if not p:
        return None
    k = len(m)
    q, e = p, 1
    while k % q == 0:
        r = k // q
        if is_lyndon(m[:r]) and m == m[:r] * q:
            return (m[:r], e)
        q *= p
        e += 1
    return None


def lie_decompose(t: TensorPoly) -> LieElement:
    """Lyndon coordinates of a homogeneous Lie element of TV (raises NotLieError)."""
    return _decompose(t, False)


def restricted_decompose(t: TensorPoly) -> LieElement:
    """Coordinates in the free restricted Lie algebra over F_p."""
    return _decompose(t, True)


def decompose(t: TensorPoly, restricted: bool = False) -> LieElement:
    return _decompose(t, restricted)


def bracket(x: LieElement, y: LieElement) -> LieElement:
    tx, ty = lie_embed(x), lie_embed(y)
    deg = x.degree + y.degree
    tx.degree = ty.degree = deg
    t = tx * ty - ty * tx
    t.degree = deg
    restricted = x.restricted or y.restricted
    try:
        out = _decompose(t, restricted) if t.terms else LieElement(x.rank, deg, {}, x.modulus, restricted)
    except NotLieError as exc:  # pragma: no cover - would be a bug
        raise RuntimeError("bracket of Lie elements left the Lie algebra") from exc
    out.degree = deg
    return out


def p_power(x: LieElement, p: int) -> LieElement:
    """Restricted p-th power, computed in T_{F_p}V."""
    t = lie_embed(x.reduce_mod(p, True))
    t.degree = x.degree * p
    return restricted_decompose(t ** p)


# -- derivations ---------------------------------------------------------------------

def _apply_tensor_derivation(values: Sequence[Mapping[Mono, int]], terms: Mapping[Mono, int],
                             modulus: int) -> dict[Mono, int]:
    """Extend X_i -> values[i-1] to TV by the Leibniz rule."""
    out: dict[Mono, int] = {}
    for m, c in terms.items():
        for pos, i in enumerate(m):
            pre, post = m[:pos], m[pos + 1:]
            for v, d in values[i - 1].items():
                mm = pre + v + post
                out[mm] = out.get(mm, 0) + c * d
    return {m: _norm(c, modulus) for m, c in out.items() if _norm(c, modulus)}


class Derivation:
    """Degree-k derivation of the free Lie ring: X_i -> values[i-1] of degree k+1."""

    __slots__ = ("rank", "degree", "modulus", "restricted", "values", "_tensors")

    def __init__(self, rank: int, degree: int, values: Sequence[LieElement],
                 modulus: int = 0, restricted: bool = False):
        if len(values) != rank:
            raise ValueError(f"need {rank} values")
        for v in values:
            if v.coeffs and v.degree != degree + 1:
                raise ValueError("value degree must be k+1")
        self.rank = rank
        self.degree = degree
        self.modulus = modulus
        self.restricted = restricted
        self.values = tuple(
            LieElement(rank, degree + 1, v.coeffs, modulus, restricted) for v in values)
        self._tensors = None

    @classmethod
    def zero(cls, rank: int, degree: int, modulus: int = 0, restricted: bool = False) -> "Derivation":
        return cls(rank, degree, [LieElement(rank, degree + 1, {}, modulus, restricted)] * rank,
                   modulus, restricted)

    @classmethod
    def elementary(cls, rank: int, i: int, key: Key, modulus: int = 0, restricted: bool = False) -> "Derivation":
        """X_i^* (x) basis element."""
        deg = len(key[0]) * (modulus ** key[1] if key[1] else 1)
        vals = [LieElement(rank, deg, {}, modulus, restricted) for _ in range(rank)]
        vals[i - 1] = LieElement(rank, deg, {key: 1}, modulus, restricted)
        return cls(rank, deg - 1, vals, modulus, restricted)

    @classmethod
    def from_vector(cls, rank: int, degree: int, vec: Sequence[int], modulus: int = 0,
                    restricted: bool = False) -> "Derivation":
        keys = basis_keys(rank, degree + 1, modulus if restricted else 0)
        m = len(keys)
        vals = []
        for i in range(rank):
            chunk = vec[i * m:(i + 1) * m]
            vals.append(LieElement(rank, degree + 1, {keys[t]: int(c) for t, c in enumerate(chunk) if c},
                                   modulus, restricted))
        return cls(rank, degree, vals, modulus, restricted)

    def vector(self) -> list[int]:
        keys = basis_keys(self.rank, self.degree + 1, self.modulus if self.restricted else 0)
        out = []
        for v in self.values:
            out.extend(v.coeffs.get(k, 0) for k in keys)
        return out

    def tensors(self) -> list[dict[Mono, int]]:
        if self._tensors is None:
            self._tensors = [lie_embed(v).terms for v in self.values]
        return self._tensors

    def apply_tensor(self, t: TensorPoly) -> TensorPoly:
        k = t.is_homogeneous()
        deg = (k if k is not None and k > 0 else 0) + self.degree
        return TensorPoly(self.rank, deg, _apply_tensor_derivation(self.tensors(), t.terms, self.modulus),
                          self.modulus)

    def apply(self, x: LieElement) -> LieElement:
        t = self.apply_tensor(lie_embed(x))
        deg = x.degree + self.degree
        if not t.terms:
            return LieElement(self.rank, deg, {}, self.modulus, self.restricted)
        return _decompose(t, self.restricted)

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.rank, self.degree, [a + b for a, b in zip(self.values, other.values)],
                          self.modulus, self.restricted)

    def __neg__(self):
        return Derivation(self.rank, self.degree, [-a for a in self.values], self.modulus, self.restricted)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c: int):
        return Derivation(self.rank, self.degree, [a * c for a in self.values], self.modulus, self.restricted)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.rank == other.rank and self.degree == other.degree and self.values == other.values

    def __hash__(self):
        return hash((self.rank, self.degree, self.values))

    def is_zero(self) -> bool:
        return not any(v.coeffs for v in self.values)

    def reduce_mod(self, p: int, restricted: bool = True) -> "Derivation":
        return Derivation(self.rank, self.degree, [v.reduce_mod(p, restricted) for v in self.values],
                          p, restricted)

    def __str__(self):
        parts = [f"X{i + 1}* (x) ({v})" for i, v in enumerate(self.values) if v.coeffs]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def derivation_bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """[d1, d2](X_i) = d1(d2 X_i) - d2(d1 X_i)."""
    if d1.rank != d2.rank or d1.modulus != d2.modulus:
        raise ValueError("rank or ring mismatch")
    restricted = d1.restricted or d2.restricted
    mod = d1.modulus
    t1, t2 = d1.tensors(), d2.tensors()
    deg = d1.degree + d2.degree
    vals = []
    for i in range(d1.rank):
        a = _apply_tensor_derivation(t1, t2[i], mod)
        b = _apply_tensor_derivation(t2, t1[i], mod)
        for m, c in b.items():
            a[m] = a.get(m, 0) - c
        t = TensorPoly(d1.rank, deg + 1, a, mod)
        if t.terms:
            vals.append(_decompose(t, restricted))
        else:
            vals.append(LieElement(d1.rank, deg + 1, {}, mod, restricted))
    return Derivation(d1.rank, deg, vals, mod, restricted)


def derivation_p_power(d: Derivation, p: int) -> Derivation:
    """d^p as a derivation (in characteristic p), by iterating d on X_i."""
    mod = p
    base = d.reduce_mod(p, True) if d.modulus != p or not d.restricted else d
    t = base.tensors()
    vals = []
    for i in range(d.rank):
        cur = {(i + 1,): 1}
        for _ in range(p):
            cur = _apply_tensor_derivation(t, cur, mod)
        tp = TensorPoly(d.rank, p * d.degree + 1, cur, mod)
        vals.append(restricted_decompose(tp) if tp.terms
                    else LieElement(d.rank, p * d.degree + 1, {}, mod, True))
    return Derivation(d.rank, p * d.degree, vals, mod, True)


def derivation_dim(n: int, k: int, p: int = 0) -> int:
    """dim of V^* (x) L_{k+1} (restricted over F_p when p > 0)."""
    return n * (restricted_dim(n, k + 1, p) if p else witt_number(n, k + 1))


def keys_str(keys: Iterable[Key], p: int = 0) -> list[str]:
    out = []
    for w, e in keys:
        b = bracketing(w)
        out.append(f"({b})^{p ** e}" if e else b)
    return out


__all__ = [
    "LyndonBasis", "LieElement", "Derivation", "NotLieError", "lyndon_basis", "lyndon_words",
    "is_lyndon", "standard_factorization", "bracketing", "witt_number", "restricted_dim",
    "basis_keys", "restricted_keys", "lie_embed", "lie_decompose", "restricted_decompose",
    "decompose", "bracket", "p_power", "derivation_bracket", "derivation_p_power", "derivation_dim",
    "mono_str", "keys_str",
]
