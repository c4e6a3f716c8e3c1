"""Mod-p lower central series, the restricted Andreadakis filtration, and the
degree concentration of the cokernel of 𝔍^[p] in ker(tr)."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import lattice as zl
from .filtration import (AutPair, GradedAutClass, andreadakis_depth, bracket_images, ia_generator_pairs,
                         johnson, trace_algebraic, trace_fox, trace_matrix)
from .lie import (Derivation, derivation_dim, derivation_p_power, restricted_dim,
                  standard_factorization, witt_number, lyndon_words)
from .tensor import CyclicClassVector, dense_valuation, magnus_word
from .words import Endomorphism, Word, commutator, endo_power


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def _need_prime(p: int):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def gamma_p_degree(w: Word, p: int, d_max: int) -> int:
    """Largest k <= d_max + 1 with w in the k-th mod-p dimension subgroup (capped)."""
    _need_prime(p)
    if not w.letters:
        return d_max + 1
    if w.rank ** d_max <= 1 << 16:
        return dense_valuation(w, d_max, p)
    t = magnus_word(w, d_max, p)
    low = [len(m) for m in t.terms if m]
    return min(low) if low else d_max + 1


def bracket_word(rank: int, lyndon: tuple[int, ...]) -> Word:
    """Group commutator following the standard bracketing of a Lyndon word."""
    if len(lyndon) == 1:
        return Word.gen(rank, lyndon[0])
    u, v = standard_factorization(lyndon)
    return commutator(bracket_word(rank, u), bracket_word(rank, v))


def _random_word(n: int, length: int, rng: random.Random) -> Word:
    return Word.from_letters(n, [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(length)])


def _random_gamma(n: int, i: int, rng: random.Random) -> Word:
    """A random left-normed commutator of weight i (so in Gamma_i)."""
    w = _random_word(n, rng.randint(1, 3), rng)
    for _ in range(i - 1):
        w = commutator(w, _random_word(n, rng.randint(1, 3), rng))
    return w


@dataclass
class ProductFormulaReport:
    n: int
    p: int
    k_max: int
    samples: int
    seed: int
    lower_bound_ok: bool
    leading_ranks: dict = field(default_factory=dict)
    expected_ranks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.lower_bound_ok and self.leading_ranks == self.expected_ranks


def verify_gamma_p_product_formula(n: int, p: int, k_max: int, samples: int = 20, seed: int = 0) -> ProductFormulaReport:
    """Products of (Gamma_i)^(p^j) with i p^j >= k have mod-p degree >= k, and the
    leading terms of the obvious basis elements span a space of the restricted dimension."""
    _need_prime(p)
    rng = random.Random(seed)
    ok = True
    for k in range(1, k_max + 1):
        # factors (Gamma_i)^(p^j) with i p^j >= k; j <= 1 keeps words short
        pairs = [(i, j) for j in (0, 1) for i in range(1, k + 1) if i * p ** j >= k]
        for _ in range(samples):
            w = Word.identity(n)
            for _ in range(2):
                i, j = rng.choice(pairs)
                w = w * _random_gamma(n, i, rng) ** (p ** j)
            ok &= gamma_p_degree(w, p, k) >= k
    ranks, expected = {}, {}
    for k in range(1, k_max + 1):
        vecs = []
        q, e = 1, 0
        while k % q == 0:
            for lw in lyndon_words(n, k // q):
                g = bracket_word(n, lw) ** q
                t = magnus_word(g, k, p).component(k)
                vecs.append(_tensor_vector(t.terms, n, k))
            q *= p
            e += 1
        ranks[k] = zl.rank_mod_p(np.array(vecs, dtype=np.int64), p) if vecs else 0
        expected[k] = restricted_dim(n, k, p)
    return ProductFormulaReport(n, p, k_max, samples, seed, bool(ok), ranks, expected)


def _tensor_vector(terms: dict, n: int, k: int) -> list[int]:
    v = [0] * n ** k
    for m, c in terms.items():
        idx = 0
        for i in m:
            idx = idx * n + i - 1
        v[idx] = c
    return v


# -- restricted depth, Johnson, trace ----------------------------------------------------

def andreadakis_p_depth(f: Endomorphism, p: int, d_max: int):
    _need_prime(p)
    return andreadakis_depth(f, d_max, modulus=p)


def p_depth_fast(f: Endomorphism, p: int, d_max: int) -> int:
    """Same as andreadakis_p_depth (integer value), using the dense Magnus path."""
    from .filtration import acts_trivially_on_abelianization
    if acts_trivially_on_abelianization(f, p) is not None:
        return 0
    return min(dense_valuation(f.phi(i), d_max + 1, p) for i in range(1, f.rank + 1)) - 1


def p_graded_class(f: Endomorphism | AutPair, k: int, p: int) -> GradedAutClass:
    _need_prime(p)
    return GradedAutClass.make(f, k, modulus=p)


def johnson_p(g: GradedAutClass) -> Derivation:
    return johnson(g, restricted=True)


def trace_p(g: GradedAutClass) -> CyclicClassVector:
    return trace_fox(g, p_restricted=True)


def trace_p_algebraic(g: GradedAutClass) -> CyclicClassVector:
    return trace_algebraic(g, p_restricted=True, restricted=True)


def power_aut(n: int, i: int, j: int, p: int) -> AutPair:
    """x_i -> x_j^p x_i: an element of IA^[p] outside IA."""
    xi, xj = Word.gen(n, i), Word.gen(n, j)
    return AutPair(Endomorphism.from_images(n, {i: xj ** p * xi}),
                   Endomorphism.from_images(n, {i: xj ** (-p) * xi}), f"P{i}{j}")


@dataclass
class NontameWitness:
    p: int
    w: Word
    k: int
    cls: GradedAutClass
    value: Derivation
    p_power_coordinates: dict

    @property
    def certified(self) -> bool:
        return self.cls.depth == self.p * self.k - 1 and bool(self.p_power_coordinates)


def nontame_witness(w: Word, p: int) -> NontameWitness:
    """x_1 -> w^p x_1 for w free of x_1: depth pk-1 and a Johnson value with a p-th power."""
    _need_prime(p)
    if any(abs(a) == 1 for a in w.letters):
        raise ValueError("w must not involve x1")
    n = w.rank
    t = magnus_word(w, 8, 0)
    low = [len(m) for m in t.terms if m]
    if not low:
        raise ValueError("w must be nontrivial")
    k = min(low)
    x1 = Word.gen(n, 1)
    f = Endomorphism.from_images(n, {1: w ** p * x1})
    d = andreadakis_p_depth(f, p, p * k)
    if d.at_least or d.depth != p * k - 1:
        raise ValueError(f"unexpected depth {d} (wanted {p * k - 1})")
    cls = GradedAutClass(n, p * k - 1, f, p)
    val = johnson_p(cls)
    pp = {f"{i + 1}:{key}": c for i, v in enumerate(val.values) for key, c in v.p_power_part().items()}
    return NontameWitness(p, w, k, cls, val, pp)


# -- depth p-restriction samples -----------------------------------------------------------------

@dataclass
class PDepthSample:
    depth: int
    power_depth: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.power_depth >= self.bound


def sample_p_restriction(n: int, p: int, samples: int, seed: int, max_degree: int = 6) -> list[PDepthSample]:
    """depth(f^p) >= p depth(f) on random f in IA^[p].

    Depths are capped so the dense Magnus vectors (n^d entries) stay small; the
    tested inequality uses the capped depth, which is still a valid lower bound.
    """
    rng = random.Random(seed)
    gens = ia_generator_pairs(n)
    extra = [power_aut(n, i, j, p) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    cap = max(1, max_degree // p)
    out = []
    for _ in range(samples):
        f = AutPair.identity(n)
        for _ in range(rng.randint(1, 2)):
            g = rng.choice(gens + extra if rng.random() < 0.3 else gens)
            f = f @ (g if rng.random() < 0.5 else g.inv())
        d = p_depth_fast(f.forward, p, cap)
        d = min(d, cap)
        fp = endo_power(f.forward, p)
        pd = p_depth_fast(fp, p, p * d)
        out.append(PDepthSample(d, pd, p * d))
    return out


# -- concentration of the cokernel -------------------------------------------------------------------

def _rowspace_mod_p(rows: np.ndarray, p: int) -> np.ndarray:
    if rows.shape[0] == 0:
        return rows
    R, piv = zl.rref_mod_p(rows, p)
    return R


class RestrictedJ:
    """𝔍^[p]: generated in degree 1 by brackets and the p-th power of derivations."""

    def __init__(self, n: int, p: int):
        self.n, self.p = n, p
        self.cache: dict[int, np.ndarray] = {}

    def degree_one(self) -> np.ndarray:
        if 1 not in self.cache:
            rows = [johnson(GradedAutClass.make(g, 1, self.p), restricted=True).vector()
                    for g in ia_generator_pairs(self.n)]
            self.cache[1] = _rowspace_mod_p(np.array(rows, dtype=np.int64) % self.p, self.p)
        return self.cache[1]

    def basis(self, k: int) -> np.ndarray:
        if k in self.cache:
            return self.cache[k]
        if k == 1:
            return self.degree_one()
        n, p = self.n, self.p
        rows = [bracket_images(n, k, self.basis(k - 1), self.degree_one(), p)]
        if k % p == 0:
            low = self.basis(k // p)
            pw = [derivation_p_power(Derivation.from_vector(n, k // p, r, p, True), p).vector() for r in low]
            if pw:
                rows.append(np.array(pw, dtype=np.int64))
        allrows = np.concatenate(rows) % p
        self.cache[k] = _rowspace_mod_p(allrows, p)
        return self.cache[k]


def concentration_kind(k: int, p: int) -> str | None:
    if (k + 1) % p == 0:
        return "pl-1"
    if k % p == 0:
        return "pl"
    return None


def gap_bound(n: int, k: int, p: int) -> int | None:
    kind = concentration_kind(k, p)
    if kind == "pl-1":
        return n * (restricted_dim(n, k + 1, p) - witt_number(n, k + 1))
    if kind == "pl":
        return n ** (k // p)
    return None


@dataclass
class ConcentrationDegree:
    k: int
    der_dim: int
    j_dim: int
    ker_dim: int
    j_in_ker: bool
    kind: str | None
    bound: int | None

    @property
    def gap(self) -> int:
        return self.ker_dim - self.j_dim

    @property
    def ok(self) -> bool:
        if not self.j_in_ker:
            return False
        if self.kind is None:
            return self.gap == 0
        return 0 <= self.gap <= self.bound


@dataclass
class ConcentrationReport:
    n: int
    p: int
    degrees: list

    @property
    def passed(self) -> bool:
        return all(d.ok for d in self.degrees)


def verify_p_concentration(n: int, p: int, k_max: int, k_min: int = 2) -> ConcentrationReport:
    _need_prime(p)
    if p == 2:
        raise ValueError("degree-one surjectivity needs p != 2")
    if k_max > n - 2:
        raise ValueError("k_max must be <= n-2")
    J = RestrictedJ(n, p)
    out = []
    for k in range(k_min, k_max + 1):
        B = J.basis(k)
        A, _ = trace_matrix(n, k, p, p_restricted=True)
        ker = zl.left_kernel_mod_p(A, p)
        inker = not np.any((B.astype(np.int64) @ A) % p) if B.shape[0] else True
        out.append(ConcentrationDegree(k, derivation_dim(n, k, p), int(B.shape[0]), int(ker.shape[0]),
                                       inker, concentration_kind(k, p), gap_bound(n, k, p)))
    return ConcentrationReport(n, p, out)
