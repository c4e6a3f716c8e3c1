"""Andreadakis filtration: IA generators, depth, Johnson morphism, traces, the lattice J_k.

Most functions take ``modulus`` (0 for Z, a prime p for the mod-p theory) so
that the restricted variants in :mod:`andreadakis.restricted` share the code.
"""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field

import numpy as np

from . import lattice as zl
from .groupring import fox_derivative_word
from .lie import (Derivation, LieElement, basis_keys, decompose, derivation_bracket, derivation_dim,
                  lie_embed, _embed_key)
from .parallel import pmap
from .tensor import (CyclicClassVector, TensorPoly, contract, cyclic_project, magnus, magnus_word,
                     necklace, necklace_count, necklaces)
from .words import Endomorphism, Word, commutator, compose


# -- automorphisms with known inverses -----------------------------------------------

@dataclass(frozen=True)
class AutPair:
    """An automorphism together with its inverse, so group commutators are available."""

    forward: Endomorphism
    inverse: Endomorphism
    name: str = ""

    @property
    def rank(self) -> int:
        return self.forward.rank

    @classmethod
    def identity(cls, n: int) -> "AutPair":
        e = Endomorphism.identity(n)
        return cls(e, e, "1")

    def __matmul__(self, other: "AutPair") -> "AutPair":
        return AutPair(compose(self.forward, other.forward), compose(other.inverse, self.inverse),
                       f"{self.name}*{other.name}")

    def inv(self) -> "AutPair":
        return AutPair(self.inverse, self.forward, f"{self.name}^-1")

    def check(self) -> bool:
        return compose(self.forward, self.inverse) == Endomorphism.identity(self.rank)


def aut_commutator(f: AutPair, g: AutPair) -> AutPair:
    """f g f^-1 g^-1 (composition, g^-1 acting first)."""
    out = f @ g @ f.inv() @ g.inv()
    return AutPair(out.forward, out.inverse, f"[{f.name},{g.name}]")


def K(n: int, i: int, j: int, k: int | None = None) -> AutPair:
    """K_ij: x_i -> x_j x_i x_j^-1, and K_ijk: x_i -> [x_j, x_k] x_i."""
    xi = Word.gen(n, i)
    if k is None:
        xj = Word.gen(n, j)
        fwd = xj * xi * xj.inverse()
        inv = xj.inverse() * xi * xj
        name = f"K{i}{j}" if n < 10 else f"K({i},{j})"
    else:
        c = commutator(Word.gen(n, j), Word.gen(n, k))
        fwd = c * xi
        inv = c.inverse() * xi
        name = f"K{i}{j}{k}" if n < 10 else f"K({i},{j},{k})"
    return AutPair(Endomorphism.from_images(n, {i: fwd}), Endomorphism.from_images(n, {i: inv}), name)


def ia_generator_pairs(n: int) -> list[AutPair]:
    if n < 2:
        raise ValueError("n must be >= 2")
    out = [K(n, i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(j + 1, n + 1):
                if i not in (j, k):
                    out.append(K(n, i, j, k))
    return out


def ia_generators(n: int) -> list[Endomorphism]:
    """K_ij (i != j) then K_ijk (j < k, i not in {j, k})."""
    return [g.forward for g in ia_generator_pairs(n)]


def random_ia_element(n: int, length: int, rng: random.Random) -> AutPair:
    gens = ia_generator_pairs(n)
    out = AutPair.identity(n)
    for _ in range(length):
        g = rng.choice(gens)
        out = out @ (g if rng.random() < 0.5 else g.inv())
    return out


def permutation_aut(n: int, perm: dict[int, int]) -> AutPair:
    """x_i -> x_perm(i)."""
    fwd = Endomorphism(n, tuple(Word.gen(n, perm.get(i, i)) for i in range(1, n + 1)))
    invp = {v: k for k, v in perm.items()}
    inv = Endomorphism(n, tuple(Word.gen(n, invp.get(i, i)) for i in range(1, n + 1)))
    return AutPair(fwd, inv, "perm")


# -- automorphy and depth ---------------------------------------------------------------

def is_automorphism_mod_gamma(f: Endomorphism, c: int = 1, modulus: int = 0) -> bool:
    """Invertibility on every nilpotent quotient, decided on the abelianization."""
    if c < 1:
        raise ValueError("c must be >= 1")
    d = zl.determinant(f.abelianization())
    if modulus:
        return d % modulus != 0
    return abs(d) == 1


@dataclass(frozen=True)
class DepthResult:
    depth: int
    at_least: bool = False  # True when only a lower bound (the cap) is known
    witness: int | None = None  # generator index realizing the minimum, or failing IA

    def __int__(self):
        return self.depth

    def __str__(self):
        return f">= {self.depth}" if self.at_least else str(self.depth)


def acts_trivially_on_abelianization(f: Endomorphism, modulus: int = 0) -> int | None:
    """None if f is IA (IA^[p] when modulus = p); else the first moved generator."""
    for i, row in enumerate(f.abelianization()):
        for j, v in enumerate(row):
            target = 1 if i == j else 0
            diff = v - target
            if (diff % modulus if modulus else diff) != 0:
                return i + 1
    return None


def andreadakis_depth(f: Endomorphism, d_max: int, modulus: int = 0) -> DepthResult:
    """Largest k <= d_max with every x_i^-1 f(x_i) of (mod-p) Magnus valuation >= k+1."""
    bad = acts_trivially_on_abelianization(f, modulus)
    if bad is not None:
        return DepthResult(0, False, bad)
    best, arg = d_max + 2, None
    for i in range(1, f.rank + 1):
        t = magnus_word(f.phi(i), d_max + 1, modulus)
        low = [len(m) for m in t.terms if m]
        v = min(low) if low else d_max + 2
        if v < best:
            best, arg = v, i
    if best >= d_max + 1:
        return DepthResult(d_max, True, None)
    return DepthResult(best - 1, False, arg)


@dataclass(frozen=True)
class GradedAutClass:
    """A depth-k class represented by one endomorphism."""

    rank: int
    depth: int
    rep: Endomorphism
    modulus: int = 0

    @classmethod
    def make(cls, f: Endomorphism | AutPair, k: int, modulus: int = 0) -> "GradedAutClass":
        if isinstance(f, AutPair):
            f = f.forward
        if k < 1:
            raise ValueError("depth must be >= 1")
        if not is_automorphism_mod_gamma(f, 1, modulus):
            raise ValueError("not an automorphism on the abelianization")
        d = andreadakis_depth(f, k, modulus)
        if d.depth < k:
            raise ValueError(f"representative has depth {d}, below {k}")
        return cls(f.rank, k, f, modulus)


# -- Johnson and traces ------------------------------------------------------------------

def johnson(g: GradedAutClass, restricted: bool = False) -> Derivation:
    """X_i -> degree-(k+1) Magnus component of x_i^-1 g(x_i), in Lyndon coordinates."""
    n, k, mod = g.rank, g.depth, g.modulus
    vals = []
    for i in range(1, n + 1):
        t = magnus_word(g.rep.phi(i), k + 1, mod).component(k + 1)
        if t.terms:
            vals.append(decompose(t, restricted))
        else:
            vals.append(LieElement(n, k + 1, {}, mod, restricted))
    return Derivation(n, k, vals, mod, restricted)


def trace_fox(g: GradedAutClass, p_restricted: bool = False) -> CyclicClassVector:
    """Cyclic class of the degree-k part of sum_i d(phi_i)/dx_i."""
    n, k, mod = g.rank, g.depth, g.modulus
    acc: dict = {}
    for i in range(1, n + 1):
        u = fox_derivative_word(g.rep.phi(i), i, mod)
        for m, c in magnus(u, k).component(k).terms.items():
            acc[m] = acc.get(m, 0) + c
    return cyclic_project(TensorPoly(n, k, acc, mod), p_restricted)


def contraction(d: Derivation) -> TensorPoly:
    """Phi(d) = sum_i contraction of the X_i^* component of the embedded d."""
    acc: dict = {}
    for i, v in enumerate(d.values, start=1):
        for m, c in contract(i, lie_embed(v) if v.coeffs else TensorPoly(d.rank, d.degree + 1)).terms.items():
            acc[m] = acc.get(m, 0) + c
    return TensorPoly(d.rank, d.degree, acc, d.modulus)


def trace_of_derivation(d: Derivation, p_restricted: bool = False) -> CyclicClassVector:
    t = contraction(d)
    if not t.terms:
        return CyclicClassVector(d.degree, d.modulus, p_restricted, {})
    return cyclic_project(t, p_restricted)


def trace_algebraic(g: GradedAutClass, p_restricted: bool = False, restricted: bool = False) -> CyclicClassVector:
    return trace_of_derivation(johnson(g, restricted), p_restricted)


# -- matrices in derivation coordinates ---------------------------------------------------------

def der_basis(n: int, k: int, p: int = 0) -> list[tuple[int, tuple]]:
    """Coordinates of Der_k: pairs (i, key) meaning X_i^* (x) basis element."""
    keys = basis_keys(n, k + 1, p)
    return [(i, key) for i in range(1, n + 1) for key in keys]


def contraction_matrix(n: int, k: int, p: int = 0) -> np.ndarray:
    """Phi : Der_k -> V^{(x)k}, rows indexed by der_basis, columns by monomials."""
    cols = {m: t for t, m in enumerate(_all_monomials(n, k))}
    basis = der_basis(n, k, p)
    A = np.zeros((len(basis), len(cols)), dtype=np.int64)
    for r, (i, key) in enumerate(basis):
        for m, c in _embed_key(key, p).items():
            if m[-1] == i:
                A[r, cols[m[:-1]]] += c
    return A % p if p else A


def trace_matrix(n: int, k: int, p: int = 0, p_restricted: bool = False) -> tuple[np.ndarray, list]:
    """tr_M : Der_k -> C_k V (or C_k^[p] V), with the list of necklace columns."""
    from .tensor import is_p_power_class
    neck = [m for m in necklaces(n, k) if not (p_restricted and is_p_power_class(m, p))]
    cols = {m: t for t, m in enumerate(neck)}
    basis = der_basis(n, k, p)
    A = np.zeros((len(basis), len(neck)), dtype=np.int64)
    for r, (i, key) in enumerate(basis):
        for m, c in _embed_key(key, p).items():
            if m[-1] == i:
                nk = necklace(m[:-1])
                if nk in cols:
                    A[r, cols[nk]] += c
    return (A % p if p else A), neck


def _all_monomials(n: int, k: int) -> list[tuple]:
    import itertools
    return [tuple(m) for m in itertools.product(range(1, n + 1), repeat=k)]


def elementary(n: int, i: int, key, p: int = 0) -> Derivation:
    return Derivation.elementary(n, i, key, p, bool(p))


# -- the lattice J_k -------------------------------------------------------------------------

@dataclass
class JLattice:
    rank: int
    degree: int
    basis: np.ndarray  # HNF rows in der_basis coordinates
    generators: int = 0

    @property
    def lattice_rank(self) -> int:
        return int(self.basis.shape[0])


def degree_one_derivations(n: int) -> list[Derivation]:
    return [johnson(GradedAutClass.make(g, 1)) for g in ia_generator_pairs(n)]


def _bracket_column_block(args) -> np.ndarray:
    """Matrix of b -> [b, g] on the elementary basis of Der_{k-1}."""
    n, k, gvec, p = args
    g = Derivation.from_vector(n, 1, gvec, p, bool(p))
    basis = der_basis(n, k - 1, p)
    dim_out = derivation_dim(n, k, p)
    M = np.zeros((len(basis), dim_out), dtype=np.int64)
    for r, (i, key) in enumerate(basis):
        b = Derivation.elementary(n, i, key, p, bool(p))
        M[r] = derivation_bracket(b, g).vector()
    return M


def bracket_images(n: int, k: int, lower: np.ndarray, gens: np.ndarray, p: int = 0) -> np.ndarray:
    """All rows [b, g] for b a row of ``lower`` (degree k-1) and g a row of ``gens`` (degree 1)."""
    blocks = pmap(_bracket_column_block, [(n, k, [int(x) for x in g], p) for g in gens])
    B = np.asarray(lower, dtype=object if lower.dtype == object else np.int64)
    out = [B @ Mg for Mg in blocks]
    rows = np.concatenate(out) if out else np.zeros((0, derivation_dim(n, k, p)), dtype=np.int64)
    if p:
        rows = rows % p
    return rows


def _dedupe(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return rows
    seen = set()
    keep = []
    for r in rows:
        key = tuple(int(x) for x in r)
        if any(key) and key not in seen:
            seen.add(key)
            keep.append(r)
    return np.array(keep, dtype=rows.dtype) if keep else rows[:0]


@functools.lru_cache(maxsize=None)
def _frakJ(n: int, k: int) -> JLattice:
    if k == 1:
        rows = np.array([d.vector() for d in degree_one_derivations(n)], dtype=np.int64)
        return JLattice(n, 1, zl.hnf_rows(_dedupe(rows)), rows.shape[0])
    lower = _frakJ(n, k - 1).basis
    gens = _frakJ(n, 1).basis
    rows = _dedupe(bracket_images(n, k, lower, gens))
    return JLattice(n, k, zl.hnf_rows(rows), rows.shape[0])


def frakJ_lattice(n: int, k: int) -> JLattice:
    """Sub-Lie ring generated in degree 1: iterated brackets of the tau(K)'s."""
    if n < 2 or k < 1:
        raise ValueError("need n >= 2, k >= 1")
    return _frakJ(n, k)


def ker_trace_lattice(n: int, k: int) -> np.ndarray:
    if k < 2:
        raise ValueError("k must be >= 2")
    A, _ = trace_matrix(n, k)
    return zl.left_kernel(A)


# -- stable surjectivity ---------------------------------------------------------------------------

@dataclass
class StableSurjectivityReport:
    n: int
    k: int
    der_dim: int
    j_rank: int
    ker_rank: int
    lattice_equal: bool
    coker_free_rank: int
    coker_torsion: tuple
    necklaces: int
    phi_rank: int
    phi_divisors_unit: bool
    ker_phi_in_J: bool
    trace_vanishes_on_J: bool
    witness: list | None = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (self.lattice_equal and self.coker_free_rank == self.necklaces and not self.coker_torsion
                and self.phi_surjective and self.ker_phi_in_J and self.trace_vanishes_on_J)

    @property
    def phi_surjective(self) -> bool:
        return self.phi_rank == self.n ** self.k and self.phi_divisors_unit


def verify_stable_surjectivity(n: int, k: int, enforce_range: bool = True) -> StableSurjectivityReport:
    if enforce_range and not 2 <= k <= n - 2:
        raise ValueError("stable range needs 2 <= k <= n-2")
    J = frakJ_lattice(n, k).basis
    A, neck = trace_matrix(n, k)
    ker = zl.left_kernel(A)
    dim = derivation_dim(n, k)
    equal = zl.lattice_equal(J, ker)
    witness = None
    if not equal:
        i = zl.first_missing(J, ker)
        if i is not None:
            witness = [int(x) for x in ker[i]]
        else:
            j = zl.first_missing(ker, J)
            witness = [int(x) for x in J[j]] if j is not None else None
    q = zl.quotient_structure(dim, J)
    # trace vanishes on J
    tr_J = np.asarray(J, dtype=object) @ A.astype(object)
    vanishes = not np.any(tr_J)
    Phi = contraction_matrix(n, k)
    div = zl.smith_divisors(Phi)
    kerPhi = zl.left_kernel(Phi)
    inJ = zl.lattice_contains(J, kerPhi) if kerPhi.shape[0] else True
    return StableSurjectivityReport(
        n=n, k=k, der_dim=dim, j_rank=int(J.shape[0]), ker_rank=int(ker.shape[0]), lattice_equal=equal,
        coker_free_rank=q.free_rank, coker_torsion=q.torsion, necklaces=necklace_count(n, k),
        phi_rank=len(div), phi_divisors_unit=all(d == 1 for d in div), ker_phi_in_J=inJ,
        trace_vanishes_on_J=vanishes, witness=witness)


def degree_one_report(n: int) -> dict:
    """tau on the IA generators in degree 1: rank and divisors of the image."""
    rows = np.array([d.vector() for d in degree_one_derivations(n)], dtype=np.int64)
    div = zl.smith_divisors(rows)
    return {"generators": int(rows.shape[0]), "der_dim": derivation_dim(n, 1),
            "rank": len(div), "divisors": div}
