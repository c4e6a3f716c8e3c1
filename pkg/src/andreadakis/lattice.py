"""Exact integer linear algebra: Hermite/Smith normal forms, lattices, F_p ranks.

Rows live in numpy int64 arrays while entries stay small; as soon as an update
could overflow, the whole echelon switches to Python integers (dtype=object).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

import numpy as np

_LIMIT = 1 << 62
_SAFE = 1 << 30


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, s, t with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def as_matrix(rows, cols: int | None = None) -> np.ndarray:
    """Integer matrix from nested lists, with object dtype if entries are large."""
    if isinstance(rows, np.ndarray):
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        return rows
    rows = [list(r) for r in rows]
    if not rows:
        return np.zeros((0, cols or 0), dtype=np.int64)
    big = any(abs(int(x)) >= _SAFE for r in rows for x in r)
    return np.array([[int(x) for x in r] for r in rows], dtype=object if big else np.int64)


def _absmax(v: np.ndarray) -> int:
    if v.size == 0:
        return 0
    if v.dtype == object:
        return max(abs(int(x)) for x in v)
    return int(np.abs(v).max())


class Echelon:
    """Incrementally maintained row echelon basis of a Z-lattice."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, np.ndarray] = {}
        self.big = False

    def _promote(self):
        if not self.big:
            self.big = True
            for c in self.rows:
                self.rows[c] = self.rows[c].astype(object)

    def _prep(self, v) -> np.ndarray:
        v = np.asarray(v)
        if self.big or v.dtype == object:
            self._promote()
            return np.array([int(x) for x in v], dtype=object)
        return v.astype(np.int64, copy=True)

    def _lin(self, x: int, u: np.ndarray, y: int, v: np.ndarray) -> np.ndarray:
        """x*u + y*v with an overflow guard."""
        if not self.big and (abs(x) * _absmax(u) + abs(y) * _absmax(v) >= _LIMIT
                             or abs(x) >= _LIMIT or abs(y) >= _LIMIT):
            self._promote()
            u, v = u.astype(object), v.astype(object)
        if self.big:
            u, v = u.astype(object), v.astype(object)
        return x * u + y * v

    def insert(self, v) -> bool:
        """Add a generator; returns True if the lattice grew in rank."""
        v = self._prep(v)
        while True:
            nz = np.flatnonzero(v)
            if nz.size == 0:
                return False
            c = int(nz[0])
            P = self.rows.get(c)
            if P is None:
                if v[c] < 0:
                    v = -v
                self.rows[c] = v
                return True
            a, b = int(P[c]), int(v[c])
            if b % a == 0:
                v = self._lin(1, v, -(b // a), P)
                continue
            g, s, t = xgcd(a, b)
            newP = self._lin(s, P, t, v)
            v = self._lin(a // g, v, -(b // g), P)
            self.rows[c] = newP

    def extend(self, rows: Iterable) -> None:
        for r in rows:
            self.insert(r)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def reduce_vector(self, v) -> np.ndarray:
        """Remainder of v modulo the lattice (zero iff v is a member)."""
        v = np.array([int(x) for x in np.asarray(v)], dtype=object)
        for c in self.pivots():
            if v[c]:
                P = self.rows[c]
                q = int(v[c]) // int(P[c])
                if q:
                    v = v - q * P.astype(object)
        return v

    def contains(self, v) -> bool:
        return not np.any(self.reduce_vector(v))

    def hermite(self) -> np.ndarray:
        """Canonical row HNF (positive pivots, entries above pivots reduced)."""
        piv = self.pivots()
        rows = [self.rows[c] for c in piv]
        for i, c in enumerate(piv):
            p = int(rows[i][c])
            for j in range(i):
                q = int(rows[j][c]) // p
                if q:
                    rows[j] = self._lin(1, rows[j], -q, rows[i])
                    if self.big:
                        rows = [r.astype(object) for r in rows]
        for i, c in enumerate(piv):
            self.rows[c] = rows[i]
        if not rows:
            return np.zeros((0, self.ncols), dtype=np.int64)
        dtype = object if self.big else np.int64
        return np.array(np.stack([r.astype(dtype) for r in rows]), dtype=dtype)


def hnf_rows(M) -> np.ndarray:
    """Row HNF of the lattice spanned by the rows of M (nonzero rows only)."""
    M = as_matrix(M)
    e = Echelon(M.shape[1])
    e.extend(M)
    return e.hermite()


def hnf(M) -> tuple[np.ndarray, np.ndarray]:
    """(H, U) with U unimodular and U @ M == H, H in row Hermite normal form."""
    M = as_matrix(M)
    m, n = M.shape
    aug = np.concatenate([M, np.eye(m, dtype=np.int64).astype(M.dtype)], axis=1)
    e = Echelon(n + m)
    e.extend(aug)
    full = e.hermite()
    top = [r for r in full if np.any(r[:n])]
    bottom = [r for r in full if not np.any(r[:n])]
    rows = top + bottom
    H = np.array([r[:n] for r in rows], dtype=object).reshape(m, n)
    U = np.array([r[n:] for r in rows], dtype=object).reshape(m, m)
    return _shrink(H), _shrink(U)


def _shrink(A: np.ndarray) -> np.ndarray:
    if A.dtype == object and (A.size == 0 or _absmax(A.ravel()) < _SAFE):
        return A.astype(np.int64)
    return A


def left_kernel(M) -> np.ndarray:
    """Basis (HNF rows) of {x in Z^m : x M = 0}."""
    M = as_matrix(M)
    m, n = M.shape
    aug = np.concatenate([M, np.eye(m, dtype=np.int64).astype(M.dtype)], axis=1)
    e = Echelon(n + m)
    e.extend(aug)
    ker = [e.rows[c][n:] for c in e.pivots() if c >= n]
    return hnf_rows(ker) if ker else np.zeros((0, m), dtype=np.int64)


def determinant(M) -> int:
    """Bareiss fraction-free determinant."""
    A = [[int(x) for x in r] for r in as_matrix(M)]
    n = len(A)
    if n == 0:
        return 1
    if any(len(r) != n for r in A):
        raise ValueError("square matrix required")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _is_diagonal(A: np.ndarray) -> bool:
    for i, r in enumerate(A):
        nz = np.flatnonzero(r)
        if nz.size and (nz.size > 1 or nz[0] != i):
            return False
    return True


def _normalize_divisors(d: list[int]) -> list[int]:
    d = sorted(abs(x) for x in d)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                a, b = d[i], d[j]
                if a and b % a:
                    g = gcd(a, b)
                    d[i], d[j] = g, a * b // g
                    changed = True
        d.sort()
    return d


def smith_divisors(M) -> list[int]:
    """Nonzero elementary divisors d_1 | d_2 | ... of the row lattice of M."""
    A = hnf_rows(M)
    if A.shape[0] == 0:
        return []
    prod = 1
    for r in A:
        prod *= int(r[np.flatnonzero(r)[0]])
    if prod == 1:
        return [1] * A.shape[0]
    while not _is_diagonal(A):
        A = hnf_rows(A.T)
        if _is_diagonal(A):
            break
        A = hnf_rows(A.T)
    return _normalize_divisors([int(A[i, i]) for i in range(A.shape[0])])


def snf(M) -> tuple[np.ndarray, list[int]]:
    """(D, divisors): D is the Smith form, divisors has length min(m, n)."""
    M = as_matrix(M)
    m, n = M.shape
    d = smith_divisors(M) if M.size else []
    d = d + [0] * (min(m, n) - len(d))
    D = np.zeros((m, n), dtype=object)
    for i, x in enumerate(d):
        D[i, i] = x
    return _shrink(D), d


def lattice_contains(A, B) -> bool:
    """True iff the row lattice of A contains every row of B."""
    A, B = as_matrix(A), as_matrix(B)
    e = Echelon(A.shape[1] if A.size else B.shape[1])
    e.extend(A)
    return all(e.contains(r) for r in B)


def lattice_equal(A, B) -> bool:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape[0] == 0 or B.shape[0] == 0:
        return not np.any(A) and not np.any(B)
    HA, HB = hnf_rows(A), hnf_rows(B)
    return HA.shape == HB.shape and all(int(x) == int(y) for x, y in zip(HA.ravel(), HB.ravel()))


def first_missing(A, B):
    """Index of the first row of B outside the lattice of A, or None."""
    A, B = as_matrix(A), as_matrix(B)
    e = Echelon(B.shape[1])
    e.extend(A)
    for i, r in enumerate(B):
        if not e.contains(r):
            return i
    return None


@dataclass(frozen=True)
class QuotientStructure:
    free_rank: int
    divisors: tuple[int, ...]

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.divisors if d > 1)

    @property
    def is_free(self) -> bool:
        return not self.torsion


def express_in(basis, rows) -> np.ndarray:
    """Integer coordinates C with C @ basis == rows (basis of full row rank)."""
    B = as_matrix(basis)
    H, U = hnf(B)
    r = sum(1 for h in H if np.any(h))
    if r != B.shape[0]:
        raise ValueError("ambient basis is not of full row rank")
    piv = [int(np.flatnonzero(H[i])[0]) for i in range(r)]
    out = []
    for v in as_matrix(rows):
        v = np.array([int(x) for x in v], dtype=object)
        x = [0] * r
        for i, c in enumerate(piv):
            if v[c]:
                q, rem = divmod(int(v[c]), int(H[i, c]))
                if rem:
                    raise ValueError("row is not in the ambient lattice")
                x[i] = q
                v = v - q * H[i].astype(object)
        if np.any(v):
            raise ValueError("row is not in the ambient lattice")
        out.append(np.array(x, dtype=object) @ U[:r].astype(object))
    return np.array(out, dtype=object).reshape(len(out), r)


def quotient_structure(ambient, sub) -> QuotientStructure:
    """Invariants of ambient / sub.  ``ambient`` is a dimension or basis rows."""
    if isinstance(ambient, int):
        dim = ambient
        coords = as_matrix(sub, dim)
    else:
        amb = as_matrix(ambient)
        dim = amb.shape[0]
        coords = express_in(amb, sub)
    if coords.shape[0] == 0:
        return QuotientStructure(dim, ())
    d = smith_divisors(coords)
    return QuotientStructure(dim - len(d), tuple(d))


# -- F_p linear algebra -------------------------------------------------------------

def rref_mod_p(M, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array([[int(x) % p for x in r] for r in as_matrix(M)], dtype=np.int64)
    if A.size == 0:
        return A, []
    m, n = A.shape
    piv = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        piv.append(c)
        r += 1
    return A[:r], piv


def rank_mod_p(M, p: int) -> int:
    return len(rref_mod_p(M, p)[1])


def left_kernel_mod_p(M, p: int) -> np.ndarray:
    """Basis of {x : x M = 0 over F_p}."""
    M = as_matrix(M)
    m, n = M.shape
    aug = np.concatenate([np.array([[int(x) % p for x in r] for r in M], dtype=np.int64).reshape(m, n),
                          np.eye(m, dtype=np.int64)], axis=1)
    R, piv = rref_mod_p(aug, p)
    return np.array([R[i, n:] for i, c in enumerate(piv) if c >= n], dtype=np.int64).reshape(-1, m)


def span_contains_mod_p(A, B, p: int) -> bool:
    ra = rank_mod_p(A, p)
    stacked = np.concatenate([as_matrix(A), as_matrix(B)]) if len(B) else as_matrix(A)
    return rank_mod_p(stacked, p) == ra
