"""Congruence filtration on GL_n(Z): depths, graded symbols, commutator witnesses."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import lattice as zl


def ident(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64).astype(object)


def mat(rows) -> np.ndarray:
    return np.array([[int(x) for x in r] for r in rows], dtype=object)


def shear(n: int, a: int, b: int, t: int) -> np.ndarray:
    """Id + t e_ab (1-based indices)."""
    M = ident(n)
    M[a - 1, b - 1] += t
    return M


def unit(n: int, a: int, b: int) -> np.ndarray:
    E = np.zeros((n, n), dtype=object)
    E[a - 1, b - 1] = 1
    return E


def int_inverse(M: np.ndarray) -> np.ndarray:
    """Exact inverse of an integer matrix of determinant +-1."""
    n = M.shape[0]
    A = [[Fraction(int(M[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        r = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[r] = A[r], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            x = A[i][n + j]
            if x.denominator != 1:
                raise ValueError("matrix is not invertible over Z")
            out[i, j] = int(x)
    return out


def group_commutator(A: np.ndarray, B: np.ndarray, Ainv=None, Binv=None) -> np.ndarray:
    Ainv = int_inverse(A) if Ainv is None else Ainv
    Binv = int_inverse(B) if Binv is None else Binv
    return A.dot(B).dot(Ainv).dot(Binv)


@dataclass(frozen=True)
class CongruenceMatrix:
    n: int
    q: int
    M: tuple  # rows

    @classmethod
    def make(cls, M, q: int) -> "CongruenceMatrix":
        A = mat(M)
        D = A - ident(A.shape[0])
        if any(int(x) % q for x in D.ravel()):
            raise ValueError("matrix is not congruent to Id mod q")
        return cls(A.shape[0], q, tuple(tuple(int(x) for x in r) for r in A))

    @property
    def array(self) -> np.ndarray:
        return mat(self.M)

    def det(self) -> int:
        return zl.determinant(self.M)


@dataclass(frozen=True)
class GradedSymbol:
    degree: int
    q: int
    entries: tuple

    @property
    def array(self) -> np.ndarray:
        return mat(self.entries)

    def trace(self) -> int:
        return sum(self.entries[i][i] for i in range(len(self.entries))) % self.q

    def flat(self) -> list[int]:
        return [x for r in self.entries for x in r]


INF = math.inf


def depth(M, q: int):
    """Largest k with M = Id mod q^k (math.inf for the identity)."""
    A = mat(M) if not isinstance(M, np.ndarray) else M
    D = [abs(int(x)) for x in (A - ident(A.shape[0])).ravel() if int(x)]
    if not D:
        return INF
    g = 0
    for x in D:
        g = math.gcd(g, x)
    k = 0
    while g % q == 0:
        g //= q
        k += 1
    return k


def symbol(M, q: int) -> GradedSymbol | None:
    A = mat(M) if not isinstance(M, np.ndarray) else M
    k = depth(A, q)
    if k == INF:
        return None
    D = (A - ident(A.shape[0])) // (q ** k)
    return GradedSymbol(k, q, tuple(tuple(int(x) % q for x in r) for r in D))


def _mod(A: np.ndarray, q: int) -> np.ndarray:
    return np.vectorize(lambda x: int(x) % q, otypes=[object])(A)


@dataclass
class BracketReport:
    depth_a: float
    depth_b: float
    depth_c: float
    inequality: bool
    symbol_match: bool

    @property
    def passed(self) -> bool:
        return self.inequality and self.symbol_match


def verify_bracket_compat(A, B, q: int) -> BracketReport:
    """depth([A,B]) >= depth A + depth B, and the leading term is the bracket of symbols."""
    A, B = mat(A), mat(B)
    C = group_commutator(A, B)
    a, b, c = depth(A, q), depth(B, q), depth(C, q)
    if a == INF or b == INF:
        return BracketReport(a, b, c, c == INF, True)
    ineq = c >= a + b
    sa, sb = (A - ident(len(A))) // q ** a, (B - ident(len(B))) // q ** b
    lead = (C - ident(len(C))) // q ** (a + b) if ineq else None
    br = _mod(sa.dot(sb) - sb.dot(sa), q)
    match = ineq and bool(np.all(_mod(lead, q) == br))
    return BracketReport(a, b, c, ineq, match)


@dataclass
class DetTrReport:
    depth: float
    congruence: bool
    sl_consistent: bool | None  # None when det is not +-1

    @property
    def passed(self) -> bool:
        return self.congruence and self.sl_consistent is not False


def verify_det_tr_square(M, q: int) -> DetTrReport:
    """det(M) = 1 + tr(M - Id) mod q^(2j); for det +-1 and q >= 3, det = 1 iff traceless symbol."""
    A = mat(M)
    j = depth(A, q)
    if j == INF:
        return DetTrReport(j, True, True)
    if j < 1:
        raise ValueError("matrix is not congruent to Id mod q")
    d = zl.determinant(A)
    tr = sum(int(A[i, i]) - 1 for i in range(len(A)))
    ok = (d - 1 - tr) % q ** (2 * j) == 0
    sl = None
    if abs(d) == 1 and q >= 3:
        s = symbol(A, q)
        sl = (d == 1) == (s.trace() == 0)
    return DetTrReport(j, ok, sl)


# -- witnesses --------------------------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    """Shear atom E(a,b,t) or a group commutator of two expressions."""

    kind: str  # "E" or "comm"
    a: int = 0
    b: int = 0
    t: int = 0
    left: "Expr | None" = None
    right: "Expr | None" = None

    def __str__(self):
        if self.kind == "E":
            return f"E({self.a},{self.b},{self.t})"
        return f"(comm {self.left} {self.right})"

    def nesting(self) -> int:
        if self.kind == "E":
            return 1
        return self.left.nesting() + self.right.nesting()

    def evaluate(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """(value, inverse) by exact multiplication."""
        if self.kind == "E":
            return shear(n, self.a, self.b, self.t), shear(n, self.a, self.b, -self.t)
        A, Ai = self.left.evaluate(n)
        B, Bi = self.right.evaluate(n)
        return A.dot(B).dot(Ai).dot(Bi), B.dot(A).dot(Bi).dot(Ai)


def E(a: int, b: int, t: int) -> Expr:
    return Expr("E", a, b, t)


def comm(x: Expr, y: Expr) -> Expr:
    return Expr("comm", left=x, right=y)


def parse_expr(text: str) -> Expr:
    import re
    toks = re.findall(r"\(comm|E\(\s*-?\d+\s*,\s*-?\d+\s*,\s*-?\d+\s*\)|\)", text)
    pos = 0

    def rec():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        if tok == "(comm":
            x = rec()
            y = rec()
            if toks[pos] != ")":
                raise ValueError("expected )")
            pos += 1
            return comm(x, y)
        if tok.startswith("E("):
            a, b, t = (int(s) for s in tok[2:-1].split(","))
            return E(a, b, t)
        raise ValueError(f"unexpected token {tok}")

    out = rec()
    if pos != len(toks):
        raise ValueError("trailing input")
    return out


def _aux(n: int, avoid) -> int:
    return next(g for g in range(1, n + 1) if g not in avoid)


def _witness(n: int, q: int, k: int, a: int, b: int, t: int) -> Expr:
    if k == 1:
        return E(a, b, t)
    g = _aux(n, (a, b))
    return comm(_witness(n, q, k - 1, a, g, t // q), E(g, b, q))


@dataclass
class Witness:
    expr: Expr
    n: int
    target: np.ndarray
    verified: bool
    commutator_depth: int

    @property
    def sexpr(self) -> str:
        return str(self.expr)


def elementary_witness(n: int, q: int, k: int, a: int, b: int, t: int) -> Witness:
    """A nesting-depth-k commutator expression equal to Id + t e_ab."""
    if n < 5:
        raise ValueError("elementary witnesses need n >= 5")
    if a == b or not (1 <= a <= n and 1 <= b <= n):
        raise ValueError("need distinct indices in 1..n")
    if k < 1 or t % q ** k:
        raise ValueError("t must be a multiple of q^k")
    ex = _witness(n, q, k, a, b, t)
    val, _ = ex.evaluate(n)
    target = shear(n, a, b, t)
    return Witness(ex, n, target, bool(np.all(val == target)), _comm_depth(ex))


def _comm_depth(ex: Expr) -> int:
    """Structural lower-central-series degree: atoms 1, commutators add."""
    return ex.nesting()


def diagonal_witness(n: int, q: int, k: int, a: int) -> tuple[Expr, np.ndarray]:
    """An element of depth k whose symbol is e_11 - e_aa (k >= 2) or lifts it with shears (k = 1)."""
    if k == 1:
        M = ident(n)
        M[0, 0] += q
        M[0, a - 1] += q
        M[a - 1, 0] -= q
        M[a - 1, a - 1] -= q
        return None, M
    ex = comm(_witness(n, q, k - 1, 1, a, q ** (k - 1)), E(a, 1, q))
    return ex, ex.evaluate(n)[0]


def sl_lattice(n: int) -> np.ndarray:
    rows = []
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a != b:
                rows.append(unit(n, a, b).ravel())
    for a in range(1, n):
        rows.append((unit(n, a, a) - unit(n, n, n)).ravel())
    return np.array(rows, dtype=object).astype(np.int64)


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q ** 0.5) + 1))


def span_check(symbols: list[list[int]], n: int, q: int) -> tuple[bool, int | None]:
    """Do the symbols span sl_n(Z/q)?  Returns (ok, F_q-rank or None)."""
    S = np.array(symbols, dtype=np.int64).reshape(-1, n * n)
    if _is_prime(q):
        r = zl.rank_mod_p(S, q)
        return r == n * n - 1 and zl.span_contains_mod_p(sl_lattice(n), S, q), r
    qI = q * np.eye(n * n, dtype=np.int64)
    lhs = np.concatenate([S, qI])
    rhs = np.concatenate([sl_lattice(n), qI])
    return zl.lattice_equal(lhs, rhs), None


def random_depth_one(n: int, q: int, rng: random.Random, length: int = 4) -> np.ndarray:
    """Product of random shears Id + q s e_ab and diagonal lifts (determinant 1)."""
    M = ident(n)
    for _ in range(length):
        if rng.random() < 0.75:
            a, b = rng.sample(range(1, n + 1), 2)
            M = M.dot(shear(n, a, b, q * rng.choice([-2, -1, 1, 2])))
        else:
            a = rng.randint(2, n)
            _, D = diagonal_witness(n, q, 1, a)
            M = M.dot(D)
    return M


@dataclass
class LieRingReport:
    n: int
    q: int
    degrees: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(d["span_ok"] and d["witnesses_ok"] and d["samples_ok"] for d in self.degrees.values())


def verify_lie_ring(n: int, q: int, k_max: int, samples: int = 20, seed: int = 0) -> LieRingReport:
    if n < 5 or q < 3:
        raise ValueError("need n >= 5 and q >= 3")
    rng = random.Random(seed)
    rep = LieRingReport(n, q)
    for k in range(1, k_max + 1):
        syms, ok_w, count = [], True, 0
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                if a == b:
                    continue
                w = elementary_witness(n, q, k, a, b, q ** k)
                count += 1
                ok_w &= w.verified and w.commutator_depth == k and depth(w.target, q) == k
                syms.append(symbol(w.target, q).flat())
        for a in range(2, n + 1):
            ex, D = diagonal_witness(n, q, k, a)
            if ex is not None:
                ok_w &= ex.nesting() == k
            s = symbol(D, q)
            ok_w &= s.degree == k
            syms.append(s.flat())
        span_ok, r = span_check(syms, n, q)
        # random elements of the k-th term of the lower central series
        samp_ok = True
        for _ in range(samples):
            M = random_depth_one(n, q, rng)
            for _ in range(k - 1):
                M = group_commutator(M, random_depth_one(n, q, rng))
            samp_ok &= depth(M, q) >= k
        rep.degrees[k] = {"span_rank": r, "span_ok": span_ok, "witnesses": count,
                          "witnesses_ok": bool(ok_w), "samples": samples, "samples_ok": bool(samp_ok)}
    return rep
