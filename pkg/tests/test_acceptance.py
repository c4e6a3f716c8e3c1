"""Acceptance criteria 1-10.

Each test prints one ``CRITERION n: PASS|FAIL`` line (also when run as a
script: ``python tests/test_acceptance.py``).
"""
import random
import sys
import time

from andreadakis import suites
from andreadakis.filtration import degree_one_report, verify_stable_surjectivity
from andreadakis.tensor import TensorPoly, bryant_matrix_test, in_bracket_subspace

SEED = suites.DEFAULT_SEED


def _report(capsys, n: int, ok: bool, detail: str, seconds: float, budget: float):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  ({seconds:.1f}s, budget {budget:.0f}s)  {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    assert ok, line
    assert seconds < budget, f"criterion {n} over budget: {seconds:.1f}s"


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _claims(rep):
    return {c.id: c for c in rep.claims}


def test_criterion_1_chain_rule(capsys):
    rep, dt = _timed(lambda: suites.suite_chainrule(n=4, pairs=200, endos=0, seed=SEED))
    c = _claims(rep)["chain-rule"]
    _report(capsys, 1, c.status == "pass" and c.result["checked"] == 200, f"{c.result}", dt, 10)


def test_criterion_2_fundamental_formula(capsys):
    rep, dt = _timed(lambda: suites.suite_chainrule(n=4, pairs=0, endos=100, seed=SEED + 1))
    c = _claims(rep)["fundamental-formula"]
    _report(capsys, 2, c.status == "pass" and c.result["checked"] == 100, f"{c.result}", dt, 5)


def test_criterion_3_johnson_degree_one(capsys):
    r, dt = _timed(lambda: degree_one_report(3))
    ok = r["generators"] == 9 and r["rank"] == 9 and r["divisors"] == [1] * 9
    _report(capsys, 3, ok, f"rank {r['rank']}, divisors {r['divisors']}", dt, 5)


def test_criterion_4_trace_vanishing(capsys):
    (total, zero, agree, bad), dt = _timed(lambda: suites._trace_pairs(4))
    ok = total == 24 * 23 // 2 and zero == total and agree == total
    _report(capsys, 4, ok, f"{total} commutator pairs, zero {zero}, pipelines agree {agree}", dt, 60)


def test_criterion_5_stable_surjectivity(capsys):
    def run():
        return [verify_stable_surjectivity(4, 2), verify_stable_surjectivity(5, 2),
                verify_stable_surjectivity(5, 3)]
    rs, dt = _timed(run)
    expect = {(4, 2): 10, (5, 2): 15, (5, 3): 45}
    ok = all(r.lattice_equal and not r.coker_torsion and r.coker_free_rank == expect[r.n, r.k]
             and r.coker_free_rank == r.necklaces for r in rs)
    detail = ", ".join(f"({r.n},{r.k}) coker Z^{r.coker_free_rank}" for r in rs)
    _report(capsys, 5, ok, detail, dt, 300 + 3600)


def test_criterion_6_satoh(capsys):
    rs, dt = _timed(lambda: [suites.suite_satoh(4, 2), suites.suite_satoh(5, 2)])
    ok = all(r.passed for r in rs)
    detail = "; ".join(f"n={r.params['n']}: " + ", ".join(f"{c.id} {c.status}" for c in r.claims) for r in rs)
    _report(capsys, 6, ok, detail, dt, 300)


def test_criterion_7_congruence(capsys):
    rep, dt = _timed(lambda: suites.suite_congruence(5, 3, 3, samples=500, seed=SEED))
    c = _claims(rep)
    lie = c["lie-ring"].result
    ok = rep.passed and all(lie[str(k)]["span_rank"] == 24 for k in (1, 2, 3))
    detail = f"ranks {[lie[str(k)]['span_rank'] for k in (1, 2, 3)]}, det/tr {c['det-tr-square'].result}"
    _report(capsys, 7, ok, detail, dt, 120)


def test_criterion_8_dark(capsys):
    rep, dt = _timed(lambda: suites.suite_dark("both", alpha_max=5, beta_max=4, seed=SEED))
    c = _claims(rep)
    ok = rep.passed and c["dark-product"].result["identities"] == 6 and c["dark-commutator"].result["identities"] == 16
    _report(capsys, 8, ok, f"product {c['dark-product'].status}, commutator {c['dark-commutator'].status}", dt, 30)


def test_criterion_9_p_restricted(capsys):
    reps, dt = _timed(lambda: [suites.suite_p_concentration(4, p, 2, samples=100, seed=SEED) for p in (3, 5)])
    ok = all(r.passed for r in reps)
    ok &= all(_claims(r)["depth-p-restriction"].result["samples"] == 100 for r in reps)
    gaps = {r.params["p"]: [(d["k"], d["gap"], d["bound"]) for d in _claims(r)["concentration"].result]
            for r in reps}
    _report(capsys, 9, ok, f"(k, gap, bound) by p: {gaps}", dt, 300)


# -- criterion 10 ------------------------------------------------------------------------------------


def _random_member(n, k, mod, rng):
    t = TensorPoly(n, k, {}, mod)
    for _ in range(rng.randint(1, 3)):
        a = rng.randint(1, k - 1) if k > 1 else 0
        u = tuple(rng.randint(1, n) for _ in range(a))
        v = tuple(rng.randint(1, n) for _ in range(k - a))
        c = rng.randint(1, 5)
        t = t + TensorPoly.monomial(n, u + v, c, mod, k) - TensorPoly.monomial(n, v + u, c, mod, k)
    if mod and k % mod == 0 and rng.random() < 0.5:
        w = tuple(rng.randint(1, n) for _ in range(k // mod))
        t = t + TensorPoly.monomial(n, w * mod, rng.randint(1, mod - 1), mod, k)
    return t


def _random_tensor(n, k, mod, rng):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        m = tuple(rng.randint(1, n) for _ in range(k))
        terms[m] = rng.randint(-5, 5)
    return TensorPoly(n, k, terms, mod)


def cross_oracle(mod: int, count: int = 500, seed: int = SEED):
    rng = random.Random(seed + mod)
    members = refuted = nonmembers = false_alarms = 0
    flag = bool(mod)
    for i in range(count):
        n, k = rng.randint(2, 3), rng.randint(1, 4)
        t = _random_member(n, k, mod, rng) if i % 2 == 0 else _random_tensor(n, k, mod, rng)
        member = in_bracket_subspace(t, p_restricted=flag)
        passes = bryant_matrix_test(t, samples=50, seed=i)
        if member:
            members += 1
            false_alarms += not passes
        else:
            nonmembers += 1
            refuted += not passes
    return {"members": members, "nonmembers": nonmembers, "false_alarms": false_alarms,
            "refuted": refuted, "refuted_share": refuted / nonmembers if nonmembers else 1.0}


def test_criterion_10_cross_oracle(capsys):
    res, dt = _timed(lambda: {name: cross_oracle(mod) for name, mod in (("Z", 0), ("F2", 2), ("F3", 3))})
    ok = all(r["false_alarms"] == 0 and r["refuted_share"] >= 0.95 and r["members"] > 100
             and r["nonmembers"] > 100 for r in res.values())
    detail = ", ".join(f"{k}: {r['members']} members, refuted {r['refuted']}/{r['nonmembers']}"
                       for k, r in res.items())
    _report(capsys, 10, ok, detail, dt, 60)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items(), key=lambda kv: int(kv[0].split("_")[2]) if kv[0].startswith("test_criterion_") else 0):
        if name.startswith("test_criterion_"):
            try:
                fn(None)
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
