"""Command-line front end: ``andreadakis {fox,johnson,trace,verify}``."""
from __future__ import annotations

import argparse
import json
import sys

from . import suites
from .filtration import GradedAutClass, andreadakis_depth, johnson, trace_algebraic, trace_fox
from .groupring import fox_derivative_word, jacobian
from .lie import derivation_dim
from .restricted import is_prime
from .words import WordSyntaxError, parse_endomorphism, parse_word

SUITES = ("chainrule", "dark", "stable-surjectivity", "satoh", "congruence", "p-concentration", "all")
MAX_N = 6
MAX_DEGREE = 6
# Der_k dimension above which a lattice run needs --stretch (n=5, k=3 is 750)
STRETCH_DIM = 500


class UsageError(Exception):
    pass


def _check(cond: bool, msg: str):
    if not cond:
        raise UsageError(msg)


def _check_n(n: int, lo: int = 1):
    _check(lo <= n <= MAX_N, f"--n must be in [{lo}, {MAX_N}]")


def _check_p(p: int | None):
    if p is not None:
        _check(is_prime(p), f"--p {p} is not prime")


def _parse_endo(text: str, n: int):
    try:
        return parse_endomorphism(text, n)
    except ValueError as e:  # wrong number of images
        raise UsageError(str(e))


# -- fox / johnson / trace ---------------------------------------------------------------------

def cmd_fox(args) -> int:
    _check_n(args.n)
    mod = args.mod or 0
    if args.endo:
        f = _parse_endo(args.endo, args.n)
        J = jacobian(f, mod)
        for j in range(args.n):
            for i in range(args.n):
                print(f"D[{j + 1},{i + 1}] = d x{j + 1}' / d x{i + 1} = {J.entries[j][i]}")
        return 0
    _check(args.word is not None, "give a WORD or --endo")
    w = parse_word(args.word, args.n)
    idx = [args.wrt] if args.wrt else range(1, args.n + 1)
    for i in idx:
        _check(1 <= i <= args.n, f"--wrt must be in [1, {args.n}]")
        print(f"d/dx{i} = {fox_derivative_word(w, i, mod)}")
    return 0


def _graded_class(args) -> GradedAutClass:
    _check_n(args.n)
    _check_p(args.p)
    mod = args.p or 0
    f = _parse_endo(args.endo, args.n)
    k = args.k
    if k is None:
        d = andreadakis_depth(f, MAX_DEGREE, mod)
        _check(d.depth >= 1, "endomorphism is not in IA (depth 0)")
        _check(not d.at_least, f"depth is at least {MAX_DEGREE}; pass --k explicitly")
        k = d.depth
    _check(1 <= k <= MAX_DEGREE, f"--k must be in [1, {MAX_DEGREE}]")
    try:
        return GradedAutClass.make(f, k, mod)
    except ValueError as e:
        raise UsageError(str(e))


def cmd_johnson(args) -> int:
    g = _graded_class(args)
    d = johnson(g, restricted=bool(args.p))
    print(f"depth {g.depth}")
    print(d)
    return 0


def cmd_trace(args) -> int:
    g = _graded_class(args)
    pr = bool(args.p)
    out = {}
    if args.pipeline in ("fox", "both"):
        out["fox"] = trace_fox(g, p_restricted=pr)
    if args.pipeline in ("algebraic", "both"):
        out["algebraic"] = trace_algebraic(g, p_restricted=pr, restricted=pr)
    print(f"depth {g.depth}")
    for name, t in out.items():
        print(f"{name}: {t}")
    if len(out) == 2 and out["fox"] != out["algebraic"]:
        print("pipelines disagree", file=sys.stderr)
        return 1
    return 0


# -- verify --------------------------------------------------------------------------------------

def _stable_params(n: int, k: int, stretch: bool):
    _check_n(n, 3)
    _check(1 <= k <= MAX_DEGREE, f"--k must be in [1, {MAX_DEGREE}]")
    _check(2 <= k <= n - 1, "--k must satisfy 2 <= k <= n-1 (k = n-1 is computed but not asserted)")
    if derivation_dim(n, k) > STRETCH_DIM:
        _check(stretch, f"(n, k) = ({n}, {k}) is a long run; pass --stretch to allow it")


def run_verify(args) -> list[suites.SuiteReport]:
    s, seed = args.suite, args.seed
    if s == "chainrule":
        n = args.n or 4
        _check(1 <= n <= 4, "--n must be in [1, 4] for chainrule")
        _check(args.pairs >= 1, "--pairs must be positive")
        return [suites.suite_chainrule(n, args.pairs, seed=seed)]
    if s == "dark":
        _check(1 <= args.alpha_max <= MAX_DEGREE, f"--alpha-max must be in [1, {MAX_DEGREE}]")
        _check(1 <= args.beta_max <= 4, "--beta-max must be in [1, 4]")
        if args.variant in ("commutator", "both"):
            _check(args.alpha_max <= 4 or args.variant == "both", "commutator variant needs --alpha-max <= 4")
        return [suites.suite_dark(args.variant, args.alpha_max, args.beta_max, seed)]
    if s in ("stable-surjectivity", "satoh"):
        n, k = args.n or 4, args.k or 2
        _stable_params(n, k, args.stretch)
        if s == "satoh":
            _check(k <= n - 2, "satoh needs n >= k+2")
            return [suites.suite_satoh(n, k, seed)]
        return [suites.suite_stable(n, k, seed, degree_one_n=3 if n == 3 else None,
                                    trace_n=n if k == 2 and n <= 4 else None)]
    if s == "congruence":
        n, q = args.n or 5, args.q
        _check(5 <= n <= MAX_N, "congruence needs 5 <= n <= 6")
        _check(q >= 3, "congruence needs q >= 3")
        _check(1 <= args.k_max <= 4, "--k-max must be in [1, 4]")
        return [suites.suite_congruence(n, q, args.k_max, args.samples, seed)]
    if s == "p-concentration":
        n, p = args.n or 4, args.p or 3
        _check_n(n, 4)
        _check_p(p)
        _check(p != 2, "p-concentration needs an odd prime")
        k_max = args.k_max if args.k_max_given else n - 2
        _check(2 <= k_max <= n - 2, "--k-max must be in [2, n-2]")
        return [suites.suite_p_concentration(n, p, k_max, args.samples, seed)]
    return suites.suite_all(seed, args.stretch)


def cmd_verify(args) -> int:
    reports = run_verify(args)
    for r in reports:
        print(r.table())
    if args.json:
        data = [r.to_json(args.timings) for r in reports] if len(reports) > 1 else reports[0].to_json(args.timings)
        text = json.dumps(data, sort_keys=True, indent=2, default=str) + "\n"
        if args.json == "-":
            sys.stderr.write(text)
        else:
            with open(args.json, "w") as fh:
                fh.write(text)
    if args.timings:
        for r in reports:
            for c in r.claims:
                print(f"{r.suite}/{c.id}: {c.seconds:.2f}s", file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


# -- parser -------------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="andreadakis", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fox", help="Fox derivatives of a word or the Jacobian of an endomorphism")
    f.add_argument("word", nargs="?", help="word such as 'x1 x2 x1^-1' or '[x1,x2]'")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--wrt", type=int, help="only the derivative in x_i")
    f.add_argument("--endo", help="images of x1..xn separated by ';'")
    f.add_argument("--mod", type=int, help="reduce coefficients modulo this integer")
    f.set_defaults(func=cmd_fox)

    for name, func, hlp in (("johnson", cmd_johnson, "Johnson image of an IA element"),
                            ("trace", cmd_trace, "Morita trace of an IA element")):
        c = sub.add_parser(name, help=hlp)
        c.add_argument("--n", type=int, required=True)
        c.add_argument("--endo", required=True, help="images of x1..xn separated by ';'")
        c.add_argument("--k", type=int, help="degree (defaults to the depth)")
        c.add_argument("--p", type=int, help="work in the mod-p restricted setting")
        if name == "trace":
            c.add_argument("--pipeline", choices=("fox", "algebraic", "both"), default="both")
        c.set_defaults(func=func)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--n", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--p", type=int)
    v.add_argument("--q", type=int, default=3)
    v.add_argument("--k-max", type=int, dest="k_max")
    v.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
    v.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stderr)")
    v.add_argument("--pairs", type=int, default=200)
    v.add_argument("--samples", type=int)
    v.add_argument("--variant", choices=("product", "commutator", "both"), default="both")
    v.add_argument("--alpha-max", type=int, dest="alpha_max")
    v.add_argument("--beta-max", type=int, default=4, dest="beta_max")
    v.add_argument("--stretch", action="store_true", help="allow the long lattice runs such as n=5, k=3")
    v.add_argument("--timings", action="store_true", help="record wall times (makes JSON non-reproducible)")
    v.set_defaults(func=cmd_verify)
    return ap


def _fill_defaults(args):
    if args.command != "verify":
        return
    if args.alpha_max is None:
        args.alpha_max = 4 if args.variant == "commutator" else 5
    args.k_max_given = args.k_max is not None
    if args.k_max is None:
        args.k_max = 3
    if args.samples is None:
        args.samples = 500 if args.suite == "congruence" else 100


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _fill_defaults(args)
    try:
        return args.func(args)
    except (UsageError, WordSyntaxError) as e:
        ap.error(str(e))


if __name__ == "__main__":
    sys.exit(main())
