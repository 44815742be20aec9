"""Command-line front end.

Exit codes: 0 every check passed, 1 a check came out false, 2 bad
configuration, 3 a size budget was exceeded.
"""

from __future__ import annotations

import argparse
import os
import re
import sys

from . import bch_catalog as bch
from . import characters as ch
from .reports import make_report, timed, write_report
from .truncated_groups import DEFAULT_BUDGET, BudgetExceeded, GroupContext

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_SEED = 20240601


class ConfigError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigError("expected comma-separated integers, got %r" % text) from None


def _a_flags(argv) -> list[int]:
    found = set()
    for tok in argv:
        m = re.match(r"--A(\d+)(=|$)", tok)
        if m:
            found.add(int(m.group(1)))
    return sorted(found)


def _context(args) -> GroupContext:
    try:
        return GroupContext(args.n, args.q, args.r, args.budget or DEFAULT_BUDGET)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _spec(args) -> ch.CharacterSpec:
    ctx = _context(args)
    A = []
    for j in range(1, ctx.r):
        raw = getattr(args, "A%d" % j, None)
        if raw is None:
            raise ConfigError("missing --A%d" % j)
        A.append(_int_list(raw))
    extra = [k for k in range(ctx.r, 100) if getattr(args, "A%d" % k, None) is not None]
    if extra:
        raise ConfigError("--A%d given but r = %d" % (extra[0], ctx.r))
    chi = _int_list(args.chi) if args.chi else None
    try:
        spec = ch.CharacterSpec.build(ctx, chi, A)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not spec.is_generic() and not args.allow_nongeneric:
        raise ConfigError(
            "A_%d = diag%s is not regular semisimple; pass --allow-nongeneric to run anyway" % (ctx.r - 1, spec.A[-1])
        )
    return spec


def _cache_dir(args):
    return args.cache_dir or os.environ.get("TGC_CACHE_DIR") or None


def cmd_verify_lemmas(args) -> dict:
    if args.max_r < 2:
        raise ConfigError("--max-r must be >= 2")
    if args.max_r > bch.DEFAULT_MAX_R and args.budget is None:
        raise ConfigError("--max-r above %d needs an explicit --budget" % bch.DEFAULT_MAX_R)
    budget = args.budget or bch.DEFAULT_SYMBOLIC_BUDGET
    grid = bch.lemma_grid(args.max_r)
    if args.i is not None:
        grid = [g for g in grid if g[1].get("i") == args.i]
    if args.j is not None:
        grid = [g for g in grid if g[1].get("j") == args.j]
    timings = {}
    with timed(timings, "lemmas"):
        reports = [bch.run_lemma(lemma, params, budget) for lemma, params in grid]
    with timed(timings, "u_contract"):
        contracts = [bch.check_u_contract(j) for j in range(1, args.max_r)]
    cache_dir = _cache_dir(args)
    if cache_dir:
        cache = bch.PolynomialCache(cache_dir)
        with timed(timings, "cache"):
            for j in range(1, args.max_r):
                bch.cached_u(j, cache)
    failed = [rep.to_json() for rep in reports + contracts if not rep.passed]
    return make_report(
        "lemmas",
        {"max_r": args.max_r, "i": args.i, "j": args.j, "budget": budget},
        failed,
        timings,
        reports=[rep.to_json() for rep in reports],
        u_contract=[rep.to_json() for rep in contracts],
        cache_dir=cache_dir,
    )


def cmd_verify_theorem(args) -> dict:
    return ch.verify_main_theorem(_spec(args), allow_nongeneric=args.allow_nongeneric)


def cmd_verify_stages(args) -> dict:
    return ch.verify_stage_chain(_spec(args), allow_nongeneric=args.allow_nongeneric)


def cmd_exp_sum(args) -> dict:
    try:
        GroupContext(1, args.p, 2)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.N < 0:
        raise ConfigError("--N must be >= 0")
    return ch.exp_sum_report(args.p, args.N)


def cmd_cross_validate(args) -> dict:
    ctx = _context(args)
    if args.trials < 1:
        raise ConfigError("--trials must be positive")
    return ch.cross_validate_u(ctx, args.trials, args.seed)


def _group_flags(sp, q=None, r=None):
    sp.add_argument("--q", type=int, default=q, required=q is None)
    sp.add_argument("--r", type=int, default=r, required=r is None)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--budget", type=int)


def build_parser(a_indices=()) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tgc", description="Exact verifiers for truncated-group characters.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("verify-lemmas", help="symbolic BCH lemma grid")
    sp.add_argument("--max-r", type=int, default=bch.DEFAULT_MAX_R)
    sp.add_argument("--i", type=int)
    sp.add_argument("--j", type=int)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--cache-dir")
    sp.set_defaults(func=cmd_verify_lemmas)

    for name, func, helptext in (
        ("verify-theorem", cmd_verify_theorem, "compare the two induced characters"),
        ("verify-stages", cmd_verify_stages, "compare fiber sums along the stage chain"),
    ):
        sp = sub.add_parser(name, help=helptext)
        _group_flags(sp)
        sp.add_argument("--chi")
        sp.add_argument("--allow-nongeneric", action="store_true")
        for k in sorted(set(a_indices) | set(range(1, 4))):
            sp.add_argument("--A%d" % k, dest="A%d" % k)
        sp.set_defaults(func=func)

    sp = sub.add_parser("exp-sum", help="affine character sums over F_p^N")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, default=2)
    sp.set_defaults(func=cmd_exp_sum)

    sp = sub.add_parser("cross-validate", help="symbolic u_j against matrix coordinates")
    _group_flags(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.set_defaults(func=cmd_cross_validate)

    for sp in sub.choices.values():
        sp.add_argument("--report", help="write the JSON report here")
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser(_a_flags(argv)).parse_args(argv)
    try:
        doc = args.func(args)
    except (ConfigError, ch.NonGeneric) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except (BudgetExceeded, bch.BudgetExceeded) as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    write_report(doc, args.report)
    n_bad = len(doc["counterexamples"])
    print("%s: %s%s" % (doc["check"], doc["status"], " (%d counterexamples)" % n_bad if n_bad else ""))
    return EXIT_OK if doc["status"] == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
