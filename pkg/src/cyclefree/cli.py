"""Command-line entry point.

Exit codes: 0 all checks passed, 1 a checked property was violated,
2 usage or input error, 3 refused for exceeding a budget.
"""

from __future__ import annotations

import argparse
import sys

from . import birkhoff, cycles, labeling, repcheck
from .errors import BudgetExceeded


class UsageError(Exception):
    pass


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _write(text: str, path: str | None, out):
    if path in (None, "-"):
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _load_labeling(path):
    try:
        return labeling.Labeling.decode(_read(path))
    except ValueError as e:
        raise UsageError(f"cannot read labeling: {e}") from None


def _load_permset(path):
    try:
        return birkhoff.PermSet.decode(_read(path))
    except ValueError as e:
        raise UsageError(f"cannot read permutation set: {e}") from None


def _partition_str(p) -> str:
    return ",".join(map(str, p))


# subcommands ------------------------------------------------------------------

def cmd_construct(args, out):
    _write(labeling.construct_recursive(args.n).encode(), args.out, out)
    return 0


def cmd_random_label(args, out):
    _write(labeling.construct_random(args.n, args.d, args.q, args.seed).encode(), args.out, out)
    return 0


def cmd_verify(args, out):
    lab = _load_labeling(args.inp)
    if args.samples is not None:
        if args.seed is None:
            raise UsageError("--samples needs --seed")
        rep = labeling.verify_cycle_free(lab, "sampled", args.samples, args.seed)
    else:
        rep = labeling.verify_cycle_free(lab, "exhaustive", budget=args.budget)
    out.write(rep.to_text() + "\n")
    return 0 if rep.passed else 1


def cmd_cycles(args, out):
    counts = cycles.count_by_length(args.n)
    if not args.count_only:
        for c in cycles.enumerate_simple_cycles(args.n):
            out.write(c.to_text() + "\n")
    for k, c in counts.items():
        out.write(f"count[{k}]={c}\n")
    out.write(f"count={sum(counts.values())}\n")
    return 0


def cmd_reduce(args, out):
    lab = _load_labeling(args.inp)
    h, A = birkhoff.best_fiber(lab)
    status = 0
    if args.check:
        fibs = birkhoff.fibers(lab)
        bad = sum(1 for F in fibs.values() if not birkhoff.verify_independent(F).passed)
        sys.stderr.write(f"fibers={len(fibs)} dependent={bad}\n")
        status = 1 if bad else 0
    if args.out not in (None, "-"):
        out.write(f"h={h} size={len(A)}\n")
    else:
        sys.stderr.write(f"h={h} size={len(A)}\n")
    _write(A.encode(), args.out, out)
    return status


def cmd_indep_build(args, out):
    A = birkhoff.appendix_enumerate(birkhoff.BlockSystem.for_n(args.n))
    _write(A.encode(), args.out, out)
    return 0


def cmd_indep_verify(args, out):
    A = _load_permset(args.inp)
    if args.samples is not None:
        if args.seed is None:
            raise UsageError("--samples needs --seed")
        rep = birkhoff.verify_independent(A, "sampled", args.samples, args.seed)
    else:
        rep = birkhoff.verify_independent(A, budget=args.budget)
    out.write(rep.to_text() + "\n")
    return 0 if rep.passed else 1


def cmd_indep_sample(args, out):
    import random

    sys_ = birkhoff.BlockSystem.for_n(args.n)
    rng = random.Random(args.seed)
    perms = [birkhoff.appendix_sample(sys_, rng) for _ in range(args.count)]
    _write(birkhoff.PermSet.of(perms, args.n).encode(), args.out, out)
    return 0


def cmd_indep_member(args, out):
    A = _load_permset(args.inp)
    sys_ = birkhoff.BlockSystem.for_n(A.n)
    inside = sum(1 for p in A if birkhoff.appendix_member(p, sys_))
    out.write(f"members={inside} size={len(A)}\n")
    return 0 if inside == len(A) else 1


def cmd_mind(args, out):
    out.write(f"d={labeling.search_min_d(args.n)}\n")
    return 0


def cmd_chars(args, out):
    n = args.n
    if args.table:
        ps, table = repcheck.character_table(n)
        out.write("classes " + " ".join(_partition_str(mu) for mu in ps) + "\n")
        for lam, row in zip(ps, table):
            out.write(_partition_str(lam) + " " + " ".join(map(str, row)) + "\n")
    else:
        for m in range(n):
            out.write(f"chi[h_{m}]({n})={repcheck.mn_character(repcheck.hook(n, m), (n,))}\n")
    return 0


def cmd_analyze(args, out):
    A = _load_permset(args.inp)
    lines, ok = repcheck.analyze(A, args.k_max)
    out.write("\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_series(args, out):
    out.write(f"series={repcheck.series_bound(args.c, args.n, args.terms):.10f}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclefree", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", help="recursive d = 3n labeling")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("random-label", help="uniformly random labeling")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_random_label)

    s = sub.add_parser("verify", help="check a labeling is simple cycle free")
    s.add_argument("--in", dest="inp")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--budget", type=int, default=labeling.DEFAULT_CYCLE_BUDGET)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cycles", help="enumerate or count simple cycles of K_{n,n}")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_cycles)

    s = sub.add_parser("reduce", help="largest fiber of the matching-sum map")
    s.add_argument("--in", dest="inp")
    s.add_argument("--out")
    s.add_argument("--check", action="store_true", help="verify every fiber is independent")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("indep", help="independent sets in the Birkhoff graph")
    isub = s.add_subparsers(dest="indep_command", required=True)
    t = isub.add_parser("build", help="the dyadic block construction, n <= 8")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--out")
    t.set_defaults(func=cmd_indep_build)
    t = isub.add_parser("verify", help="pairwise independence check")
    t.add_argument("--in", dest="inp")
    t.add_argument("--samples", type=int)
    t.add_argument("--seed", type=int)
    t.add_argument("--budget", type=int, default=birkhoff.PAIR_BUDGET)
    t.set_defaults(func=cmd_indep_verify)
    t = isub.add_parser("sample", help="uniform samples from the block construction")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--count", type=int, required=True)
    t.add_argument("--seed", type=int, required=True)
    t.add_argument("--out")
    t.set_defaults(func=cmd_indep_sample)
    t = isub.add_parser("member", help="check membership in the block construction")
    t.add_argument("--in", dest="inp")
    t.set_defaults(func=cmd_indep_member)

    s = sub.add_parser("mind", help="smallest cycle-free d by exhaustive search")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_mind)

    s = sub.add_parser("chars", help="hook characters on the n-cycle, or the full table")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--table", action="store_true")
    s.set_defaults(func=cmd_chars)

    s = sub.add_parser("analyze", help="character report for a permutation set")
    s.add_argument("--in", dest="inp")
    s.add_argument("--k-max", type=int, default=4)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("series", help="evaluate the truncated series lower bound")
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--terms", type=int, required=True)
    s.set_defaults(func=cmd_series)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except BudgetExceeded as e:
        sys.stderr.write(f"refused: {e}\n")
        return 3
    except (UsageError, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
