"""Command-line front end: check, reduce, gen, verify.

Human-readable progress goes to stderr; data (terms, traces, JSON) goes
to stdout or the requested file, so output can be piped.  Exit codes:
0 all good, 1 a verification or property failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import checks
from .contexts import show_path
from . import formulas as fm
from . import gen
from . import graphs
from . import rules
from . import strategy
from . import surface
from . import terms as tm
from . import typecheck
from .report import Report

__all__ = ["main"]


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        _say(f"cannot read {path}: {exc}")
        raise SystemExit(2)


def _load(path: str) -> tuple[Optional[dict[tm.Var, fm.Formula]], tm.Term]:
    try:
        return surface.read_term_file(_read_file(path))
    except surface.ParseError as exc:
        _say(f"{path}: {exc}")
        raise SystemExit(2)


# ---------------------------------------------------------------- check

def cmd_check(args: argparse.Namespace) -> int:
    file_ctx, t = _load(args.file)
    ctx = file_ctx
    if args.ctx is not None:
        try:
            ctx = surface.parse_typing_context(args.ctx)
        except surface.ParseError as exc:
            _say(f"--ctx: {exc}")
            return 2
    explicit_ctx = ctx is not None
    out: dict[str, object] = {"file": args.file, "size": tm.size(t)}
    problem = tm.check_proper(t)
    out["proper"] = problem is None
    if problem is not None:
        out["properness_error"] = problem
    clashes = typecheck.find_clashes(t)
    out["clashes"] = [f"cut at {show_path(p)}" for p in clashes]
    typed: Optional[str] = None
    type_error: Optional[str] = None
    try:
        typed = fm.show(typecheck.synth(ctx if ctx is not None else {}, t))
    except typecheck.TypingError as exc:
        type_error = str(exc)
    if args.json:
        if typed is not None:
            out["type"] = typed
        if type_error is not None:
            out["type_error"] = type_error
        print(json.dumps(out, indent=2))
    else:
        if problem is not None:
            _say(f"not proper: {problem}")
        elif clashes:
            _say(f"proper, {len(clashes)} clash(es): " + "; ".join(out["clashes"]))  # type: ignore[arg-type]
        if typed is not None:
            print(typed)
        elif problem is None and not clashes:
            _say(f"proper, untypable: {type_error}")
    # an untypable term only fails the check when a context was supplied
    ok = problem is None and not clashes and (typed is not None or not explicit_ctx)
    return 0 if ok else 1


# --------------------------------------------------------------- reduce

_STRATEGIES = {
    "good": strategy.Strategy.GOOD,
    "leftmost": strategy.Strategy.LEFTMOST_ANY,
    "random": strategy.Strategy.RANDOM_ANY,
    "small": strategy.Strategy.SMALL_STEP,
}


def cmd_reduce(args: argparse.Namespace) -> int:
    _, t = _load(args.file)
    problem = tm.check_proper(t)
    if problem is not None:
        _say(f"not proper: {problem}")
        return 2
    trace = strategy.normalize(
        t, _STRATEGIES[args.strategy], max_steps=args.max_steps, seed=args.seed
    )
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(trace.to_jsonl())
        _say(f"trace written to {args.trace}")
    by_kind: dict[str, int] = {}
    for rec in trace.steps:
        by_kind[rec.kind.value] = by_kind.get(rec.kind.value, 0) + 1
    dup = max((rec.duplicated_value[0] for rec in trace.steps if rec.duplicated_value), default=0)
    _say(f"verdict: {trace.verdict.value} after {len(trace.steps)} step(s)")
    if by_kind:
        _say("steps by kind: " + ", ".join(f"{k}={n}" for k, n in sorted(by_kind.items())))
    _say(
        f"size {tm.size(t)} -> {tm.size(trace.final)}, "
        f"max duplicated value {dup}, cut-free: {rules.is_cut_free(trace.final)}"
    )
    if args.stats:
        meas = [str(rec.measure_after) for rec in trace.steps[:40]]
        _say("measure trajectory: " + " ".join(meas) + (" ..." if len(trace.steps) > 40 else ""))
        rep = strategy.subterm_report(trace)
        _say(
            f"subterm accounting: initial {rep.initial_size}, "
            f"max bad value {rep.max_bad_value_size}, "
            f"max duplicated {rep.max_duplicated_size}, "
            f"violations {len(rep.violations)}"
        )
    print(surface.show_term(trace.final))
    return 0 if trace.verdict is not strategy.Verdict.STEP_LIMIT else 1


# ------------------------------------------------------------------ gen

def _emit_term(
    term: tm.Term, ctx: Optional[dict[tm.Var, fm.Formula]], out: Optional[str]
) -> None:
    lines = []
    if ctx:
        lines.append(f"# ctx: {surface.show_typing_context(ctx)}")
    lines.append(surface.show_term(term))
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _say(f"wrote {out}")
    else:
        sys.stdout.write(text)


def cmd_gen(args: argparse.Namespace) -> int:
    if args.family == "spindle":
        try:
            ctx, t = gen.gen_spindle(args.n)
        except ValueError as exc:
            _say(str(exc))
            return 2
        _emit_term(t, ctx, args.out)
    elif args.family == "omega":
        _emit_term(gen.gen_omega(), None, args.out)
    else:
        if args.typed:
            ctx, t = gen.gen_typed(args.seed, args.size)
            _emit_term(t, ctx, args.out)
        else:
            _emit_term(gen.gen_untyped_proper(args.seed, args.size), None, args.out)
    return 0


# --------------------------------------------------------------- verify

def _dump_counterexample(suite: str, idx: int, term: tm.Term, report: Report) -> str:
    path = f"counterexample-{suite}-{idx}.term"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {report.label}\n")
        for d in report.details:
            fh.write(f"# {d}\n")
        fh.write(surface.show_term(term) + "\n")
    return path


def cmd_verify(args: argparse.Namespace) -> int:
    suite = args.suite
    failures = 0
    notes = 0
    for i in range(args.count):
        seed = args.seed + i
        if args.gen == "typed":
            ctx, t = gen.gen_typed(seed, args.size)
        else:
            ctx, t = {}, gen.gen_untyped_proper(seed, args.size)
        rep: Optional[Report] = None
        if suite == "diamond":
            rep = checks.check_diamond(t)
        elif suite == "confluence":
            rep = checks.check_confluence(t)
        elif suite == "fullness":
            rep = checks.check_fullness(t)
        elif suite == "full-composition":
            rep = checks.check_full_composition(t)
        elif suite == "measure":
            rep = checks.check_measure_decrease(t)
        elif suite == "psn":
            rep = checks.check_psn(t)
        elif suite == "bisim":
            rep = checks.check_cuteq_bisim(t)
        elif suite == "sn":
            res = graphs.check_sn(t, rules.Mode.MICRO)
            if args.gen == "typed":
                rep = Report(
                    res.is_sn,
                    f"sn: {res.status.value}"
                    + (f", longest path {res.longest_path}" if res.is_sn else ""),
                )
            else:
                # untyped terms may legitimately diverge; just report them
                if not res.is_sn:
                    notes += 1
                    _say(
                        f"seed {seed}: {res.status.value}"
                        + (f" via {', '.join(res.witness)}" if res.witness else "")
                    )
                continue
        assert rep is not None
        if not rep.ok:
            failures += 1
            path = _dump_counterexample(suite, seed, t, rep)
            _say(f"seed {seed}: FAIL ({rep.label}) -> {path}")
    _say(
        f"suite {suite}: {args.count} term(s), {failures} failure(s)"
        + (f", {notes} divergent" if notes else "")
    )
    return 1 if failures else 0


# ----------------------------------------------------------------- main

def main(argv: Optional[list[str]] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="imell",
        description="Proof terms for intuitionistic MELL: check, reduce, generate, verify.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse, properness, clashes, optional typing")
    p.add_argument("file")
    p.add_argument("--ctx", help='typing context, e.g. "e: !X, m: X -o Y"')
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("reduce", help="normalize a term file")
    p.add_argument("file")
    p.add_argument("--strategy", choices=sorted(_STRATEGIES), default="good")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--trace", help="write a JSONL trace here")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("gen", help="emit a term file")
    gsub = p.add_subparsers(dest="family", required=True)
    g = gsub.add_parser("spindle", help="duplication chain of n spindles")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("-o", "--out")
    g = gsub.add_parser("omega", help="the looping term")
    g.add_argument("-o", "--out")
    g = gsub.add_parser("random", help="random term")
    g.add_argument("--typed", action="store_true")
    g.add_argument("--size", type=int, default=20)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("verify", help="run a property suite over generated terms")
    p.add_argument(
        "--suite",
        required=True,
        choices=[
            "diamond",
            "confluence",
            "fullness",
            "full-composition",
            "measure",
            "psn",
            "sn",
            "bisim",
        ],
    )
    p.add_argument("--size", type=int, default=18)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gen", choices=["typed", "untyped"], default="typed")
    p.set_defaults(fn=cmd_verify)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
