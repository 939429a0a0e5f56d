"""The good strategy and instrumented normalization drivers.

A micro step is *good* when its position is a good context: never inside a
cut's value slot, never under a cut whose variable dominates the position.
Good steps cannot be duplicated or erased later, which is what makes the
micro-step count a reasonable cost measure; the drivers here record enough
per-step data (duplicated and erased value sizes) to audit that claim.

Goodness is a property of the position, not of the rule; the same redex can
be good in one term and bad in another. It is also not stable under cut
equivalence; no attempt is made to quotient.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .contexts import Context, Path, classify, Classification, positions, show_path
from .measure import measure
from .report import Report
from .rules import Mode, Redex, RuleKind, apply, redex_position, redexes
from .surface import show_term
from .terms import Term, is_value


def good_redexes(t: Term) -> list[Redex]:
    out = []
    for r in redexes(t, Mode.MICRO):
        ctx = Context(t, redex_position(r))
        if classify(ctx) is Classification.GOOD:
            out.append(r)
    return out


class GoodPolicy(Enum):
    LEFTMOST_GOOD = "leftmost-good"
    RANDOM_GOOD = "random-good"


def good_step(
    t: Term,
    policy: GoodPolicy = GoodPolicy.LEFTMOST_GOOD,
    rng: random.Random | None = None,
) -> Optional[tuple[Redex, Term]]:
    """One good step, or None when no good redex exists."""
    candidates = good_redexes(t)
    if not candidates:
        return None
    if policy is GoodPolicy.RANDOM_GOOD:
        r = (rng or random.Random()).choice(candidates)
    else:
        r = candidates[0]
    return r, apply(t, r)


# ---- traces ----


class Verdict(Enum):
    NORMAL = "normal"
    STEP_LIMIT = "step-limit"
    CLASH_STUCK = "clash-stuck"


@dataclass(frozen=True)
class StepRecord:
    index: int
    kind: RuleKind
    cut_path: Path
    occ_path: Optional[Path]
    size_after: int
    measure_after: int
    duplicated_value: Optional[tuple[int, int]] = None  # (size, copies)
    erased_value: Optional[int] = None

    def to_json(self) -> dict:
        d = {
            "index": self.index,
            "kind": self.kind.value,
            "cut_path": show_path(self.cut_path),
            "occ_path": None if self.occ_path is None else show_path(self.occ_path),
            "size_after": self.size_after,
            "measure_after": self.measure_after,
        }
        if self.duplicated_value is not None:
            d["duplicated_value_size"] = self.duplicated_value[0]
            d["duplicated_copies"] = self.duplicated_value[1]
        if self.erased_value is not None:
            d["erased_value_size"] = self.erased_value
        return d


@dataclass(frozen=True)
class Trace:
    initial: Term
    steps: tuple[StepRecord, ...]
    final: Term
    verdict: Verdict
    strategy: str
    seed: Optional[int] = None

    def to_jsonl(self) -> str:
        header = {
            "initial_term": show_term(self.initial),
            "strategy": self.strategy,
            "seed": self.seed,
        }
        lines = [json.dumps(header)]
        lines.extend(json.dumps(s.to_json()) for s in self.steps)
        lines.append(
            json.dumps({"final_term": show_term(self.final), "verdict": self.verdict.value})
        )
        return "\n".join(lines) + "\n"


class Strategy(Enum):
    GOOD = "good"
    LEFTMOST_ANY = "leftmost"
    RANDOM_ANY = "random"
    SMALL_STEP = "small"


def _instrument(t: Term, r: Redex) -> tuple[Optional[tuple[int, int]], Optional[int]]:
    from .contexts import subterm_at

    cut = subterm_at(t, r.cut_path)
    if r.kind in (RuleKind.AxE1, RuleKind.BangDer):
        return (cut.value.size, 1), None
    if r.kind is RuleKind.Weak:
        return None, cut.value.size
    return None, None


def normalize(
    t: Term,
    strategy: Strategy = Strategy.GOOD,
    max_steps: Optional[int] = None,
    seed: Optional[int] = None,
) -> Trace:
    """Drive t to normal form (or clash-stuck, or the step ceiling),
    recording sizes, measures and duplication per step."""
    rng = random.Random(seed) if seed is not None else random.Random(0)
    mode = Mode.SMALL if strategy is Strategy.SMALL_STEP else Mode.MICRO
    records: list[StepRecord] = []
    cur = t
    while max_steps is None or len(records) < max_steps:
        if strategy is Strategy.GOOD:
            candidates = good_redexes(cur)
        else:
            candidates = redexes(cur, mode)
        if not candidates:
            from .rules import is_cut_free

            verdict = Verdict.NORMAL if is_cut_free(cur) else Verdict.CLASH_STUCK
            return Trace(t, tuple(records), cur, verdict, strategy.value, seed)
        if strategy is Strategy.RANDOM_ANY:
            r = rng.choice(candidates)
        else:
            r = candidates[0]
        dup, erased = _instrument(cur, r)
        cur = apply(cur, r)
        records.append(
            StepRecord(
                index=len(records),
                kind=r.kind,
                cut_path=r.cut_path,
                occ_path=r.occ_path,
                size_after=cur.size,
                measure_after=measure(cur),
                duplicated_value=dup,
                erased_value=erased,
            )
        )
    return Trace(t, tuple(records), cur, Verdict.STEP_LIMIT, strategy.value, seed)


def replay(trace: Trace) -> list[Term]:
    """Terms along the trace, initial first. Fresh names may differ from the
    original run; alpha classes and sizes do not."""
    out = [trace.initial]
    cur = trace.initial
    for rec in trace.steps:
        cur = apply(cur, Redex(rec.kind, rec.cut_path, rec.occ_path))
        out.append(cur)
    return out


# ---- bad values and the sub-term property ----


def bad_values(t: Term) -> list[tuple[Path, int]]:
    """Positions and sizes of values sitting in bad position."""
    out = []
    for p, s in positions(t):
        if p and is_value(s) and classify(Context(t, p)) is Classification.BAD:
            out.append((p, s.size))
    return out


@dataclass(frozen=True)
class SubTermReport:
    initial_size: int
    max_bad_value_size: int
    max_duplicated_size: int
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def subterm_report(trace: Trace) -> SubTermReport:
    """Audit a (good-strategy) trace: every bad value of every intermediate
    term, and every duplicated or erased value, must fit in the initial
    term's size."""
    bound = trace.initial.size
    max_bad = 0
    max_dup = 0
    violations: list[str] = []
    for i, term in enumerate(replay(trace)):
        for p, sz in bad_values(term):
            max_bad = max(max_bad, sz)
            if sz > bound:
                violations.append(
                    f"step {i}: bad value of size {sz} > initial {bound} at {show_path(p)}"
                )
    for rec in trace.steps:
        for label, sz in (
            ("duplicated", rec.duplicated_value[0] if rec.duplicated_value else None),
            ("erased", rec.erased_value),
        ):
            if sz is None:
                continue
            max_dup = max(max_dup, sz)
            if sz > bound:
                violations.append(
                    f"step {rec.index}: {label} value of size {sz} > initial {bound}"
                )
    return SubTermReport(bound, max_bad, max_dup, tuple(violations))


def cost_accounting(trace: Trace) -> Report:
    """Total work, counting a constant per step plus duplicated sizes, must
    stay within steps * (initial size + constant) on good traces."""
    const = 4
    total = sum(
        const + (rec.duplicated_value[0] if rec.duplicated_value else 0)
        for rec in trace.steps
    )
    bound = len(trace.steps) * (trace.initial.size + const)
    ok = total <= bound
    return Report(
        ok,
        f"cost {total} within {bound} for {len(trace.steps)} steps",
        () if ok else (f"trace from {show_term(trace.initial)}",),
    )
