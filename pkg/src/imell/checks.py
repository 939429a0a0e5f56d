"""Property checks: each one replays a metatheory statement on a term
(and its one-step neighborhood) and reports pass/fail with witnesses.

These are exhaustive within explicit bounds, never sampled: a check
that cannot finish inside its bounds says so rather than passing.
"""

from __future__ import annotations


from . import contexts as cx
from . import equiv
from . import formulas as fm
from . import graphs
from . import measure as ms
from . import rules
from . import strategy
from . import surface
from . import terms as tm
from . import typecheck
from .graphs import Bounds, SNStatus
from .report import Report, merge
from .rules import Mode, RuleKind

__all__ = [
    "check_confluence",
    "check_psn",
    "check_full_composition",
    "check_subject_reduction",
    "check_cuteq_bisim",
    "check_diamond",
    "check_random_descent",
    "check_fullness",
    "check_measure_decrease",
    "check_local_termination",
]


def _show(t: tm.Term, limit: int = 120) -> str:
    s = surface.show_term(t)
    return s if len(s) <= limit else s[: limit - 3] + "..."


# ----------------------------------------------------------- confluence

def _joinable(a: tm.Term, b: tm.Term, mode: Mode, depth: int, width: int) -> bool:
    """Do a and b reach a common alpha-class within the given depth?"""
    seen_a = {tm.alpha_key(a)}
    seen_b = {tm.alpha_key(b)}
    front_a, front_b = [a], [b]
    for _ in range(depth):
        if seen_a & seen_b:
            return True
        nxt_a: list[tm.Term] = []
        for u in front_a:
            for r in rules.redexes(u, mode):
                s = rules.apply(u, r)
                k = tm.alpha_key(s)
                if k not in seen_a and len(seen_a) < width:
                    seen_a.add(k)
                    nxt_a.append(s)
        nxt_b: list[tm.Term] = []
        for u in front_b:
            for r in rules.redexes(u, mode):
                s = rules.apply(u, r)
                k = tm.alpha_key(s)
                if k not in seen_b and len(seen_b) < width:
                    seen_b.add(k)
                    nxt_b.append(s)
        front_a, front_b = nxt_a, nxt_b
        if not front_a and not front_b:
            break
    return bool(seen_a & seen_b)


def check_confluence(
    t: tm.Term,
    mode: Mode = Mode.MICRO,
    bounds: Bounds = Bounds(),
    join_depth: int = 8,
) -> Report:
    """Unique normal form alpha-class when the graph terminates; local
    peak joinability otherwise."""
    g = graphs.build_graph(t, mode, bounds)
    cyclic = graphs._find_cycle(g) is not None
    if not g.truncated and not cyclic:
        nfs = graphs.normal_forms(g)
        if len(nfs) <= 1:
            return Report(True, f"confluence: unique normal form over {len(g)} nodes")
        return Report(
            False,
            "confluence: several normal forms",
            tuple(_show(g.nodes[k]) for k in nfs[:4]),
        )
    # divergent or out of room: fall back to local peaks
    bad: list[str] = []
    for key, out in g.edges.items():
        if len(out) < 2:
            continue
        here = g.nodes[key]
        succs = [g.nodes[sk] for _, sk in out]
        for i in range(len(succs)):
            for j in range(i + 1, len(succs)):
                a, b = succs[i], succs[j]
                if tm.alpha_eq(a, b):
                    continue
                if not _joinable(a, b, mode, join_depth, 4000):
                    bad.append(f"peak at {_show(here)}")
                    if len(bad) >= 4:
                        break
            if len(bad) >= 4:
                break
        if len(bad) >= 4:
            break
    label = "confluence: local peaks only (graph %s)" % (
        "truncated" if g.truncated else "cyclic"
    )
    return Report(not bad, label, tuple(bad))


# ------------------------------------------------------------------ psn

def check_psn(t: tm.Term, bounds: Bounds = Bounds()) -> Report:
    """Small-step strong normalization implies micro-step strong
    normalization.  Vacuous when small-step already diverges."""
    small = graphs.check_sn(t, Mode.SMALL, bounds)
    if small.status is SNStatus.CYCLE:
        return Report(True, "psn: vacuous, small-step diverges")
    if small.status is SNStatus.TRUNCATED:
        return Report(True, "psn: vacuous, small-step graph truncated")
    micro = graphs.check_sn(t, Mode.MICRO, bounds)
    if micro.status is SNStatus.SN:
        return Report(
            True,
            f"psn: small SN (≤{small.longest_path}) and micro SN (≤{micro.longest_path})",
        )
    if micro.status is SNStatus.CYCLE:
        return Report(
            False,
            "psn: small-step SN but micro-step cycles",
            (f"cycle kinds: {', '.join(micro.witness)}", _show(t)),
        )
    return Report(False, "psn: micro graph truncated, cannot certify", (_show(t),))


# ----------------------------------------------------- full composition

def check_full_composition(t: tm.Term) -> Report:
    """Each small-step exponential substitution is reproduced exactly by
    micro steps at the same cut (axioms/openings, then garbage
    collection)."""
    reports: list[Report] = []
    for r in rules.redexes(t, Mode.SMALL):
        if r.kind is not RuleKind.ESmall:
            continue
        target = rules.apply(t, r)
        cur = t
        cut = cx.subterm_at(t, r.cut_path)
        assert isinstance(cut, tm.Cut)
        fuel = tm.occ_count(cut.body, cut.binder) + 2
        done = False
        for _ in range(fuel):
            here = [
                q
                for q in rules.redexes(cur, Mode.MICRO)
                if q.cut_path == r.cut_path and q.kind in rules.EXP_MICRO
            ]
            if not here:
                break
            cur = rules.apply(cur, here[0])
            if here[0].kind is RuleKind.Weak:
                done = True
                break
        if done and tm.alpha_eq(cur, target):
            reports.append(Report(True, f"cut at {r.cut_path}: composed"))
        else:
            reports.append(
                Report(
                    False,
                    f"cut at {r.cut_path}: micro steps missed the small step",
                    (f"small: {_show(target)}", f"micro: {_show(cur)}"),
                )
            )
    if not reports:
        return Report(True, "full composition: no exponential cut to test")
    return merge("full composition", reports)


# --------------------------------------------------- subject reduction

def check_subject_reduction(
    ctx: dict[tm.Var, fm.Formula], t: tm.Term
) -> Report:
    try:
        before = typecheck.synth(ctx, t)
    except typecheck.TypingError as exc:
        return Report(False, "subject reduction: term does not type", (str(exc),))
    bad: list[str] = []
    n = 0
    for r in rules.redexes(t, Mode.MICRO):
        n += 1
        u = rules.apply(t, r)
        try:
            after = typecheck.synth(ctx, u)
        except typecheck.TypingError as exc:
            bad.append(f"{r.kind.value} at {r.cut_path}: reduct untypable: {exc}")
            continue
        if after != before:
            bad.append(
                f"{r.kind.value} at {r.cut_path}: type changed "
                f"{fm.show(before)} to {fm.show(after)}"
            )
    return Report(not bad, f"subject reduction over {n} step(s)", tuple(bad))


# -------------------------------------------------------- cuteq bisim

def _matched(
    t_next: tm.Term, u: tm.Term, kind: RuleKind, max_class: int
) -> bool:
    for r in rules.redexes(u, Mode.MICRO):
        if r.kind is not kind:
            continue
        if equiv.cut_equiv(rules.apply(u, r), t_next, max_class=max_class):
            return True
    return False


def check_cuteq_bisim(
    t: tm.Term, max_neighbors: int = 6, max_class: int = 20000
) -> Report:
    """One ~cut move each way: every micro step on one side is matched by
    a same-kind micro step on the other, with ~cut-equivalent results."""
    neighbors: list[tm.Term] = []
    for u in equiv.cuteq_moves(t):
        if not any(tm.alpha_eq(u, w) for w in neighbors):
            neighbors.append(u)
        if len(neighbors) >= max_neighbors:
            break
    if not neighbors:
        return Report(True, "cuteq bisim: no ~cut move applies")
    bad: list[str] = []
    pairs = 0
    for u in neighbors:
        for a, b in ((t, u), (u, t)):
            for r in rules.redexes(a, Mode.MICRO):
                pairs += 1
                if not _matched(rules.apply(a, r), b, r.kind, max_class):
                    bad.append(
                        f"{r.kind.value} at {r.cut_path} unmatched between "
                        f"{_show(a, 60)} and {_show(b, 60)}"
                    )
                    if len(bad) >= 4:
                        return Report(False, "cuteq bisim", tuple(bad))
    return Report(
        not bad,
        f"cuteq bisim: {pairs} step(s) across {len(neighbors)} neighbor(s)",
        tuple(bad),
    )


# ------------------------------------------------------------- diamond

def check_diamond(t: tm.Term) -> Report:
    """Two distinct good steps close in one good step each."""
    goods = strategy.good_redexes(t)
    bad: list[str] = []
    pairs = 0
    for i in range(len(goods)):
        for j in range(i + 1, len(goods)):
            t1 = rules.apply(t, goods[i])
            t2 = rules.apply(t, goods[j])
            if tm.alpha_eq(t1, t2):
                continue
            pairs += 1
            one = {tm.alpha_key(rules.apply(t1, r)) for r in strategy.good_redexes(t1)}
            two = {tm.alpha_key(rules.apply(t2, r)) for r in strategy.good_redexes(t2)}
            if not one & two:
                bad.append(
                    f"{goods[i].kind.value}@{goods[i].cut_path} vs "
                    f"{goods[j].kind.value}@{goods[j].cut_path} do not close"
                )
    return Report(not bad, f"good diamond over {pairs} peak(s)", tuple(bad))


# ------------------------------------------------------ random descent

def check_random_descent(t: tm.Term, bounds: Bounds = Bounds()) -> Report:
    """All maximal good sequences have one length and one endpoint."""
    g = graphs.build_graph(t, bounds=bounds, enumerate_redexes=strategy.good_redexes)
    if g.truncated:
        return Report(False, "random descent: good graph truncated", (_show(t),))
    if graphs._find_cycle(g) is not None:
        return Report(False, "random descent: good graph has a cycle", (_show(t),))
    nfs = graphs.normal_forms(g)
    if len(nfs) != 1:
        return Report(
            False,
            f"random descent: {len(nfs)} endpoints",
            tuple(_show(g.nodes[k]) for k in nfs[:4]),
        )
    # reverse topological sweep: min and max steps-to-end must agree
    lo: dict[str, int] = {}
    hi: dict[str, int] = {}
    pending = dict(g.edges)
    while pending:
        progressed = False
        for key in list(pending):
            out = pending[key]
            if all(sk in lo for _, sk in out):
                del pending[key]
                progressed = True
                if not out:
                    lo[key] = hi[key] = 0
                else:
                    lo[key] = 1 + min(lo[sk] for _, sk in out)
                    hi[key] = 1 + max(hi[sk] for _, sk in out)
        assert progressed, "acyclic graph must drain"
    split = [k for k in g.nodes if lo[k] != hi[k]]
    if split:
        k = split[0]
        return Report(
            False,
            "random descent: path lengths differ",
            (f"{lo[k]} vs {hi[k]} below {_show(g.nodes[k])}",),
        )
    return Report(
        True, f"random descent: all paths take {hi[g.root]} step(s) over {len(g)} nodes"
    )


# ------------------------------------------------------------ fullness

def check_fullness(t: tm.Term) -> Report:
    """A term with a micro redex has a good one."""
    if not rules.redexes(t, Mode.MICRO):
        return Report(True, "fullness: term is micro-normal")
    goods = strategy.good_redexes(t)
    if goods:
        return Report(True, f"fullness: {len(goods)} good redex(es)")
    return Report(False, "fullness: reducible but no good redex", (_show(t),))


# ---------------------------------------------------- measure decrease

def check_measure_decrease(t: tm.Term) -> Report:
    """Every non-lolli micro step strictly lowers the termination
    measure."""
    before = ms.measure(t)
    bad: list[str] = []
    n = 0
    for r in rules.redexes(t, Mode.MICRO):
        if r.kind is RuleKind.Lolli:
            continue
        n += 1
        after = ms.measure(rules.apply(t, r))
        if after >= before:
            bad.append(f"{r.kind.value} at {r.cut_path}: {before} to {after}")
    return Report(not bad, f"measure decrease over {n} step(s)", tuple(bad))


# ------------------------------------------------- local termination

def check_local_termination(t: tm.Term, hard_cap: int = 1_000_000) -> Report:
    """Leftmost non-lolli reduction halts within measure(t) steps."""
    bound = ms.measure(t)
    cap = min(bound, hard_cap)
    cur = t
    steps = 0
    while True:
        rs = rules.redexes(cur, Mode.NONLOLLI_MICRO)
        if not rs:
            return Report(
                True, f"local termination: normal after {steps} step(s), bound {bound}"
            )
        if steps >= cap:
            label = (
                "local termination: exceeded the measure bound"
                if cap == bound
                else "local termination: exceeded the hard cap"
            )
            return Report(False, label, (f"bound {bound}, took > {steps}", _show(t)))
        cur = rules.apply(cur, rs[0])
        steps += 1
