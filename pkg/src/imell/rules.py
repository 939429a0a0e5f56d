"""Cut-elimination rules, at a distance.

A cut interacts with one free occurrence of its variable, however deep,
provided no box intervenes for the multiplicative rules. Occurrences come in
four shapes: a bare variable node, or the conclusion of a par, sub or der.
The rule kind is determined by the cut's value and the occurrence shape:

    value / occurrence   var     par        sub        der
    mul var n            AxM1    AxM2       AxM2       -
    pair                 AxM1    Tens       clash      -
    lambda               AxM1    clash      Lolli      -
    exp var f            AxE1    -          -          AxE2
    bang                 AxE1    -          -          BangDer
    (mul value on exp binder, or exp value on mul binder: clash)

Weak fires on an exponential cut whose variable is unused; ESmall is the
small-step contraction (meta-substitution) of any exponential cut. AxM1
consumes the cut (the variable is linear); the exponential rules keep it,
except Weak.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterator, Optional

from .contexts import (
    Path,
    binders_into,
    child_at,
    freshen_path,
    positions,
    replace_at,
    subterm_at,
)
from .report import Report
from .subst import subst_exp
from .terms import (
    Bang,
    Cut,
    Der,
    Lam,
    NameSupply,
    Pair,
    Split,
    Sub,
    Par,
    Term,
    Var,
    alpha_key,
    is_exp_value,
    is_mul_value,
    refresh,
    rename_free,
    replug,
    split,
)


class RuleKind(Enum):
    AxM1 = "ax_m1"
    AxM2 = "ax_m2"
    Tens = "tens"
    Lolli = "lolli"
    AxE1 = "ax_e1"
    AxE2 = "ax_e2"
    BangDer = "bang_der"
    Weak = "weak"
    ESmall = "e_small"


MICRO = frozenset(
    {
        RuleKind.AxM1,
        RuleKind.AxM2,
        RuleKind.Tens,
        RuleKind.Lolli,
        RuleKind.AxE1,
        RuleKind.AxE2,
        RuleKind.BangDer,
        RuleKind.Weak,
    }
)
MULTIPLICATIVE = frozenset({RuleKind.AxM1, RuleKind.AxM2, RuleKind.Tens, RuleKind.Lolli})
NON_LOLLI_MICRO = MICRO - {RuleKind.Lolli}
EXP_MICRO = MICRO - MULTIPLICATIVE
SMALL = MULTIPLICATIVE | {RuleKind.ESmall}


class Mode(Enum):
    MICRO = "micro"
    SMALL = "small"
    NONLOLLI_MICRO = "nonlolli-micro"
    MUL_ONLY = "mul-only"
    EXP_MICRO = "exp-micro"

    @property
    def kinds(self) -> frozenset[RuleKind]:
        return {
            Mode.MICRO: MICRO,
            Mode.SMALL: SMALL,
            Mode.NONLOLLI_MICRO: NON_LOLLI_MICRO,
            Mode.MUL_ONLY: MULTIPLICATIVE,
            Mode.EXP_MICRO: EXP_MICRO,
        }[self]


@dataclass(frozen=True)
class Redex:
    kind: RuleKind
    cut_path: Path
    occ_path: Optional[Path] = None


class StaleRedexError(ValueError):
    pass


def redex_position(r: Redex) -> Path:
    """Absolute path of the position the step is charged to: the occurrence
    for non-Weak micro redexes, the cut itself for Weak and ESmall."""
    if r.occ_path is None:
        return r.cut_path
    return r.cut_path + (1,) + r.occ_path


# ---- occurrence scanning ----


def free_occurrences(body: Term, x: Var) -> Iterator[tuple[Path, str, bool]]:
    """(path, shape, crosses_bang) for each free occurrence of x in body.
    Shapes: 'var' for a variable node, 'par'/'sub'/'der' for a conclusion.
    Shadowed regions are skipped, so no matched occurrence is captured."""

    def go(t: Term, p: Path, banged: bool) -> Iterator[tuple[Path, str, bool]]:
        if x not in t.fv:
            return
        match t:
            case Var():
                yield p, "var", banged
            case Pair(left, right):
                yield from go(left, p + (0,), banged)
                yield from go(right, p + (1,), banged)
            case Lam(binder, bd, _):
                if binder != x:
                    yield from go(bd, p + (0,), banged)
            case Bang(bd):
                yield from go(bd, p + (0,), True)
            case Cut(value, binder, bd):
                yield from go(value, p + (0,), banged)
                if binder != x:
                    yield from go(bd, p + (1,), banged)
            case Par(conclusion, left, right, bd):
                if conclusion == x:
                    yield p, "par", banged
                if x not in (left, right):
                    yield from go(bd, p + (0,), banged)
            case Sub(conclusion, value, binder, bd):
                if conclusion == x:
                    yield p, "sub", banged
                yield from go(value, p + (0,), banged)
                if binder != x:
                    yield from go(bd, p + (1,), banged)
            case Der(conclusion, binder, bd):
                if conclusion == x:
                    yield p, "der", banged
                if binder != x:
                    yield from go(bd, p + (0,), banged)

    yield from go(body, (), False)


_MUL_KIND = {
    ("var", Var): RuleKind.AxM1,
    ("var", Pair): RuleKind.AxM1,
    ("var", Lam): RuleKind.AxM1,
    ("par", Pair): RuleKind.Tens,
    ("par", Var): RuleKind.AxM2,
    ("sub", Lam): RuleKind.Lolli,
    ("sub", Var): RuleKind.AxM2,
}


def redexes(t: Term, mode: Mode = Mode.MICRO) -> list[Redex]:
    wanted = mode.kinds
    out: list[Redex] = []
    for p, s in positions(t):
        if not isinstance(s, Cut):
            continue
        v, x, body = s.value, s.binder, s.body
        if x.is_mul and is_mul_value(v):
            for q, shape, banged in free_occurrences(body, x):
                if banged:
                    continue  # multiplicative rules act under mul contexts only
                kind = _MUL_KIND.get((shape, type(v)))
                if kind is not None and kind in wanted:
                    out.append(Redex(kind, p, q))
        elif x.is_exp and is_exp_value(v):
            if RuleKind.Weak in wanted and x not in body.fv:
                out.append(Redex(RuleKind.Weak, p, None))
            if RuleKind.ESmall in wanted:
                out.append(Redex(RuleKind.ESmall, p, None))
            for q, shape, _ in free_occurrences(body, x):
                if shape == "var":
                    kind = RuleKind.AxE1
                elif shape == "der":
                    kind = RuleKind.AxE2 if isinstance(v, Var) else RuleKind.BangDer
                else:
                    continue  # exp variable as par/sub conclusion never parses
                if kind in wanted:
                    out.append(Redex(kind, p, q))
        # mixed value/binder kinds are clashes, never redexes
    out.sort(key=lambda r: (r.cut_path, r.occ_path if r.occ_path is not None else ()))
    return out


# ---- application ----


def _want(cond: bool, what: str) -> None:
    if not cond:
        raise StaleRedexError(f"redex does not match the term: {what}")


def _shadowed(body: Term, q: Path, x: Var) -> bool:
    t = body
    for i in q:
        if x in binders_into(t, i):
            return True
        t = child_at(t, i)
    return False


def _crosses_bang(body: Term, q: Path) -> bool:
    t = body
    for i in q:
        if isinstance(t, Bang):
            return True
        t = child_at(t, i)
    return False


def apply(t: Term, r: Redex, supply: NameSupply | None = None) -> Term:
    """One step of r's rule at its position. Raises StaleRedexError when the
    term does not carry this redex (shape re-checked, not versioned)."""
    if supply is None:
        supply = NameSupply.for_terms(t)
    try:
        cut = subterm_at(t, r.cut_path)
    except ValueError as exc:
        raise StaleRedexError(str(exc)) from exc
    _want(isinstance(cut, Cut), "no cut at cut_path")
    new_local = _apply_root(cut, r, supply)
    return replace_at(t, r.cut_path, new_local)


def step_ess(t: Term, r: Redex, supply: NameSupply | None = None) -> Term:
    _want(r.kind is RuleKind.ESmall, "step_ess wants an ESmall redex")
    return apply(t, r, supply)


def _apply_root(cut: Cut, r: Redex, supply: NameSupply) -> Term:
    v, x, body = cut.value, cut.binder, cut.body
    q = r.occ_path

    if r.kind is RuleKind.Weak:
        _want(x.is_exp and is_exp_value(v), "Weak wants an exponential cut")
        _want(x not in body.fv, "Weak wants an unused cut variable")
        return body

    if r.kind is RuleKind.ESmall:
        _want(x.is_exp and is_exp_value(v), "ESmall wants an exponential cut")
        return subst_exp(body, x, v, supply)

    _want(q is not None, f"{r.kind.value} needs an occurrence path")
    assert q is not None
    try:
        occ = subterm_at(body, q)
    except ValueError as exc:
        raise StaleRedexError(str(exc)) from exc
    _want(not _shadowed(body, q, x), "occurrence is shadowed")

    if r.kind in MULTIPLICATIVE:
        _want(x.is_mul and is_mul_value(v), "multiplicative rule wants a mul cut")
        _want(not _crosses_bang(body, q), "occurrence sits under a bang")

    match r.kind:
        case RuleKind.AxM1:
            _want(isinstance(occ, Var) and occ == x, "AxM1 wants the variable itself")
            body1 = freshen_path(body, q, v.fv, supply)
            return replace_at(body1, q, v)

        case RuleKind.AxM2:
            _want(isinstance(v, Var), "AxM2 wants a variable value")
            _want(
                isinstance(occ, (Par, Sub)) and occ.conclusion == x,
                "AxM2 wants a par/sub conclusion occurrence",
            )
            return rename_free(body, x, v, supply)

        case RuleKind.Tens:
            _want(isinstance(v, Pair), "Tens wants a pair value")
            _want(
                isinstance(occ, Par) and occ.conclusion == x,
                "Tens wants a par occurrence",
            )
            assert isinstance(v, Pair) and isinstance(occ, Par)
            body1 = freshen_path(body, q, v.fv, supply)
            occ1 = subterm_at(body1, q)
            assert isinstance(occ1, Par)
            y1, y2, w = occ1.left, occ1.right, occ1.body
            s2 = refresh(v.left, supply)
            u2 = refresh(v.right, supply)
            if y1 in u2.fv:
                # y1 would capture the second component's free occurrence
                ny1 = supply.fresh(y1)
                w = rename_free(w, y1, ny1, supply)
                y1 = ny1
            u_sp = split(u2)
            s_sp = split(s2)
            inner = replug(Split(u_sp.spine, Cut(u_sp.head, y2, w)))
            outer = replug(Split(s_sp.spine, Cut(s_sp.head, y1, inner)))
            return replace_at(body1, q, outer)

        case RuleKind.Lolli:
            _want(isinstance(v, Lam), "Lolli wants a lambda value")
            _want(
                isinstance(occ, Sub) and occ.conclusion == x,
                "Lolli wants a sub occurrence",
            )
            body1 = freshen_path(body, q, v.fv, supply)
            occ1 = subterm_at(body1, q)
            assert isinstance(occ1, Sub)
            lam = refresh(v, supply)
            assert isinstance(lam, Lam)
            b_sp = split(lam.body)
            inner = replug(Split(b_sp.spine, Cut(b_sp.head, occ1.binder, occ1.body)))
            return replace_at(body1, q, Cut(occ1.value, lam.binder, inner))

        case RuleKind.AxE1:
            _want(x.is_exp and is_exp_value(v), "AxE1 wants an exponential cut")
            _want(isinstance(occ, Var) and occ == x, "AxE1 wants the variable itself")
            body1 = freshen_path(body, q, v.fv, supply)
            copy = refresh(v, supply) if isinstance(v, Bang) else v
            return Cut(v, x, replace_at(body1, q, copy))

        case RuleKind.AxE2:
            _want(isinstance(v, Var) and v.is_exp, "AxE2 wants a variable value")
            _want(
                isinstance(occ, Der) and occ.conclusion == x,
                "AxE2 wants a der occurrence",
            )
            assert isinstance(v, Var)
            body1 = freshen_path(body, q, v.fv, supply)
            occ1 = subterm_at(body1, q)
            assert isinstance(occ1, Der)
            return Cut(v, x, replace_at(body1, q, replace(occ1, conclusion=v)))

        case RuleKind.BangDer:
            _want(isinstance(v, Bang), "BangDer wants a box value")
            _want(
                isinstance(occ, Der) and occ.conclusion == x,
                "BangDer wants a der occurrence",
            )
            assert isinstance(v, Bang)
            body1 = freshen_path(body, q, v.fv, supply)
            occ1 = subterm_at(body1, q)
            assert isinstance(occ1, Der)
            c_sp = split(refresh(v.body, supply))
            opened = replug(Split(c_sp.spine, Cut(c_sp.head, occ1.binder, occ1.body)))
            return Cut(v, x, replace_at(body1, q, opened))

    raise StaleRedexError(f"unknown rule kind {r.kind}")


# ---- normal forms and clashes in normal position ----


def is_normal(t: Term, mode: Mode = Mode.MICRO) -> bool:
    return not redexes(t, mode)


def is_cut_free(t: Term) -> bool:
    from .terms import subterms

    return all(not isinstance(s, Cut) for s in subterms(t))


# ---- local postponement of garbage collection ----


def check_gc_local_postponement(t: Term) -> Report:
    """For each t -Weak-> u -(non-Weak micro)-> s, find a non-Weak-first
    path t -(non-Weak)-> . -Weak+-> s (up to alpha)."""
    weaks = [r for r in redexes(t, Mode.MICRO) if r.kind is RuleKind.Weak]
    others_first = None  # computed lazily
    failures: list[str] = []
    pairs = 0
    for w in weaks:
        u = apply(t, w)
        for r2 in redexes(u, Mode.MICRO):
            if r2.kind is RuleKind.Weak:
                continue
            pairs += 1
            s = apply(u, r2)
            if others_first is None:
                others_first = [
                    apply(t, r)
                    for r in redexes(t, Mode.MICRO)
                    if r.kind is not RuleKind.Weak
                ]
            if not _weak_closure_hits(others_first, s):
                from .surface import show_term

                failures.append(
                    f"no swap for weak at {w.cut_path} then {r2.kind.value}: "
                    f"{show_term(t)}"
                )
    return Report(
        not failures,
        f"gc postponement: {pairs} pair(s) swapped",
        tuple(failures[:5]),
    )


def _weak_closure_hits(starts: list[Term], target: Term) -> bool:
    want = alpha_key(target)
    seen: set[str] = set()
    frontier = list(starts)
    while frontier:
        nxt: list[Term] = []
        for u in frontier:
            for r in redexes(u, Mode.MICRO):
                if r.kind is not RuleKind.Weak:
                    continue
                s = apply(u, r)
                k = alpha_key(s)
                if k == want:
                    return True
                if k not in seen:
                    seen.add(k)
                    nxt.append(s)
        frontier = nxt
    return False
