"""Type synthesis for proof terms.

Sequent-style: multiplicative hypotheses are consumed exactly once,
exponential hypotheses (always !-typed) as often as needed. Promotion (!t)
requires every free variable of the body exponential. Lambdas need binder
annotations since the system has no inference for them.

A cut whose value kind disagrees with its variable kind, or whose value
shape disagrees with the occurrence shape (pair against sub, lambda against
par), is a clash: syntactically fine, never typable. find_clashes spots the
four shapes; is_clash_free_bounded also chases reducts, since clashes can
hide behind other cuts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from . import formulas as fm
from .contexts import Path, positions
from .rules import Mode, apply, redexes, free_occurrences
from .terms import (
    Bang,
    Cut,
    Der,
    Lam,
    NameSupply,
    Pair,
    Sub,
    Par,
    Term,
    Var,
    alpha_key,
    is_exp_value,
    is_mul_value,
    rename_free,
)

TypingContext = Mapping[Var, fm.Formula]


class TypingError(Exception):
    def __init__(self, msg: str, path: Path = ()) -> None:
        super().__init__(msg)
        self.path = path


def _bind_ok(v: Var, f: fm.Formula, path: Path) -> None:
    if v.is_exp and not fm.is_bang(f):
        raise TypingError(f"exponential {v} bound at non-! formula {fm.show(f)}", path)
    if v.is_mul and fm.is_bang(f):
        raise TypingError(f"multiplicative {v} bound at ! formula {fm.show(f)}", path)


def synth(ctx: TypingContext, t: Term) -> fm.Formula:
    """Formula of t under ctx, or TypingError. Every multiplicative context
    entry must be used."""
    for v, f in ctx.items():
        _bind_ok(v, f, ())
    typ, used = _synth(dict(ctx), t, (), NameSupply.for_terms(t))
    missing = {v for v in ctx if v.is_mul} - used
    if missing:
        names = ", ".join(sorted(v.name for v in missing))
        raise TypingError(f"unused multiplicative hypothesis: {names}")
    return typ


def _lookup(env: dict[Var, fm.Formula], v: Var, path: Path) -> fm.Formula:
    try:
        return env[v]
    except KeyError:
        raise TypingError(f"unbound variable {v}", path) from None


def _synth(
    env: dict[Var, fm.Formula], t: Term, path: Path, supply: NameSupply
) -> tuple[fm.Formula, frozenset[Var]]:
    """Returns (formula, multiplicative hypotheses consumed)."""

    def with_binding(
        binder: Var, f: fm.Formula, body: Term, slot: int
    ) -> tuple[Var, fm.Formula, frozenset[Var]]:
        # Shadowing would conflate usage sets; rename the binder apart.
        if binder in env:
            nb = supply.fresh(binder)
            body = rename_free(body, binder, nb, supply)
            binder = nb
        _bind_ok(binder, f, path)
        env2 = dict(env)
        env2[binder] = f
        typ, used = _synth(env2, body, path + (slot,), supply)
        if binder.is_mul:
            if binder not in used:
                raise TypingError(f"linear variable {binder} unused", path)
            used = used - {binder}
        return binder, typ, used

    match t:
        case Var():
            f = _lookup(env, t, path)
            if t.is_mul:
                return f, frozenset((t,))
            return f, frozenset()

        case Pair(left, right):
            fl, ul = _synth(env, left, path + (0,), supply)
            fr, ur = _synth(env, right, path + (1,), supply)
            dup = ul & ur
            if dup:
                names = ", ".join(sorted(v.name for v in dup))
                raise TypingError(f"linear variable(s) {names} used in both pair components", path)
            return fm.Tensor(fl, fr), ul | ur

        case Lam(binder, body, annot):
            if annot is None:
                raise TypingError(f"lambda binder {binder} needs a type annotation", path)
            assert isinstance(annot, fm.Formula)
            _, typ, used = with_binding(binder, annot, body, 0)
            return fm.Lolli(annot, typ), used

        case Bang(body):
            typ, used = _synth(env, body, path + (0,), supply)
            if used:
                names = ", ".join(sorted(v.name for v in used))
                raise TypingError(f"promotion over linear variable(s) {names}", path)
            bad = [v for v in body.fv if v.is_mul]
            if bad:
                names = ", ".join(sorted(v.name for v in bad))
                raise TypingError(f"promotion over multiplicative variable(s) {names}", path)
            return fm.Bang(typ), frozenset()

        case Cut(value, binder, body):
            if is_mul_value(value) and binder.is_exp:
                raise TypingError(
                    f"clash: multiplicative value cut against exponential {binder}", path
                )
            if is_exp_value(value) and binder.is_mul:
                raise TypingError(
                    f"clash: exponential value cut against multiplicative {binder}", path
                )
            fv_, uv = _synth(env, value, path + (0,), supply)
            _, typ, ub = with_binding(binder, fv_, body, 1)
            dup = uv & ub
            if dup:
                names = ", ".join(sorted(v.name for v in dup))
                raise TypingError(f"linear variable(s) {names} used on both sides of cut", path)
            return typ, uv | ub

        case Par(conclusion, left, right, body):
            f = _lookup(env, conclusion, path)
            if not isinstance(f, fm.Tensor):
                raise TypingError(
                    f"par conclusion {conclusion} has type {fm.show(f)}, not a tensor "
                    f"(lambda against par is a clash)",
                    path,
                )
            env2 = dict(env)
            bl, br = left, right
            body2 = body
            if bl in env2:
                nb = supply.fresh(bl)
                body2 = rename_free(body2, bl, nb, supply)
                bl = nb
            if br in env2:
                nb = supply.fresh(br)
                body2 = rename_free(body2, br, nb, supply)
                br = nb
            _bind_ok(bl, f.left, path)
            _bind_ok(br, f.right, path)
            env2[bl] = f.left
            env2[br] = f.right
            typ, used = _synth(env2, body2, path + (0,), supply)
            for b in (bl, br):
                if b.is_mul:
                    if b not in used:
                        raise TypingError(f"linear variable {b} unused", path)
                    used = used - {b}
            if conclusion in used:
                raise TypingError(f"par conclusion {conclusion} reused in body", path)
            return typ, used | {conclusion}

        case Sub(conclusion, value, binder, body):
            f = _lookup(env, conclusion, path)
            if not isinstance(f, fm.Lolli):
                raise TypingError(
                    f"sub conclusion {conclusion} has type {fm.show(f)}, not an arrow "
                    f"(pair against sub is a clash)",
                    path,
                )
            fv_, uv = _synth(env, value, path + (0,), supply)
            if fv_ != f.left:
                raise TypingError(
                    f"sub argument has type {fm.show(fv_)}, expected {fm.show(f.left)}",
                    path,
                )
            _, typ, ub = with_binding(binder, f.right, body, 1)
            dup = uv & ub
            if dup:
                names = ", ".join(sorted(v.name for v in dup))
                raise TypingError(f"linear variable(s) {names} used twice around sub", path)
            if conclusion in uv | ub:
                raise TypingError(f"sub conclusion {conclusion} reused", path)
            return typ, uv | ub | {conclusion}

        case Der(conclusion, binder, body):
            f = _lookup(env, conclusion, path)
            if not isinstance(f, fm.Bang):
                raise TypingError(
                    f"der conclusion {conclusion} has type {fm.show(f)}, not a bang", path
                )
            _, typ, used = with_binding(binder, f.body, body, 0)
            return typ, used

    raise TypeError(f"not a term: {t!r}")


# ---- clashes ----


def find_clashes(t: Term) -> list[Path]:
    """Paths of cuts matching one of the four clash shapes."""
    out: list[Path] = []
    for p, s in positions(t):
        if not isinstance(s, Cut):
            continue
        v, x, body = s.value, s.binder, s.body
        if is_mul_value(v) and x.is_exp:
            out.append(p)
        elif is_exp_value(v) and x.is_mul:
            out.append(p)
        elif x.is_mul and isinstance(v, (Pair, Lam)):
            bad_shape = "sub" if isinstance(v, Pair) else "par"
            for _, shape, banged in free_occurrences(body, x):
                if shape == bad_shape and not banged:
                    out.append(p)
                    break
    return out


@dataclass(frozen=True)
class ClashVerdict:
    clash_free: bool
    depth_explored: int
    witness_path: Optional[Path] = None
    witness_steps: tuple[str, ...] = ()
    truncated: bool = False


def is_clash_free_bounded(
    t: Term, depth: int, max_nodes: int = 20000
) -> ClashVerdict:
    """BFS the micro-step reducts of t up to `depth` steps looking for a
    clash. Sound for "clash found"; "clash free" holds only within the
    explored bound (truncated reports whether the node cap bit)."""
    seen = {alpha_key(t)}
    frontier: list[tuple[Term, tuple[str, ...]]] = [(t, ())]
    truncated = False
    for d in range(depth + 1):
        for u, steps in frontier:
            clashes = find_clashes(u)
            if clashes:
                return ClashVerdict(False, d, clashes[0], steps, truncated)
        if d == depth:
            break
        nxt: list[tuple[Term, tuple[str, ...]]] = []
        for u, steps in frontier:
            for r in redexes(u, Mode.MICRO):
                if len(seen) >= max_nodes:
                    truncated = True
                    break
                s = apply(u, r)
                k = alpha_key(s)
                if k not in seen:
                    seen.add(k)
                    nxt.append((s, steps + (r.kind.value,)))
        if not nxt:
            return ClashVerdict(True, d, truncated=truncated)
        frontier = nxt
    return ClashVerdict(True, depth, truncated=truncated)
