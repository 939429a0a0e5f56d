"""Termination measure for the non-Lolli micro rules.

potential(t, x) bounds how many times a box cut on x can be duplicated:
occurrences count 1, going under a cut multiplies the value's contribution
by the body binder's potential plus one. The measure charges every cut
value by the potential of its binder. Both can be exponentially large in
the size of the term, which is fine: ints are unbounded.

The recursion is purely structural and ignores binding, so it assumes the
queried variable is not also used as a binder inside t (terms kept under
the usual freshness convention satisfy this; internally we only ever query
fresh hole markers or cut binders against their own bodies).
"""

from __future__ import annotations

from .contexts import Context, replace_at
from .terms import Bang, Cut, Der, Lam, Pair, Sub, Par, Term, Var

# Marker standing for the hole when a context is measured. The # keeps it
# out of the surface namespace; first letter g makes it exponential.
HOLE_MARK = Var("g#hole", Var.of("g").kind)


def potential(t: Term, x: Var) -> int:
    # memoized per node: a cut walks its body once for the variable and
    # once for its own binder, which is exponential on nested cut chains
    # when recomputed naively
    cache: dict[Var, int] = t.__dict__.get("_potential")  # type: ignore[assignment]
    if cache is None:
        cache = {}
        object.__setattr__(t, "_potential", cache)
    hit = cache.get(x)
    if hit is not None:
        return hit
    result = _potential(t, x)
    cache[x] = result
    return result


def _potential(t: Term, x: Var) -> int:
    # binders shadow x: occurrences under an equal binder are not free,
    # so they contribute nothing (potential of a non-free variable is 0)
    match t:
        case Var():
            return 1 if t == x else 0
        case Pair(left, right):
            return potential(left, x) + potential(right, x)
        case Lam(binder, body, _):
            return 0 if binder == x else potential(body, x)
        case Bang(body):
            return potential(body, x)
        case Cut(value, binder, body):
            through = 0 if binder == x else potential(body, x)
            return through + potential(value, x) * (potential(body, binder) + 1)
        case Par(conclusion, left, right, body):
            if x == conclusion:
                return 1 + potential(body, left) + potential(body, right)
            if x in (left, right):
                return 0
            return potential(body, x)
        case Sub(conclusion, value, binder, body):
            if x == conclusion:
                return 1
            through = 0 if binder == x else potential(body, x)
            return potential(value, x) + through
        case Der(conclusion, binder, body):
            if x == conclusion:
                through = 0 if binder == x else potential(body, x)
                return 1 + through + potential(body, binder)
            if x == binder:
                return 0
            return potential(body, x)
    raise TypeError(f"not a term: {t!r}")


def measure(t: Term) -> int:
    hit = t.__dict__.get("_measure")
    if hit is not None:
        return hit
    result = _measure(t)
    object.__setattr__(t, "_measure", result)
    return result


def _measure(t: Term) -> int:
    match t:
        case Var():
            return 1
        case Pair(left, right):
            return measure(left) + measure(right)
        case Lam(_, body, _):
            return measure(body)
        case Bang(body):
            return measure(body)
        case Cut(value, binder, body):
            return measure(value) * (potential(body, binder) + 1) + measure(body)
        case Par(_, _, _, body):
            return measure(body) + 1
        case Sub(_, value, _, body):
            return measure(value) + measure(body) + 1
        case Der(_, _, body):
            return measure(body) + 1
    raise TypeError(f"not a term: {t!r}")


def _fill(ctx: Context) -> Term:
    return replace_at(ctx.root, ctx.hole, HOLE_MARK)


def potential_ctx(ctx: Context) -> int:
    """Potential of the hole itself; always >= 1."""
    return potential(_fill(ctx), HOLE_MARK)


def potential_ctx_var(ctx: Context, x: Var) -> int:
    """Potential of x in the context, hole treated as an opaque leaf."""
    return potential(_fill(ctx), x)


def measure_ctx(ctx: Context) -> int:
    # The decomposition measure(C<t>) = measure_ctx(C) + potential_ctx(C) *
    # measure(t), applied to a hole marker of measure 1.
    return measure(_fill(ctx)) - potential_ctx(ctx)
