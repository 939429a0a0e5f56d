"""Contexts as (root term, hole path) pairs.

Path slots: Pair 0/1, Lam 0, Bang 0, Cut 0=value 1=body, Par 0=body,
Sub 0=value 1=body, Der 0=body. Paths print dot-separated, "1.0.1".

A context is *multiplicative* when no bang encloses the hole, *left* when
every step goes through the body of a cut/par/sub/der, and a *value context*
when the hole sits inside a value (or is the whole term).

Plugging C<t> at the exact value slot of a cut or sub with a non-value t
first splits t = spine<v> and hoists the spine above the cut, so the result
is a term again. Holes strictly inside values take t verbatim. plug may
capture; plug_avoid renames binders on the hole path out of the way of
t's free variables.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterator

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
    is_value,
    rename_free,
    replug,
    split,
)

Path = tuple[int, ...]


class PathError(ValueError):
    pass


def show_path(p: Path) -> str:
    return ".".join(str(i) for i in p) if p else "(here)"


def parse_path(s: str) -> Path:
    s = s.strip()
    if not s or s == "(here)":
        return ()
    return tuple(int(part) for part in s.split("."))


def child_slots(t: Term) -> tuple[tuple[int, Term], ...]:
    match t:
        case Var():
            return ()
        case Pair(left, right):
            return ((0, left), (1, right))
        case Lam(_, body, _) | Bang(body) | Par(_, _, _, body) | Der(_, _, body):
            return ((0, body),)
        case Cut(value, _, body) | Sub(_, value, _, body):
            return ((0, value), (1, body))
    raise TypeError(f"not a term: {t!r}")


def child_at(t: Term, i: int) -> Term:
    for j, c in child_slots(t):
        if j == i:
            return c
    raise PathError(f"no slot {i} in a {type(t).__name__}")


def subterm_at(t: Term, p: Path) -> Term:
    for i in p:
        t = child_at(t, i)
    return t


def binders_into(t: Term, i: int) -> tuple[Var, ...]:
    """Variables bound by t over its slot i."""
    match t:
        case Lam(binder, _, _) if i == 0:
            return (binder,)
        case Cut(_, binder, _) | Sub(_, _, binder, _) if i == 1:
            return (binder,)
        case Par(_, left, right, _) if i == 0:
            return (left, right)
        case Der(_, binder, _) if i == 0:
            return (binder,)
    return ()


def replace_at(t: Term, p: Path, new: Term) -> Term:
    """Plain subtree replacement (no hoisting, no capture avoidance). The
    node constructors reject a non-value landing in an exact value slot."""
    if not p:
        return new
    i, rest = p[0], p[1:]
    match t, i:
        case Pair(left, right), 0:
            return Pair(replace_at(left, rest, new), right)
        case Pair(left, right), 1:
            return Pair(left, replace_at(right, rest, new))
        case Lam(binder, body, annot), 0:
            return Lam(binder, replace_at(body, rest, new), annot)
        case Bang(body), 0:
            return Bang(replace_at(body, rest, new))
        case Cut(value, binder, body), 0:
            return Cut(replace_at(value, rest, new), binder, body)
        case Cut(value, binder, body), 1:
            return Cut(value, binder, replace_at(body, rest, new))
        case Par(conclusion, left, right, body), 0:
            return Par(conclusion, left, right, replace_at(body, rest, new))
        case Sub(conclusion, value, binder, body), 0:
            return Sub(conclusion, replace_at(value, rest, new), binder, body)
        case Sub(conclusion, value, binder, body), 1:
            return Sub(conclusion, value, binder, replace_at(body, rest, new))
        case Der(conclusion, binder, body), 0:
            return Der(conclusion, binder, replace_at(body, rest, new))
    raise PathError(f"no slot {i} in a {type(t).__name__}")


def positions(t: Term) -> Iterator[tuple[Path, Term]]:
    """All (path, subterm) pairs, pre-order."""
    stack: list[tuple[Path, Term]] = [((), t)]
    while stack:
        p, s = stack.pop()
        yield p, s
        for i, c in reversed(child_slots(s)):
            stack.append((p + (i,), c))


@dataclass(frozen=True)
class Context:
    root: Term
    hole: Path

    def __post_init__(self) -> None:
        subterm_at(self.root, self.hole)  # validates the path

    @property
    def filler(self) -> Term:
        """Whatever currently sits at the hole position in root."""
        return subterm_at(self.root, self.hole)

    def binders_on_path(self) -> tuple[Var, ...]:
        out: list[Var] = []
        t = self.root
        for i in self.hole:
            out.extend(binders_into(t, i))
            t = child_at(t, i)
        return tuple(out)


def is_exact_value_slot(root: Term, p: Path) -> bool:
    if not p or p[-1] != 0:
        return False
    return isinstance(subterm_at(root, p[:-1]), (Cut, Sub))


def plug(ctx: Context, t: Term) -> Term:
    return _plug(ctx.root, ctx.hole, t)


def _plug(root: Term, p: Path, t: Term) -> Term:
    if is_exact_value_slot(root, p) and not is_value(t):
        # cut{L<v> > x} s becomes L<cut{v > x} s>; same for sub.
        sp = split(t)
        parent = subterm_at(root, p[:-1])
        hoisted = replug(Split(sp.spine, replace(parent, value=sp.head)))
        return replace_at(root, p[:-1], hoisted)
    return replace_at(root, p, t)


def freshen_path(root: Term, p: Path, avoid: frozenset[Var], supply: NameSupply) -> Term:
    """Rename binders along p that clash with `avoid`, consistently through
    their whole scope, leaving the tree otherwise identical."""
    if not p:
        return root
    i, rest = p[0], p[1:]
    t = root
    for binder in binders_into(t, i):
        if binder in avoid:
            nb = supply.fresh(binder)
            t = _rename_binder(t, i, binder, nb, supply)
    child = child_at(t, i)
    return replace_at(t, (i,), freshen_path(child, rest, avoid, supply))


def _rename_binder(t: Term, slot: int, binder: Var, nb: Var, supply: NameSupply) -> Term:
    body = child_at(t, slot)
    body = rename_free(body, binder, nb, supply)
    match t:
        case Lam():
            return replace(t, binder=nb, body=body)
        case Cut() | Sub():
            return replace(t, binder=nb, body=body)
        case Der():
            return replace(t, binder=nb, body=body)
        case Par(_, left, right, _):
            if binder == left:
                return replace(t, left=nb, body=body)
            assert binder == right
            return replace(t, right=nb, body=body)
    raise TypeError(f"no binder to rename in {type(t).__name__}")


def plug_avoid(ctx: Context, t: Term, supply: NameSupply | None = None) -> Term:
    if supply is None:
        supply = NameSupply.for_terms(ctx.root, t)
    root = freshen_path(ctx.root, ctx.hole, t.fv, supply)
    return _plug(root, ctx.hole, t)


def ctx_at(t: Term, p: Path) -> tuple[Context, Term]:
    return Context(t, p), subterm_at(t, p)


# ---- context predicates ----


def is_mul_context(ctx: Context) -> bool:
    t = ctx.root
    for i in ctx.hole:
        if isinstance(t, Bang):
            return False
        t = child_at(t, i)
    return True


def is_left_context(ctx: Context) -> bool:
    t = ctx.root
    for i in ctx.hole:
        match t:
            case Cut() | Sub() if i == 1:
                pass
            case Par() | Der() if i == 0:
                pass
            case _:
                return False
        t = child_at(t, i)
    return True


def is_value_context(ctx: Context) -> bool:
    """Hole inside a value: the root is itself a value (or the hole is the
    whole term). Deeper structure is unconstrained."""
    return ctx.hole == () or is_value(ctx.root)


def outer_leq(p: Path, q: Path) -> bool:
    """p encloses (or equals) q."""
    return len(p) <= len(q) and q[: len(p)] == p


def disjoint(p: Path, q: Path) -> bool:
    return not outer_leq(p, q) and not outer_leq(q, p)


# ---- dominating free variables ----


def dfv(ctx: Context) -> frozenset[Var]:
    """Free variables of the context that dominate the hole: the ones whose
    replacement by a box could erase or duplicate the hole's content."""
    return _dfv(ctx.root, ctx.hole)


def _dfv(t: Term, p: Path) -> frozenset[Var]:
    if not p:
        return frozenset()
    i, rest = p[0], p[1:]
    match t, i:
        case (Pair(left, _), 0):
            return _dfv(left, rest)
        case (Pair(_, right), 1):
            return _dfv(right, rest)
        case (Lam(binder, body, _), 0):
            return _dfv(body, rest) - {binder}
        case (Bang(body), 0):
            return _dfv(body, rest)
        case (Cut(value, _, _), 0):
            return _dfv(value, rest)
        case (Cut(_, binder, body), 1):
            return _dfv(body, rest) - {binder}
        case (Par(conclusion, left, right, body), 0):
            d = _dfv(body, rest)
            if left in d or right in d:
                return (d - {left, right}) | {conclusion}
            return d
        case (Sub(conclusion, value, _, _), 0):
            return _dfv(value, rest) | {conclusion}
        case (Sub(conclusion, _, binder, body), 1):
            d = _dfv(body, rest)
            if binder in d:
                return (d - {binder}) | {conclusion}
            return d
        case (Der(conclusion, binder, body), 0):
            d = _dfv(body, rest)
            if binder in d:
                return (d - {binder}) | {conclusion}
            return d
    raise PathError(f"no slot {i} in a {type(t).__name__}")


# ---- good and bad positions ----


class Classification(Enum):
    GOOD = "good"
    BAD = "bad"


def classify(ctx: Context) -> Classification:
    """A position is bad when it sits in the value slot of a cut (boxes may
    pile up there) or under a cut whose binder dominates it (the step could
    be duplicated or erased by the cut); good otherwise."""
    t = ctx.root
    p = ctx.hole
    for k, i in enumerate(p):
        match t:
            case Cut(_, binder, body):
                if i == 0:
                    return Classification.BAD
                if binder in _dfv(body, p[k + 1 :]):
                    return Classification.BAD
        t = child_at(t, i)
    return Classification.GOOD


def is_good(ctx: Context) -> bool:
    return classify(ctx) is Classification.GOOD
