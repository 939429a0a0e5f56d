"""Cut equivalence: the congruence closure of moving a cut across a
multiplicative context that contains no occurrence of its variable.

    cut{v > x} M<u>  ~  M<cut{v > x} u>      x not free in M, M no box,
                                             M captures neither x nor fv(v)

Capture conditions are discharged by renaming (the cut binder, or the
context binders), never by refusing a move, so the explored class is the
whole equivalence class up to alpha. Moves preserve size, hence the class
is finite and breadth-first search decides the relation.
"""

from __future__ import annotations

from typing import Iterator

from .contexts import (
    Context,
    Path,
    binders_into,
    child_at,
    is_exact_value_slot,
    plug,
    positions,
    replace_at,
    subterm_at,
)
from .terms import (
    Bang,
    Cut,
    NameSupply,
    Term,
    Var,
    alpha_key,
    rename_free,
)
from .contexts import freshen_path

_MARK = Var("g#mark", Var.of("g").kind)


def _path_info(root: Term, q: Path) -> tuple[bool, tuple[Var, ...]]:
    """(crosses a bang, binders seen) walking q from root."""
    banged = False
    binders: list[Var] = []
    t = root
    for i in q:
        if isinstance(t, Bang):
            banged = True
        binders.extend(binders_into(t, i))
        t = child_at(t, i)
    return banged, tuple(binders)


def _fv_outside(root: Term, q: Path) -> frozenset[Var]:
    """Free variables of root once the subtree at q is masked out."""
    return replace_at(root, q, _MARK).fv - {_MARK}


def cuteq_moves(t: Term) -> Iterator[Term]:
    """Every term reachable by one ~cut instance, either direction, at any
    position."""
    supply = NameSupply.for_terms(t)
    supply.take(_MARK.name)
    for p, s in positions(t):
        if not isinstance(s, Cut):
            continue
        yield from _sinks(t, p, s, supply)
        yield from _hoists(t, p, s, supply)


def _sinks(t: Term, p: Path, cut: Cut, supply: NameSupply) -> Iterator[Term]:
    v, x, body = cut.value, cut.binder, cut.body
    for q, _u in positions(body):
        if not q:
            continue
        banged, binders = _path_info(body, q)
        if banged:
            continue
        if x in _fv_outside(body, q):
            continue  # an occurrence of x would fall out of scope
        x2, body2 = x, body
        if x in binders:
            # a shadowing binder inside M: rename the cut's own variable
            x2 = supply.fresh(x)
            body2 = rename_free(body, x, x2, supply)
        body2 = freshen_path(body2, q, v.fv, supply)
        u = subterm_at(body2, q)
        new_body = plug(Context(body2, q), Cut(v, x2, u))
        yield replace_at(t, p, new_body)


def _hoists(t: Term, p: Path, cut: Cut, supply: NameSupply) -> Iterator[Term]:
    v, x, body = cut.value, cut.binder, cut.body
    for cut_from_top in range(len(p)):
        a = p[:cut_from_top]
        q = p[cut_from_top:]
        if is_exact_value_slot(t, a):
            continue  # a cut cannot live in a value slot; a longer hoist covers it
        sub_a = subterm_at(t, a)
        banged, binders = _path_info(sub_a, q)
        if banged:
            continue
        if any(b in v.fv for b in binders):
            # the value genuinely depends on a context binder: no instance
            continue
        x2, body2 = x, body
        fv_m = _fv_outside(sub_a, q)
        if x2 in fv_m or x2 in binders:
            nx = supply.fresh(x2)
            body2 = rename_free(body2, x2, nx, supply)
            x2 = nx
        hull = replace_at(sub_a, q, body2)
        yield replace_at(t, a, Cut(v, x2, hull))


def cut_class(t: Term, max_class: int = 50000) -> dict[str, Term]:
    """Alpha-keyed members of t's cut-equivalence class."""
    seen = {alpha_key(t): t}
    frontier = [t]
    while frontier:
        nxt: list[Term] = []
        for u in frontier:
            for s in cuteq_moves(u):
                k = alpha_key(s)
                if k not in seen:
                    if len(seen) >= max_class:
                        raise RuntimeError(f"cut class exceeds {max_class} terms")
                    seen[k] = s
                    nxt.append(s)
        frontier = nxt
    return seen


def cut_equiv(t: Term, s: Term, max_class: int = 50000) -> bool:
    """Same cut-equivalence class. Size is invariant under the moves, so
    unequal sizes answer immediately; otherwise search t's class."""
    if alpha_key(t) == alpha_key(s):
        return True
    if t.size != s.size:
        return False
    want = alpha_key(s)
    seen = {alpha_key(t)}
    frontier = [t]
    while frontier:
        nxt: list[Term] = []
        for u in frontier:
            for r in cuteq_moves(u):
                k = alpha_key(r)
                if k == want:
                    return True
                if k not in seen:
                    if len(seen) >= max_class:
                        raise RuntimeError(f"cut class exceeds {max_class} terms")
                    seen.add(k)
                    nxt.append(r)
        frontier = nxt
    return False
