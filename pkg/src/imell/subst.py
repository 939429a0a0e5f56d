"""Meta-level substitution of an exponential value for an exponential
variable, the small-step contraction of an exponential cut.

The interesting clause is a dereliction whose conclusion is the substituted
variable. Substituting a variable just renames the conclusion; substituting
a box !u with u = spine<v> opens it:

    {!spine<v> / e} der{e > x} t  =  spine< cut{v > x} {!spine<v> / e} t >

Each inserted copy is refreshed so binders stay globally distinct.
"""

from __future__ import annotations


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
    is_exp_value,
    refresh,
    rename_free,
    replug,
    split,
)


def subst_exp(t: Term, e: Var, v: Term, supply: NameSupply | None = None) -> Term:
    """Capture-avoiding {v/e}t for an exponential variable e and exponential
    value v (a variable or a box). Occurrences of e strictly inside t get a
    fresh copy of v each."""
    if not e.is_exp:
        raise ValueError(f"{e} is not exponential")
    if not is_exp_value(v):
        raise ValueError("substituend must be an exponential value")
    if supply is None:
        supply = NameSupply.for_terms(t, v)
    return _go(t, e, v, supply)


def _dodge(binder: Var, body: Term, avoid: frozenset[Var], supply: NameSupply) -> tuple[Var, Term]:
    if binder in avoid:
        nb = supply.fresh(binder)
        return nb, rename_free(body, binder, nb, supply)
    return binder, body


def _go(t: Term, e: Var, v: Term, supply: NameSupply) -> Term:
    if e not in t.fv:
        return t
    avoid = v.fv
    match t:
        case Var():
            return refresh(v, supply) if isinstance(v, Bang) else v
        case Pair(left, right):
            return Pair(_go(left, e, v, supply), _go(right, e, v, supply))
        case Lam(binder, body, annot):
            binder, body = _dodge(binder, body, avoid, supply)
            return Lam(binder, _go(body, e, v, supply), annot)
        case Bang(body):
            return Bang(_go(body, e, v, supply))
        case Cut(value, binder, body):
            nv = _go(value, e, v, supply)
            if binder == e:
                return Cut(nv, binder, body)
            binder, body = _dodge(binder, body, avoid, supply)
            return Cut(nv, binder, _go(body, e, v, supply))
        case Par(conclusion, left, right, body):
            # e free in the par and distinct from its mul conclusion, so it
            # comes from the body and is not one of the binders.
            left, body = _dodge(left, body, avoid, supply)
            right, body = _dodge(right, body, avoid, supply)
            return Par(conclusion, left, right, _go(body, e, v, supply))
        case Sub(conclusion, value, binder, body):
            nv = _go(value, e, v, supply)
            if binder == e:
                return Sub(conclusion, nv, binder, body)
            binder, body = _dodge(binder, body, avoid, supply)
            return Sub(conclusion, nv, binder, _go(body, e, v, supply))
        case Der(conclusion, binder, body):
            if conclusion != e:
                binder, body = _dodge(binder, body, avoid, supply)
                return Der(conclusion, binder, _go(body, e, v, supply))
            if isinstance(v, Var):
                if binder == e:
                    return Der(v, binder, body)
                binder, body = _dodge(binder, body, avoid, supply)
                return Der(v, binder, _go(body, e, v, supply))
            # Box: open a fresh copy around a cut on the der binder.
            if binder == e:
                rest = body
            else:
                binder, body = _dodge(binder, body, avoid, supply)
                rest = _go(body, e, v, supply)
            assert isinstance(v, Bang)
            sp = split(refresh(v.body, supply))
            return replug(Split(sp.spine, Cut(sp.head, binder, rest)))
    raise TypeError(f"not a term: {t!r}")
