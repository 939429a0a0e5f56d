"""Proof terms with explicit cuts, at-a-distance style.

The grammar has two kinds of variables. Multiplicative variables are linear:
a proper term uses each free one exactly once. Exponential variables name
boxes and may occur any number of times. Values are the cut-free heads
(variable, pair, lambda, bang); the value slot of a cut or an explicit
substitution only ever holds a value, which the constructors enforce.

Binding summary:
    Lam(x, b)          x bound in b
    Cut(v, x, b)       x bound in b (not in v)
    Par(m, x, y, b)    m free (a use of m), x and y bound in b
    Sub(m, v, x, b)    m free, x bound in b (not in v)
    Der(e, x, b)       e free, x bound in b

Conclusion occurrences (the m in Par/Sub, the e in Der) count as free
occurrences of those variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterator, NamedTuple, Optional


class Kind(Enum):
    MUL = "mul"
    EXP = "exp"


# Surface convention: names starting with e, f or g are exponential, all
# others multiplicative. The AST stores the kind explicitly; the constructor
# just refuses names that would print back with the wrong kind.
_EXP_INITIALS = "efg"


def kind_of_name(name: str) -> Kind:
    return Kind.EXP if name[:1] in _EXP_INITIALS else Kind.MUL


class Term:
    """Base class; see the subclasses below for the actual grammar."""

    __slots__ = ()

    @property
    def fv(self) -> frozenset[Var]:
        got = self.__dict__.get("_fv")
        if got is None:
            got = _compute_fv(self)
            object.__setattr__(self, "_fv", got)
        return got

    @property
    def size(self) -> int:
        got = self.__dict__.get("_size")
        if got is None:
            got = _compute_size(self)
            object.__setattr__(self, "_size", got)
        return got


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str
    kind: Kind

    def __post_init__(self) -> None:
        if not name_ok(self.name):
            raise ValueError(f"bad variable name {self.name!r}")
        if kind_of_name(self.name) is not self.kind:
            raise ValueError(
                f"variable {self.name!r} declared {self.kind.value} but its "
                f"first letter says {kind_of_name(self.name).value}"
            )

    @staticmethod
    def of(name: str) -> Var:
        return Var(name, kind_of_name(name))

    @property
    def is_mul(self) -> bool:
        return self.kind is Kind.MUL

    @property
    def is_exp(self) -> bool:
        return self.kind is Kind.EXP

    def __str__(self) -> str:
        return self.name


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_'#]*$")


def name_ok(name: str) -> bool:
    return bool(_NAME_RE.match(name))


def mvar(name: str) -> Var:
    v = Var.of(name)
    if not v.is_mul:
        raise ValueError(f"{name!r} names an exponential variable")
    return v


def evar(name: str) -> Var:
    v = Var.of(name)
    if not v.is_exp:
        raise ValueError(f"{name!r} names a multiplicative variable")
    return v


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Lam(Term):
    binder: Var
    body: Term
    annot: object = None  # optional Formula; ignored by alpha_eq and rewriting


@dataclass(frozen=True)
class Bang(Term):
    body: Term


@dataclass(frozen=True)
class Cut(Term):
    value: Term
    binder: Var
    body: Term

    def __post_init__(self) -> None:
        if not is_value(self.value):
            raise ValueError("cut value slot holds a non-value; split first")


@dataclass(frozen=True)
class Par(Term):
    conclusion: Var
    left: Var
    right: Var
    body: Term

    def __post_init__(self) -> None:
        if not self.conclusion.is_mul:
            raise ValueError(f"par conclusion {self.conclusion} must be multiplicative")


@dataclass(frozen=True)
class Sub(Term):
    conclusion: Var
    value: Term
    binder: Var
    body: Term

    def __post_init__(self) -> None:
        if not self.conclusion.is_mul:
            raise ValueError(f"sub conclusion {self.conclusion} must be multiplicative")
        if not is_value(self.value):
            raise ValueError("sub value slot holds a non-value; split first")


@dataclass(frozen=True)
class Der(Term):
    conclusion: Var
    binder: Var
    body: Term

    def __post_init__(self) -> None:
        if not self.conclusion.is_exp:
            raise ValueError(f"der conclusion {self.conclusion} must be exponential")


def is_value(t: Term) -> bool:
    return isinstance(t, (Var, Pair, Lam, Bang))


def is_mul_value(t: Term) -> bool:
    if isinstance(t, Var):
        return t.is_mul
    return isinstance(t, (Pair, Lam))


def is_exp_value(t: Term) -> bool:
    if isinstance(t, Var):
        return t.is_exp
    return isinstance(t, Bang)


# ---- free variables, occurrences, size ----


def _compute_fv(t: Term) -> frozenset[Var]:
    match t:
        case Var():
            return frozenset((t,))
        case Pair(left, right):
            return left.fv | right.fv
        case Lam(binder, body, _):
            return body.fv - {binder}
        case Bang(body):
            return body.fv
        case Cut(value, binder, body):
            return value.fv | (body.fv - {binder})
        case Par(conclusion, left, right, body):
            return (body.fv - {left, right}) | {conclusion}
        case Sub(conclusion, value, binder, body):
            return value.fv | (body.fv - {binder}) | {conclusion}
        case Der(conclusion, binder, body):
            return (body.fv - {binder}) | {conclusion}
    raise TypeError(f"not a term: {t!r}")


def _compute_size(t: Term) -> int:
    # Conclusion occurrences count as nodes, so par/der cost 2 plus the body.
    match t:
        case Var():
            return 1
        case Pair(left, right):
            return 1 + left.size + right.size
        case Lam(_, body, _):
            return 1 + body.size
        case Bang(body):
            return 1 + body.size
        case Cut(value, _, body):
            return 1 + value.size + body.size
        case Par(_, _, _, body):
            return 2 + body.size
        case Sub(_, value, _, body):
            return 2 + value.size + body.size
        case Der(_, _, body):
            return 2 + body.size
    raise TypeError(f"not a term: {t!r}")


class FreeVars(NamedTuple):
    all: frozenset[Var]
    mul: frozenset[Var]
    exp: frozenset[Var]


def free_vars(t: Term) -> FreeVars:
    fv = t.fv
    mul = frozenset(v for v in fv if v.is_mul)
    return FreeVars(fv, mul, fv - mul)


def mfv(t: Term) -> frozenset[Var]:
    return frozenset(v for v in t.fv if v.is_mul)


def occ_count(t: Term, x: Var) -> int:
    """Number of free occurrences of x in t, conclusions included."""
    if x not in t.fv:
        return 0
    match t:
        case Var():
            return 1 if t == x else 0
        case Pair(left, right):
            return occ_count(left, x) + occ_count(right, x)
        case Lam(binder, body, _):
            return 0 if binder == x else occ_count(body, x)
        case Bang(body):
            return occ_count(body, x)
        case Cut(value, binder, body):
            n = occ_count(value, x)
            if binder != x:
                n += occ_count(body, x)
            return n
        case Par(conclusion, left, right, body):
            n = 1 if conclusion == x else 0
            if x not in (left, right):
                n += occ_count(body, x)
            return n
        case Sub(conclusion, value, binder, body):
            n = (1 if conclusion == x else 0) + occ_count(value, x)
            if binder != x:
                n += occ_count(body, x)
            return n
        case Der(conclusion, binder, body):
            n = 1 if conclusion == x else 0
            if binder != x:
                n += occ_count(body, x)
            return n
    raise TypeError(f"not a term: {t!r}")


def size(t: Term) -> int:
    return t.size


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order traversal, the term itself first."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        match s:
            case Pair(left, right):
                stack.append(right)
                stack.append(left)
            case Lam(_, body, _) | Bang(body) | Par(_, _, _, body) | Der(_, _, body):
                stack.append(body)
            case Cut(value, _, body) | Sub(_, value, _, body):
                stack.append(body)
                stack.append(value)


# ---- alpha equivalence ----


def alpha_key(t: Term) -> str:
    """Canonical string: equal iff alpha-equivalent (annotations ignored).

    Bound variables become de Bruijn-style levels, free ones keep their
    names. Cached on the node, so graph exploration can key on it cheaply.
    """
    got = t.__dict__.get("_akey")
    if got is None:
        parts: list[str] = []
        _akey(t, {}, [0], parts)
        got = "".join(parts)
        object.__setattr__(t, "_akey", got)
    return got


def _akey(t: Term, env: dict[Var, str], counter: list[int], out: list[str]) -> None:
    def occ(v: Var) -> str:
        return env.get(v, v.name)

    def bind(v: Var, env2: dict[Var, str]) -> str:
        lvl = f"%{counter[0]}"
        counter[0] += 1
        env2[v] = lvl
        return "m" + lvl if v.is_mul else "e" + lvl

    match t:
        case Var():
            out.append(occ(t))
        case Pair(left, right):
            out.append("(")
            _akey(left, env, counter, out)
            out.append(",")
            _akey(right, env, counter, out)
            out.append(")")
        case Lam(binder, body, _):
            env2 = dict(env)
            out.append("\\" + bind(binder, env2) + ".")
            _akey(body, env2, counter, out)
        case Bang(body):
            out.append("!")
            _akey(body, env, counter, out)
        case Cut(value, binder, body):
            out.append("c{")
            _akey(value, env, counter, out)
            env2 = dict(env)
            out.append(">" + bind(binder, env2) + "}")
            _akey(body, env2, counter, out)
        case Par(conclusion, left, right, body):
            env2 = dict(env)
            out.append("p{" + occ(conclusion) + ">" + bind(left, env2))
            out.append("," + bind(right, env2) + "}")
            _akey(body, env2, counter, out)
        case Sub(conclusion, value, binder, body):
            out.append("s{" + occ(conclusion) + ";")
            _akey(value, env, counter, out)
            env2 = dict(env)
            out.append(">" + bind(binder, env2) + "}")
            _akey(body, env2, counter, out)
        case Der(conclusion, binder, body):
            env2 = dict(env)
            out.append("d{" + occ(conclusion) + ">" + bind(binder, env2) + "}")
            _akey(body, env2, counter, out)
        case _:
            raise TypeError(f"not a term: {t!r}")


def alpha_eq(t: Term, s: Term) -> bool:
    return t is s or alpha_key(t) == alpha_key(s)


# ---- name supply and renaming ----


def all_names(t: Term) -> set[str]:
    """Every variable name in t: free, bound, or conclusion."""
    names: set[str] = set()
    for s in subterms(t):
        match s:
            case Var(name, _):
                names.add(name)
            case Lam(binder, _, _):
                names.add(binder.name)
            case Cut(_, binder, _):
                names.add(binder.name)
            case Par(conclusion, left, right, _):
                names.update((conclusion.name, left.name, right.name))
            case Sub(conclusion, _, binder, _):
                names.update((conclusion.name, binder.name))
            case Der(conclusion, binder, _):
                names.update((conclusion.name, binder.name))
    return names


class NameSupply:
    """Fresh-name source. Strips a trailing number off the stem and counts up."""

    def __init__(self, taken: set[str] | None = None) -> None:
        self._taken = set(taken) if taken else set()
        self._next: dict[str, int] = {}

    @classmethod
    def for_terms(cls, *ts: Term) -> NameSupply:
        taken: set[str] = set()
        for t in ts:
            taken |= all_names(t)
        return cls(taken)

    def reserve(self, *ts: Term) -> None:
        for t in ts:
            self._taken |= all_names(t)

    def take(self, *names: str) -> None:
        self._taken.update(names)

    def fresh(self, like: Var) -> Var:
        stem = re.sub(r"\d+$", "", like.name) or like.name
        i = self._next.get(stem, 1)
        while f"{stem}{i}" in self._taken:
            i += 1
        self._next[stem] = i + 1
        name = f"{stem}{i}"
        self._taken.add(name)
        return Var(name, like.kind)


def refresh(t: Term, supply: NameSupply) -> Term:
    """Rename every binder in t to a fresh name (free vars untouched)."""

    def go(t: Term, env: dict[Var, Var]) -> Term:
        match t:
            case Var():
                return env.get(t, t)
            case Pair(left, right):
                return Pair(go(left, env), go(right, env))
            case Lam(binder, body, annot):
                nb = supply.fresh(binder)
                return Lam(nb, go(body, {**env, binder: nb}), annot)
            case Bang(body):
                return Bang(go(body, env))
            case Cut(value, binder, body):
                nb = supply.fresh(binder)
                return Cut(go(value, env), nb, go(body, {**env, binder: nb}))
            case Par(conclusion, left, right, body):
                nl, nr = supply.fresh(left), supply.fresh(right)
                return Par(
                    env.get(conclusion, conclusion),
                    nl,
                    nr,
                    go(body, {**env, left: nl, right: nr}),
                )
            case Sub(conclusion, value, binder, body):
                nb = supply.fresh(binder)
                return Sub(
                    env.get(conclusion, conclusion),
                    go(value, env),
                    nb,
                    go(body, {**env, binder: nb}),
                )
            case Der(conclusion, binder, body):
                nb = supply.fresh(binder)
                return Der(
                    env.get(conclusion, conclusion),
                    nb,
                    go(body, {**env, binder: nb}),
                )
        raise TypeError(f"not a term: {t!r}")

    return go(t, {})


def rename_free(t: Term, old: Var, new: Var, supply: NameSupply | None = None) -> Term:
    """Replace free occurrences of old by new, renaming binders that would
    capture the new name."""
    if old.kind is not new.kind:
        raise ValueError(f"kind mismatch renaming {old} to {new}")
    if old == new or old not in t.fv:
        return t
    if supply is None:
        supply = NameSupply.for_terms(t)
        supply.take(new.name)

    def dodge(binder: Var, body: Term) -> tuple[Var, Term]:
        # Binder equal to `new` would capture the occurrences we create.
        if binder == new and old in body.fv:
            nb = supply.fresh(binder)
            return nb, rename_free(body, binder, nb, supply)
        return binder, body

    def go(t: Term) -> Term:
        if old not in t.fv:
            return t
        match t:
            case Var():
                return new if t == old else t
            case Pair(left, right):
                return Pair(go(left), go(right))
            case Lam(binder, body, annot):
                binder, body = dodge(binder, body)
                return Lam(binder, go(body), annot)
            case Bang(body):
                return Bang(go(body))
            case Cut(value, binder, body):
                nv = go(value)
                if binder == old:
                    return Cut(nv, binder, body)
                binder, body = dodge(binder, body)
                return Cut(nv, binder, go(body))
            case Par(conclusion, left, right, body):
                nc = new if conclusion == old else conclusion
                if old in (left, right):
                    return Par(nc, left, right, body)
                left, body = dodge(left, body)
                right, body = dodge(right, body)
                return Par(nc, left, right, go(body))
            case Sub(conclusion, value, binder, body):
                nc = new if conclusion == old else conclusion
                nv = go(value)
                if binder == old:
                    return Sub(nc, nv, binder, body)
                binder, body = dodge(binder, body)
                return Sub(nc, nv, binder, go(body))
            case Der(conclusion, binder, body):
                nc = new if conclusion == old else conclusion
                if binder == old:
                    return Der(nc, binder, body)
                binder, body = dodge(binder, body)
                return Der(nc, binder, go(body))
        raise TypeError(f"not a term: {t!r}")

    return go(t)


def rename_mul(t: Term, old: Var, new: Var) -> Term:
    if not (old.is_mul and new.is_mul):
        raise ValueError("rename_mul wants two multiplicative variables")
    return rename_free(t, old, new)


# ---- left splitting ----


class Split(NamedTuple):
    """t written as a stack of spine frames around a value head.

    Every term splits uniquely: peel cut/par/sub/der bodies until a value.
    """

    spine: tuple[Term, ...]
    head: Term


def split(t: Term) -> Split:
    frames: list[Term] = []
    while isinstance(t, (Cut, Par, Sub, Der)):
        frames.append(t)
        t = t.body
    assert is_value(t)
    return Split(tuple(frames), t)


def replug(sp: Split) -> Term:
    t = sp.head
    for frame in reversed(sp.spine):
        t = replace(frame, body=t)
    return t


# ---- properness ----


def check_proper(t: Term) -> Optional[str]:
    """None if t is proper, else a message naming the violated clause."""
    try:
        _check_proper(t)
        return None
    except _Improper as exc:
        return str(exc)


class _Improper(Exception):
    pass


def _check_proper(t: Term) -> None:
    match t:
        case Var():
            return
        case Pair(left, right):
            _check_proper(left)
            _check_proper(right)
            shared = mfv(left) & mfv(right)
            if shared:
                raise _Improper(
                    f"pair components share multiplicative variable(s) "
                    f"{_names(shared)} in {_brief(t)}"
                )
        case Lam(binder, body, _):
            _check_proper(body)
            if binder.is_mul and binder not in body.fv:
                raise _Improper(f"lambda binder {binder} unused in {_brief(t)}")
        case Bang(body):
            _check_proper(body)
            if mfv(body):
                raise _Improper(
                    f"bang body has free multiplicative variable(s) "
                    f"{_names(mfv(body))} in {_brief(t)}"
                )
        case Cut(value, binder, body):
            _check_proper(value)
            _check_proper(body)
            shared = mfv(value) & (mfv(body) - {binder})
            if shared:
                raise _Improper(
                    f"cut value and body share multiplicative variable(s) "
                    f"{_names(shared)} in {_brief(t)}"
                )
            if binder.is_mul and binder not in body.fv:
                raise _Improper(f"cut binder {binder} unused in {_brief(t)}")
        case Par(conclusion, left, right, body):
            _check_proper(body)
            if conclusion in mfv(body) - {left, right}:
                raise _Improper(
                    f"par conclusion {conclusion} reused in its body in {_brief(t)}"
                )
            for b in (left, right):
                if b.is_mul and b not in body.fv:
                    raise _Improper(f"par binder {b} unused in {_brief(t)}")
        case Sub(conclusion, value, binder, body):
            _check_proper(value)
            _check_proper(body)
            shared = mfv(value) & (mfv(body) - {binder})
            if shared:
                raise _Improper(
                    f"sub value and body share multiplicative variable(s) "
                    f"{_names(shared)} in {_brief(t)}"
                )
            if conclusion in mfv(body):
                raise _Improper(
                    f"sub conclusion {conclusion} reused in its body in {_brief(t)}"
                )
            if binder.is_mul and binder not in body.fv:
                raise _Improper(f"sub binder {binder} unused in {_brief(t)}")
        case Der(_, binder, body):
            _check_proper(body)
            if binder.is_mul and binder not in body.fv:
                raise _Improper(f"der binder {binder} unused in {_brief(t)}")
        case _:
            raise TypeError(f"not a term: {t!r}")


def is_proper(t: Term) -> bool:
    return check_proper(t) is None


def _names(vs: frozenset[Var]) -> str:
    return ", ".join(sorted(v.name for v in vs))


def _brief(t: Term) -> str:
    key = alpha_key(t)
    return key if len(key) <= 40 else key[:37] + "..."
