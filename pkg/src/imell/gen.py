"""Term generators: random typed, random proper untyped, spindle chains, omega.

The typed generator grows a pool of typing derivations from axioms,
applying one inference rule per round, so every output is correct by
construction.  Formulas are drawn from a small palette so that cut
partners with matching types actually show up in the pool.

The spindle family is a chain of boxes each reading its predecessor
twice:

    b(e)  = !(der{e>m} der{e>n} (m,n))
    rho_1 = b(e1)
    rho_{k+1} = L<cut{v > e_{k+1}} b(e_{k+1})>   where rho_k = L<v>

Its normal form doubles in size at every level while the chain itself
grows by a constant, which makes it the standard stress test for
duplication accounting.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from . import formulas as fm
from . import surface
from . import terms as tm

__all__ = [
    "gen_typed",
    "gen_untyped_proper",
    "gen_spindle",
    "gen_omega",
]


# ---------------------------------------------------------------- typed

_ATOMS = ("X", "Y", "Z")


def _palette() -> list[fm.Formula]:
    """Small closed set of formulas; collisions make cuts easy to form."""
    atoms = [fm.Atom(a) for a in _ATOMS]
    pool: list[fm.Formula] = list(atoms)
    pool += [fm.Tensor(atoms[0], atoms[1]), fm.Tensor(atoms[0], atoms[0])]
    pool += [fm.Lolli(atoms[0], atoms[1]), fm.Lolli(atoms[1], atoms[0])]
    pool += [fm.Bang(atoms[0]), fm.Bang(atoms[2])]
    pool.append(fm.Bang(fm.Lolli(atoms[0], atoms[0])))
    pool.append(fm.Tensor(fm.Bang(atoms[0]), atoms[1]))
    return pool


@dataclass
class _Deriv:
    """One pool entry: ctx |- term : typ, multiplicatives used linearly."""

    ctx: dict[tm.Var, fm.Formula]
    term: tm.Term
    typ: fm.Formula


class _TypedGen:
    def __init__(self, seed: int, budget: int) -> None:
        self.rng = random.Random(f"typed:{seed}")
        self.budget = budget
        self.pool: list[_Deriv] = []
        self.palette = _palette()
        self._mul = 0
        self._exp = 0

    def fresh_mul(self) -> tm.Var:
        self._mul += 1
        return tm.mvar(f"m{self._mul}")

    def fresh_exp(self) -> tm.Var:
        self._exp += 1
        return tm.evar(f"e{self._exp}")

    def fresh_for(self, f: fm.Formula) -> tm.Var:
        return self.fresh_exp() if fm.is_bang(f) else self.fresh_mul()

    def sample_formula(self, bang_ok: bool = True) -> fm.Formula:
        while True:
            f = self.rng.choice(self.palette)
            if bang_ok or not fm.is_bang(f):
                return f

    # -- rule applications; None means the rule does not apply this round.
    # Premises are consumed on success so no context variable ever sits in
    # two pool entries at once (combining rules would otherwise duplicate
    # linear variables).

    def rule_axiom(self) -> _Deriv:
        f = self.sample_formula()
        x = self.fresh_for(f)
        return _Deriv({x: f}, x, f)

    def peek(self) -> Optional[int]:
        if not self.pool:
            return None
        return self.rng.randrange(len(self.pool))

    def peek2(self) -> Optional[tuple[int, int]]:
        if len(self.pool) < 2:
            return None
        i, j = self.rng.sample(range(len(self.pool)), 2)
        return i, j

    def consume(self, *idxs: int) -> None:
        for i in sorted(idxs, reverse=True):
            del self.pool[i]

    def rule_tensor(self) -> Optional[_Deriv]:
        picked = self.peek2()
        if picked is None:
            return None
        i, j = picked
        d1, d2 = self.pool[i], self.pool[j]
        self.consume(i, j)
        return _Deriv(
            {**d1.ctx, **d2.ctx},
            tm.Pair(d1.term, d2.term),
            fm.Tensor(d1.typ, d2.typ),
        )

    def rule_lolli(self) -> Optional[_Deriv]:
        i = self.peek()
        if i is None or not self.pool[i].ctx:
            return None
        d = self.pool[i]
        x = self.rng.choice(list(d.ctx))
        if x.is_exp and x not in d.term.fv:
            return None  # abstracting a dead exponential loses the redex anyway
        self.consume(i)
        ctx = dict(d.ctx)
        annot = ctx.pop(x)
        return _Deriv(ctx, tm.Lam(x, d.term, annot), fm.Lolli(annot, d.typ))

    def rule_bang(self) -> Optional[_Deriv]:
        i = self.peek()
        if i is None or any(x.is_mul for x in self.pool[i].ctx):
            return None
        d = self.pool[i]
        self.consume(i)
        return _Deriv(dict(d.ctx), tm.Bang(d.term), fm.Bang(d.typ))

    def rule_par(self) -> Optional[_Deriv]:
        i = self.peek()
        if i is None or len(self.pool[i].ctx) < 2:
            return None
        d = self.pool[i]
        self.consume(i)
        x, y = self.rng.sample(list(d.ctx), 2)
        ctx = dict(d.ctx)
        a, b = ctx.pop(x), ctx.pop(y)
        o = self.fresh_mul()
        ctx[o] = fm.Tensor(a, b)
        return _Deriv(ctx, tm.Par(o, x, y, d.term), d.typ)

    def rule_der(self) -> Optional[_Deriv]:
        i = self.peek()
        if i is None or not self.pool[i].ctx:
            return None
        d = self.pool[i]
        self.consume(i)
        x = self.rng.choice(list(d.ctx))
        ctx = dict(d.ctx)
        a = ctx.pop(x)
        e = self.fresh_exp()
        ctx[e] = fm.Bang(a)
        return _Deriv(ctx, tm.Der(e, x, d.term), d.typ)

    def rule_sub(self) -> Optional[_Deriv]:
        picked = self.peek2()
        if picked is None:
            return None
        i, j = picked
        dv, dt = self.pool[i], self.pool[j]
        if not tm.is_value(dv.term) or not dt.ctx:
            return None
        self.consume(i, j)
        x = self.rng.choice(list(dt.ctx))
        ctx = dict(dt.ctx)
        b = ctx.pop(x)
        m = self.fresh_mul()
        ctx.update(dv.ctx)
        ctx[m] = fm.Lolli(dv.typ, b)
        return _Deriv(ctx, tm.Sub(m, dv.term, x, dt.term), dt.typ)

    def rule_cut(self) -> Optional[_Deriv]:
        i = self.peek()
        if i is None or not tm.is_value(self.pool[i].term):
            return None
        dv = self.pool[i]
        partners = [
            (j, x)
            for j, d in enumerate(self.pool)
            if j != i
            for x, f in d.ctx.items()
            if f == dv.typ
        ]
        if partners:
            j, x = self.rng.choice(partners)
            dt = self.pool[j]
            self.consume(i, j)
            ctx = {**dv.ctx, **{y: f for y, f in dt.ctx.items() if y != x}}
            return _Deriv(ctx, tm.Cut(dv.term, x, dt.term), dt.typ)
        # no partner in the pool: cut against a matching axiom
        self.consume(i)
        f = dv.typ
        if fm.is_bang(f):
            e, x = self.fresh_exp(), self.fresh_for(f.body)
            return _Deriv(dict(dv.ctx), tm.Cut(dv.term, e, tm.Der(e, x, x)), f.body)
        m = self.fresh_mul()
        return _Deriv(dict(dv.ctx), tm.Cut(dv.term, m, m), f)

    def rule_weaken(self) -> Optional[_Deriv]:
        i = self.peek()
        if i is None:
            return None
        d = self.pool[i]
        self.consume(i)
        e = self.fresh_exp()
        ctx = dict(d.ctx)
        ctx[e] = fm.Bang(self.sample_formula(bang_ok=False))
        return _Deriv(ctx, d.term, d.typ)

    def rule_contract(self) -> Optional[_Deriv]:
        i = self.peek()
        if i is None:
            return None
        d = self.pool[i]
        by_type: dict[fm.Formula, list[tm.Var]] = {}
        for x, f in d.ctx.items():
            if x.is_exp:
                by_type.setdefault(f, []).append(x)
        mergeable = [vs for vs in by_type.values() if len(vs) >= 2]
        if not mergeable:
            return None
        self.consume(i)
        e, f_ = self.rng.choice(mergeable)[:2]
        ctx = {x: f for x, f in d.ctx.items() if x != f_}
        return _Deriv(ctx, tm.rename_free(d.term, f_, e), d.typ)

    _WEIGHTED = (
        ("axiom", 4),
        ("tensor", 3),
        ("lolli", 2),
        ("bang", 3),
        ("par", 2),
        ("der", 3),
        ("sub", 2),
        ("cut", 5),
        ("weaken", 1),
        ("contract", 2),
    )

    def run(self) -> _Deriv:
        best: Optional[_Deriv] = None
        names = [n for n, _ in self._WEIGHTED]
        weights = [w for _, w in self._WEIGHTED]
        rounds = max(40, self.budget * 6)
        for _ in range(rounds):
            rule = self.rng.choices(names, weights)[0]
            before = list(self.pool)
            made: Optional[_Deriv] = getattr(self, f"rule_{rule}")()
            if made is None:
                continue
            if tm.size(made.term) > self.budget:
                self.pool = before  # refund the consumed premises
                continue
            self.pool.append(made)
            if len(self.pool) > 24:
                self.pool.pop(0)
            if best is None or tm.size(made.term) > tm.size(best.term):
                best = made
        if best is None:
            best = self.rule_axiom()
        return best


def gen_typed(seed: int, size_budget: int) -> tuple[dict[tm.Var, fm.Formula], tm.Term]:
    """Random typable term with its typing context, deterministic per seed.

    Raises ValueError when the budget cannot fit even a lone axiom.
    """
    if size_budget < 1:
        raise ValueError(f"size budget {size_budget} cannot fit any derivation")
    g = _TypedGen(seed, size_budget)
    d = g.run()
    return d.ctx, d.term


# -------------------------------------------------------------- untyped

def _low(k: int) -> int:
    """Least size of a term using k given multiplicatives exactly once
    (a pair tree over the k occurrences, or a lone leaf for k = 0)."""
    return 1 if k == 0 else 2 * k - 1


class _UntypedGen:
    """Proper terms without types: kinds and shapes are unconstrained,
    so clashes and divergence can (and should) occur.

    Every recursive call keeps the invariant fuel >= _low(len(muls)),
    and each branch reserves the exact minimum the other side needs, so
    the result never exceeds the requested size.
    """

    def __init__(self, seed: int) -> None:
        self.rng = random.Random(f"untyped:{seed}")
        self._mul = 0
        self._exp = 0
        self.free_exp: list[tm.Var] = []

    def fresh_mul(self) -> tm.Var:
        self._mul += 1
        return tm.mvar(f"m{self._mul}")

    def fresh_exp(self) -> tm.Var:
        self._exp += 1
        return tm.evar(f"e{self._exp}")

    def exp_leaf(self, exps: list[tm.Var]) -> tm.Var:
        if exps and self.rng.random() < 0.6:
            return self.rng.choice(exps)
        if self.free_exp and self.rng.random() < 0.5:
            return self.rng.choice(self.free_exp)
        e = self.fresh_exp()
        self.free_exp.append(e)
        return e

    def split_muls(
        self, muls: list[tm.Var], left_nonempty: bool = False, right_nonempty: bool = False
    ) -> tuple[list[tm.Var], list[tm.Var]]:
        while True:
            left: list[tm.Var] = []
            right: list[tm.Var] = []
            for x in muls:
                (left if self.rng.random() < 0.5 else right).append(x)
            if left_nonempty and not left:
                continue
            if right_nonempty and not right:
                continue
            return left, right

    def value(self, muls: list[tm.Var], exps: list[tm.Var], fuel: int) -> tm.Term:
        k = len(muls)
        assert fuel >= _low(k)
        feasible = []
        if k <= 1:
            feasible.append("var")
        if k >= 2 or fuel >= 3:
            feasible.append("pair")
        if fuel >= 1 + _low(k + 1):
            feasible.append("lam_mul")
        if fuel >= 1 + _low(k):
            feasible.append("lam_exp")
        if k == 0 and fuel >= 2:
            feasible.append("bang")
        kind = self.rng.choice(feasible)
        if kind == "var":
            return muls[0] if k == 1 else self.exp_leaf(exps)
        if kind == "pair":
            # with fuel at the bare minimum both sides must carry muls
            tight = fuel < 2 * k + 1
            lm, rm = self.split_muls(muls, left_nonempty=tight, right_nonempty=tight)
            lf = self.rng.randint(_low(len(lm)), fuel - 1 - _low(len(rm)))
            left = self.term(lm, exps, lf)
            right = self.term(rm, exps, fuel - 1 - tm.size(left))
            return tm.Pair(left, right)
        if kind == "lam_mul":
            x = self.fresh_mul()
            return tm.Lam(x, self.term(muls + [x], exps, fuel - 1), None)
        if kind == "lam_exp":
            e = self.fresh_exp()
            return tm.Lam(e, self.term(muls, exps + [e], fuel - 1), None)
        return tm.Bang(self.term([], exps, fuel - 1))

    def term(self, muls: list[tm.Var], exps: list[tm.Var], fuel: int) -> tm.Term:
        k = len(muls)
        assert fuel >= _low(k)
        feasible = ["value", "value"]
        if k >= 1 and fuel >= 2 + _low(k + 1):
            feasible.append("par_mul")
        if k >= 1 and fuel >= 2 + _low(k):
            feasible.append("par_exp")
        if fuel >= 2 + _low(k + 1):
            feasible += ["der_mul", "der_mul"]
        if fuel >= 2 + _low(k):
            feasible.append("der_exp")
        if k >= 1 and fuel >= 3 + _low(k):
            feasible.append("sub")
        if fuel >= 2 + _low(k + 1):
            feasible += ["cut_mul", "cut_mul"]
        if fuel >= 2 + _low(k):
            feasible += ["cut_exp", "cut_exp"]
        kind = self.rng.choice(feasible)
        if kind == "value":
            return self.value(muls, exps, fuel)
        if kind in ("par_mul", "par_exp"):
            o = self.rng.choice(muls)
            rest = [x for x in muls if x != o]
            y = self.fresh_mul()
            if kind == "par_mul":
                x: tm.Var = self.fresh_mul()
                body = self.term(rest + [x, y], exps, fuel - 2)
            else:
                x = self.fresh_exp()
                body = self.term(rest + [y], exps + [x], fuel - 2)
            return tm.Par(o, x, y, body)
        if kind in ("der_mul", "der_exp"):
            e = self.exp_leaf(exps)
            if kind == "der_mul":
                x = self.fresh_mul()
                return tm.Der(e, x, self.term(muls + [x], exps, fuel - 2))
            f = self.fresh_exp()
            return tm.Der(e, f, self.term(muls, exps + [f], fuel - 2))
        if kind == "sub":
            m = self.rng.choice(muls)
            rest = [x for x in muls if x != m]
            x = self.fresh_mul()
            vm, bm = self.split_muls(rest)
            need_body = _low(len(bm) + 1)
            if 2 + _low(len(vm)) + need_body > fuel:
                vm, bm = [], rest  # route everything to the body when tight
                need_body = _low(len(bm) + 1)
            vf = self.rng.randint(_low(len(vm)), fuel - 2 - need_body)
            v = self.value(vm, exps, vf)
            body = self.term(bm + [x], exps, fuel - 2 - tm.size(v))
            return tm.Sub(m, v, x, body)
        # cut_mul / cut_exp; an exponential binder over a multiplicative
        # value (and vice versa) is a deliberate clash
        extra = 1 if kind == "cut_mul" else 0
        vm, bm = self.split_muls(muls)
        need_body = _low(len(bm) + extra)
        if 1 + _low(len(vm)) + need_body > fuel:
            vm, bm = [], muls
            need_body = _low(len(bm) + extra)
        vf = self.rng.randint(_low(len(vm)), fuel - 1 - need_body)
        v = self.value(vm, exps, vf)
        left = fuel - 1 - tm.size(v)
        if kind == "cut_exp":
            e = self.fresh_exp()
            return tm.Cut(v, e, self.term(bm, exps + [e], left))
        x = self.fresh_mul()
        return tm.Cut(v, x, self.term(bm + [x], exps, left))


def gen_untyped_proper(seed: int, size_budget: int) -> tm.Term:
    """Random proper term, deterministic per seed.  May clash or diverge."""
    g = _UntypedGen(seed)
    t = g.term([], [], max(1, size_budget))
    assert tm.is_proper(t)
    return t


# -------------------------------------------------------------- spindle

def _block(e: tm.Var, level: int) -> tm.Term:
    m = tm.mvar(f"m{level}")
    n = tm.mvar(f"n{level}")
    return tm.Bang(tm.Der(e, m, tm.Der(e, n, tm.Pair(m, n))))


def gen_spindle(n: int) -> tuple[dict[tm.Var, fm.Formula], tm.Term]:
    """Chain of n spindles; the normal form has at least 2^n pairs."""
    if n < 1:
        raise ValueError("spindle chains start at n = 1")
    e1 = tm.evar("e1")
    rho = _block(e1, 1)
    for k in range(2, n + 1):
        ek = tm.evar(f"e{k}")
        sp = tm.split(rho)
        rho = tm.replug(tm.Split(sp.spine, tm.Cut(sp.head, ek, _block(ek, k))))
    return {e1: fm.Bang(fm.Atom("A0"))}, rho


# ---------------------------------------------------------------- omega

_OMEGA_SRC = (
    "cut{\\e. der{e>m} sub{m; e>n} n > o} "
    "sub{o; !(\\f. der{f>m2} sub{m2; f>n2} n2) > o2} o2"
)


def gen_omega() -> tm.Term:
    """The looping term: five micro steps bring it back to itself."""
    return surface.parse_term(_OMEGA_SRC)
