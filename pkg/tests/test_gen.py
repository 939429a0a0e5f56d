import pytest

from hypothesis import given, settings, strategies as st

from imell import gen
from imell.formulas import show as show_formula
from imell.rules import is_cut_free
from imell.strategy import Strategy, Verdict, normalize
from imell.surface import parse_term
from imell.terms import Var, alpha_eq, is_proper, size, subterms
from imell.typecheck import TypingError, find_clashes, synth

P = parse_term


@given(st.integers(0, 5_000), st.integers(3, 25))
@settings(max_examples=60)
def test_same_seed_same_output(seed, budget):
    assert gen.gen_typed(seed, budget) == gen.gen_typed(seed, budget)
    assert gen.gen_untyped_proper(seed, budget) == gen.gen_untyped_proper(seed, budget)


@given(st.integers(0, 5_000), st.integers(1, 25))
@settings(max_examples=80)
def test_budgets_are_respected(seed, budget):
    _, t = gen.gen_typed(seed, budget)
    assert size(t) <= budget and is_proper(t)
    u = gen.gen_untyped_proper(seed, budget)
    assert size(u) <= budget and is_proper(u)


def test_zero_budget_is_an_error():
    with pytest.raises(ValueError):
        gen.gen_typed(5, 0)


def test_untyped_space_contains_clashes():
    clashy = sum(1 for s in range(300) if find_clashes(gen.gen_untyped_proper(s, 14)))
    assert clashy > 30


def test_typed_space_covers_every_constructor():
    kinds = set()
    for s in range(200):
        _, t = gen.gen_typed(s, 20)
        for x in subterms(t):
            if isinstance(x, Var):
                kinds.add("mvar" if x.is_mul else "evar")
            else:
                kinds.add(type(x).__name__)
    assert kinds == {"mvar", "evar", "Pair", "Lam", "Bang", "Cut", "Par", "Sub", "Der"}


def test_first_spindle_is_one_block():
    ctx, sp = gen.gen_spindle(1)
    assert sp == P("!der{e1>m1} der{e1>n1} (m1, n1)")
    assert size(sp) == 8
    assert show_formula(synth(ctx, sp)) == "!(A0 * A0)"


def test_second_spindle_cuts_the_first_into_a_block():
    ctx, sp = gen.gen_spindle(2)
    assert alpha_eq(sp, P("cut{!der{e1>m} der{e1>n} (m,n) > e2} !der{e2>x} der{e2>y} (x,y)"))
    f = synth(ctx, sp)
    assert show_formula(f) == "!(A0 * A0 * (A0 * A0))"


def test_spindle_sizes_grow_linearly():
    assert [size(gen.gen_spindle(n)[1]) for n in range(1, 9)] == [
        9 * n - 1 for n in range(1, 9)
    ]


def test_spindle_zero_is_an_error():
    with pytest.raises(ValueError):
        gen.gen_spindle(0)


def test_spindle_normal_forms_explode():
    for n in range(1, 5):
        _, sp = gen.gen_spindle(n)
        tr = normalize(sp, Strategy.GOOD)
        assert tr.verdict is Verdict.NORMAL and is_cut_free(tr.final)
        assert size(tr.final) >= 2**n


def test_omega_shape():
    om = gen.gen_omega()
    assert alpha_eq(
        om, P("cut{\\e. der{e>m} sub{m; e>n} n > o} sub{o; !\\f. der{f>x} sub{x; f>y} y > o1} o1")
    )
    assert size(om) == 19 and is_proper(om)


def test_omega_is_rejected_by_synth():
    with pytest.raises(TypingError):
        synth({}, gen.gen_omega())
