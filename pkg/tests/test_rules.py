import pytest

from hypothesis import given, settings, strategies as st

from imell import gen
from imell.rules import (
    Mode,
    Redex,
    RuleKind,
    StaleRedexError,
    apply,
    check_gc_local_postponement,
    free_occurrences,
    is_cut_free,
    is_normal,
    redexes,
    step_ess,
)
from imell.surface import parse_term
from imell.terms import alpha_eq, evar, is_proper

P = parse_term


def kinds_at(t, cut_path, mode=Mode.MICRO):
    return sorted(r.kind.value for r in redexes(t, mode) if r.cut_path == cut_path)


def test_axiom_cut_is_a_single_ax_m1():
    assert redexes(P("cut{n>m} m")) == [Redex(RuleKind.AxM1, (), ())]


def test_conclusion_occurrences_are_ax_m2():
    (r,) = redexes(P("cut{n>m} par{m>x,y} (x,y)"))
    assert r == Redex(RuleKind.AxM2, (), ())
    assert alpha_eq(apply(P("cut{n>m} par{m>x,y} (x,y)"), r), P("par{n>x,y} (x,y)"))
    (r,) = redexes(P("cut{n>m} sub{m; o>x} x"))
    assert r.kind is RuleKind.AxM2


def test_one_exponential_cut_two_redexes():
    # the der conclusion and the variable occurrence each give a redex
    t = P("cut{f>e} der{e>g} cut{o>m} sub{m; e>n} n")
    assert kinds_at(t, ()) == ["ax_e1", "ax_e2"]
    assert kinds_at(t, (1, 0)) == ["ax_m2"]
    by_kind = {r.kind: r for r in redexes(t) if r.cut_path == ()}
    assert by_kind[RuleKind.AxE2].occ_path == ()
    assert by_kind[RuleKind.AxE1].occ_path == (0, 1, 0)


def test_weak_needs_an_unused_variable():
    assert redexes(P("cut{!e>f} m")) == [Redex(RuleKind.Weak, (), None)]
    assert redexes(P("cut{!e>f} m"), Mode.SMALL) == [Redex(RuleKind.ESmall, (), None)]
    assert RuleKind.Weak not in {r.kind for r in redexes(P("cut{!e>f} der{f>m} m"))}


def test_ax_e1_reaches_under_a_bang():
    t = P("cut{f>e} !e")
    (r,) = redexes(t)
    assert r == Redex(RuleKind.AxE1, (), (0,))
    assert apply(t, r) == P("cut{f>e} !f")  # the cut survives, only weak erases


def test_lolli_step_splits_the_abstraction():
    t = P("cut{\\e. der{e>m} m > n} sub{n; !f > o} o")
    (r,) = [r for r in redexes(t) if r.kind is RuleKind.Lolli]
    assert alpha_eq(apply(t, r), P("cut{!f > e} der{e>m} cut{m > o} o"))


def test_bang_der_step_opens_the_box():
    t = P("cut{!e>f} der{f>m} m")
    (r,) = [r for r in redexes(t) if r.kind is RuleKind.BangDer]
    assert alpha_eq(apply(t, r), P("cut{!e>f} cut{e>m} m"))


def test_weak_step_erases_the_cut():
    t = P("cut{!e>f} cut{e>m} m")
    (r,) = [r for r in redexes(t) if r.kind is RuleKind.Weak]
    assert apply(t, r) == P("cut{e>m} m")


@pytest.mark.parametrize(
    "src, want",
    [
        ("cut{!e>f} der{f>m} m", "cut{e>m} m"),
        ("cut{f>e} der{e>m} m", "der{f>m} m"),
        ("cut{!der{g>x}x > e} e", "!der{g>x} x"),
    ],
)
def test_small_step_is_meta_substitution(src, want):
    t = P(src)
    (r,) = [x for x in redexes(t, Mode.SMALL) if x.kind is RuleKind.ESmall]
    assert alpha_eq(step_ess(t, r), P(want))


def test_normal_form_predicates():
    assert is_normal(P("m")) and is_cut_free(P("m"))
    clash = P("cut{(e,f)>g} g")
    assert is_normal(clash) and not is_cut_free(clash)
    assert not is_normal(P("cut{n>m} m"))


def test_gc_postponement_fixture():
    rep = check_gc_local_postponement(P("cut{!e>f} cut{n>m} m"))
    assert rep.ok and "1 pair" in rep.label
    assert check_gc_local_postponement(P("(m, n)")).ok  # vacuous


def test_stale_redexes_are_rejected():
    (r,) = redexes(P("cut{n>m} m"))
    with pytest.raises(StaleRedexError):
        apply(P("(m, n)"), r)  # no cut there
    with pytest.raises(StaleRedexError):
        apply(P("cut{n>m} par{m>x,y} (x,y)"), r)  # occurrence shape changed


def test_omega_cycles_in_five_steps():
    om = gen.gen_omega()
    t = om
    for want in ("lolli", "ax_e1", "bang_der", "weak", "ax_m1"):
        (r,) = [r for r in redexes(t) if r.kind.value == want]
        t = apply(t, r)
    assert alpha_eq(t, om)


def test_free_occurrences_shapes_and_shadowing():
    e = evar("e")
    assert list(free_occurrences(P("(e, \\e. e)"), e)) == [((0,), "var", False)]
    assert list(free_occurrences(P("(e, !e)"), e)) == [
        ((0,), "var", False),
        ((1, 0), "var", True),
    ]
    assert list(free_occurrences(P("der{e>m} (m, e)"), e)) == [
        ((), "der", False),
        ((0, 1), "var", False),
    ]


pool = st.integers(0, 2_000).map(lambda s: gen.gen_untyped_proper(s, 18))


@given(pool, st.sampled_from(list(Mode)))
@settings(max_examples=120)
def test_modes_filter_kinds(t, mode):
    assert {r.kind for r in redexes(t, mode)} <= mode.kinds


@given(pool)
@settings(max_examples=80)
def test_redex_order_is_deterministic(t):
    rs = redexes(t)
    assert rs == redexes(t)
    key = lambda r: (r.cut_path, r.occ_path if r.occ_path is not None else ())
    assert rs == sorted(rs, key=key)


@given(pool)
@settings(max_examples=80)
def test_steps_preserve_properness(t):
    for r in redexes(t, Mode.SMALL):
        s = step_ess(t, r) if r.kind is RuleKind.ESmall else apply(t, r)
        assert is_proper(s)
    for r in redexes(t, Mode.MICRO):
        assert is_proper(apply(t, r))
