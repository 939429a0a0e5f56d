from hypothesis import given, strategies as st

from imell import gen
from imell.subst import subst_exp
from imell.surface import parse_term
from imell.terms import alpha_eq, evar, is_proper, mfv

P = parse_term


def test_box_contents_spread_through_der():
    got = subst_exp(P("der{e>e'} (e', e)"), evar("e"), P("!cut{f>g} g"))
    assert alpha_eq(got, P("cut{f>g} cut{g>e'} (e', !cut{f>g} g)"))


def test_variable_value_leaves_plain_occurrences():
    assert subst_exp(P("m"), evar("e"), P("f")) == P("m")
    assert subst_exp(P("(e, m)"), evar("e"), P("f")) == P("(f, m)")


def test_box_opening_with_empty_spine():
    got = subst_exp(P("der{f>m} m"), evar("f"), P("!e"))
    assert alpha_eq(got, P("cut{e>m} m"))


def test_box_opening_hoists_the_spine():
    got = subst_exp(P("der{f>m} m"), evar("f"), P("!der{g>x} x"))
    assert alpha_eq(got, P("der{g>x} cut{x>m} m"))


def test_der_conclusion_renaming_on_variable_value():
    got = subst_exp(P("der{e>m} (m, e)"), evar("e"), P("f"))
    assert alpha_eq(got, P("der{f>m} (m, f)"))


def test_capture_is_avoided():
    # the value's free g collides with a lambda binder in the target
    got = subst_exp(P("\\g. (g, e)"), evar("e"), P("g"))
    assert evar("g") in got.fv
    assert not alpha_eq(got, P("\\g. (g, g)"))
    assert alpha_eq(got, P("\\f. (f, g)"))


exp_values = st.sampled_from(["f2", "!f2", "!der{f2>x} x", "!(\\m. m)"])
proper_terms = st.integers(0, 2_000).map(lambda s: gen.gen_untyped_proper(s, 14))


@given(proper_terms, exp_values)
def test_subst_preserves_properness(t, vsrc):
    v = P(vsrc)
    for e in [x for x in t.fv if x.is_exp]:
        got = subst_exp(t, e, v)
        assert is_proper(got)
        assert e not in got.fv


@given(proper_terms, exp_values)
def test_subst_is_identity_off_the_variable(t, vsrc):
    assert subst_exp(t, evar("e_absent"), P(vsrc)) == t


@given(proper_terms)
def test_subst_keeps_mul_free_variables(t):
    for e in [x for x in t.fv if x.is_exp]:
        got = subst_exp(t, e, P("!f2"))
        assert mfv(got) == mfv(t)
