from hypothesis import given, strategies as st

from imell import gen
from imell.contexts import Context, parse_path
from imell.measure import measure, potential, potential_ctx, potential_ctx_var
from imell.rules import Mode, apply, redexes
from imell.surface import parse_term, show_term
from imell.terms import NameSupply, evar, mvar, refresh, rename_mul

P = parse_term


def test_potential_of_a_variable():
    assert potential(P("e"), evar("e")) == 1


def test_potential_counts_der_conclusions_and_contents():
    assert potential(P("der{e>m} (m, e)"), evar("e")) == 3


def test_potential_of_absent_variable_is_zero():
    assert potential(P("der{e>m} m"), evar("f")) == 0
    assert potential(P("\\m. m"), mvar("m")) == 0


def test_potential_ctx():
    assert potential_ctx(Context(P("m"), ())) == 1
    assert potential_ctx(Context(P("der{e>x} x"), (0,))) == 1
    # through a cut value the body's binder potential multiplies
    assert potential_ctx(Context(P("cut{(q, n) > y} y"), (0, 0))) == 2


def test_potential_ctx_var():
    assert potential_ctx_var(Context(P("der{e>x} x"), (0,)), evar("e")) == 1


def test_measure_base_cases():
    assert measure(P("m")) == 1
    before = P("cut{n>m} m")
    assert measure(before) == 3
    (r,) = [r for r in redexes(before) if r.kind.value == "ax_m1"]
    assert measure(apply(before, r)) == 1


def test_measure_ignores_mul_names():
    t = P("cut{(m,n) > o} par{o > x, y} (x, (y, m2))")
    assert measure(rename_mul(t, mvar("m2"), mvar("m3"))) == measure(t)


proper_terms = st.integers(0, 2_000).map(lambda s: gen.gen_untyped_proper(s, 16))


@given(proper_terms)
def test_measure_is_alpha_invariant(t):
    assert measure(refresh(t, NameSupply.for_terms(t))) == measure(t)


@given(proper_terms)
def test_measure_survives_rebuilding(t):
    # caches live on term nodes; a structural copy must agree
    assert measure(P(show_term(t))) == measure(t)
    x = next(iter(t.fv), None)
    if x is not None:
        assert potential(P(show_term(t)), x) == potential(t, x)


@given(proper_terms)
def test_measure_decreases_on_non_lolli_steps(t):
    for r in redexes(t, Mode.NONLOLLI_MICRO):
        assert measure(apply(t, r)) < measure(t)


@given(proper_terms)
def test_potential_vanishes_off_the_free_variables(t):
    from imell.terms import Cut, Der, Lam, Par, Sub, subterms

    bound = set()
    for s in subterms(t):
        match s:
            case Lam(b, _, _) | Cut(_, b, _) | Der(_, b, _):
                bound.add(b)
            case Sub(_, _, b, _):
                bound.add(b)
            case Par(_, l, r, _):
                bound |= {l, r}
    for x in bound - t.fv:
        assert potential(t, x) == 0


def test_parse_path_helper_used_above():
    assert parse_path("0.0") == (0, 0)
