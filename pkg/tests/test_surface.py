import pytest

from hypothesis import given, strategies as st

from imell import gen
from imell.formulas import Atom, Bang as BangF, Lolli, Tensor
from imell.surface import (
    ParseError,
    parse_formula,
    parse_sequent,
    parse_term,
    parse_typing_context,
    read_term_file,
    show_term,
    show_typing_context,
)
from imell.terms import Bang, Cut, Lam, Sub, Var, evar, mvar


def test_parse_cut():
    t = parse_term("cut{n > m} m")
    assert t == Cut(mvar("n"), mvar("m"), mvar("m"))


def test_parse_sub_with_box():
    t = parse_term("sub{m; !f > x} x")
    assert t == Sub(mvar("m"), Bang(evar("f")), mvar("x"), mvar("x"))


def test_parse_accepts_kind_clashes():
    # grammatically fine; rejecting it is the type checker's job
    t = parse_term("cut{(m,n) > e} e")
    assert isinstance(t, Cut) and t.binder == evar("e")


def test_parse_annotated_lam():
    t = parse_term("\\m: X * Y. m")
    assert isinstance(t, Lam)
    assert t.annot == Tensor(Atom("X"), Atom("Y"))


def test_parse_formula_precedence():
    assert parse_formula("!X -o Y * Z") == Lolli(
        BangF(Atom("X")), Tensor(Atom("Y"), Atom("Z"))
    )
    assert parse_formula("X -o Y -o Z") == Lolli(Atom("X"), Lolli(Atom("Y"), Atom("Z")))


@pytest.mark.parametrize(
    "src",
    [
        "cut{n > m}",
        "(m, )",
        "par{e > x, y} x",  # exponential par conclusion
        "der{m > x} x",  # multiplicative der conclusion
        "cut cut",
        "\\. m",
        "m n",
    ],
)
def test_parse_errors(src):
    with pytest.raises(ParseError):
        parse_term(src)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_term("cut{n > m} )")
    assert exc.value.line == 1
    assert exc.value.col > 1


def test_typing_context_and_sequent():
    ctx = parse_typing_context("e: !X, m: Y -o Z")
    assert ctx[evar("e")] == BangF(Atom("X"))
    got_ctx, t = parse_sequent("f: !X ⊢ der{f>m} m")
    assert got_ctx == {evar("f"): BangF(Atom("X"))}
    assert t == parse_term("der{f>m} m")


def test_duplicate_context_entry_rejected():
    with pytest.raises(ParseError):
        parse_typing_context("e: !X, e: !Y")


def test_term_file_header():
    ctx, t = read_term_file("# a comment\n# ctx: e: !X\nder{e>m} m\n")
    assert ctx == {evar("e"): BangF(Atom("X"))}
    assert t == parse_term("der{e>m} m")
    ctx, t = read_term_file("m")
    assert ctx is None and t == mvar("m")


def test_show_round_trips_exactly():
    for src in [
        "cut{\\e. der{e>m} sub{m; e>n} n > o} sub{o; !(\\f. f) > o2} o2",
        "par{m > x, y} ((x, y), m2)",
        "!der{e>m} der{e>n} (m, n)",
    ]:
        t = parse_term(src)
        assert parse_term(show_term(t)) == t


def test_show_typing_context_round_trips():
    ctx = parse_typing_context("e: !X, f: !(Y * Z)")
    assert parse_typing_context(show_typing_context(ctx)) == ctx


any_terms = st.one_of(
    st.integers(0, 2_000).map(lambda s: gen.gen_untyped_proper(s, 14)),
    st.integers(0, 2_000).map(lambda s: gen.gen_typed(s, 14)[1]),
)


@given(any_terms)
def test_print_parse_roundtrip(t):
    assert parse_term(show_term(t)) == t
