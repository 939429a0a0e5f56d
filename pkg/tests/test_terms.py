import pytest

from hypothesis import given, strategies as st

from imell import gen
from imell.surface import parse_term
from imell.terms import (
    Bang,
    Cut,
    Der,
    Kind,
    NameSupply,
    Pair,
    Par,
    Split,
    Sub,
    alpha_eq,
    alpha_key,
    evar,
    free_vars,
    is_proper,
    is_value,
    kind_of_name,
    mfv,
    mvar,
    occ_count,
    refresh,
    rename_mul,
    replug,
    size,
    split,
    subterms,
)

P = parse_term


def test_kind_from_name():
    assert kind_of_name("m") is Kind.MUL
    assert kind_of_name("e") is Kind.EXP
    assert kind_of_name("foo") is Kind.EXP
    assert kind_of_name("x") is Kind.MUL
    assert mvar("m").is_mul and evar("e").is_exp


def test_kind_helpers_reject_wrong_initial():
    with pytest.raises(ValueError):
        mvar("e")
    with pytest.raises(ValueError):
        evar("m")


def test_free_vars():
    fv = free_vars(P("der{e>m} (m, e)"))
    assert fv.all == {evar("e")}
    assert fv.mul == frozenset()
    assert fv.exp == {evar("e")}
    assert free_vars(P("\\m. m")).all == frozenset()
    fv = free_vars(P("sub{m; f > n} n"))
    assert fv.all == {mvar("m"), evar("f")}
    assert fv.mul == {mvar("m")}
    assert fv.exp == {evar("f")}


def test_occ_count_includes_conclusions():
    assert occ_count(P("der{e>m} (m, e)"), evar("e")) == 2
    assert occ_count(P("m"), mvar("m")) == 1
    assert occ_count(P("\\m. m"), mvar("m")) == 0


def test_size_counts_occurrences():
    assert size(P("m")) == 1
    assert size(P("(m, n)")) == 3
    assert size(P("cut{n > m} m")) == 3


def test_alpha_eq():
    assert alpha_eq(P("\\m. m"), P("\\n. n"))
    assert not alpha_eq(P("\\m. m"), P("\\e. e"))
    assert alpha_eq(P("cut{n>m} m"), P("cut{n>o} o"))


def test_properness():
    assert not is_proper(P("(m, m)"))
    assert not is_proper(P("!m"))
    assert is_proper(P("!der{e>m} m"))


def test_split_replug():
    t = P("der{e>m} cut{(m,n)>o} o")
    sp = split(t)
    assert [type(f) for f in sp.spine] == [Der, Cut]
    assert sp.head == mvar("o")
    assert replug(sp) == t

    sp = split(P("(m, n)"))
    assert sp.spine == () and sp.head == P("(m, n)")

    sp = split(P("cut{!e>f} der{f>m} m"))
    assert len(sp.spine) == 2 and sp.head == mvar("m")


def test_replug_swaps_head():
    sp = split(P("der{e>m} cut{(m,n)>o} o"))
    assert replug(Split(sp.spine, P("(o, o)"))) == P("der{e>m} cut{(m,n)>o} (o, o)")


def test_rename_mul():
    assert rename_mul(P("par{m>x,y}(x,y)"), mvar("m"), mvar("n")) == P("par{n>x,y}(x,y)")
    assert rename_mul(P("m"), mvar("m"), mvar("n")) == P("n")
    assert rename_mul(P("\\m. m"), mvar("m"), mvar("n")) == P("\\m. m")


def test_value_slots_are_constructor_enforced():
    with pytest.raises(ValueError):
        Cut(P("cut{n>m} m"), mvar("o"), mvar("o"))
    with pytest.raises(ValueError):
        Sub(mvar("m"), P("der{e>n} n"), mvar("o"), mvar("o"))


def test_conclusion_kinds_are_constructor_enforced():
    with pytest.raises(ValueError):
        Par(evar("e"), mvar("x"), mvar("y"), P("(x, y)"))
    with pytest.raises(ValueError):
        Der(mvar("m"), mvar("x"), mvar("x"))
    with pytest.raises(ValueError):
        Sub(evar("e"), mvar("n"), mvar("x"), mvar("x"))


proper_terms = st.integers(0, 2_000).map(lambda s: gen.gen_untyped_proper(s, 16))


@given(proper_terms)
def test_refresh_preserves_alpha_class(t):
    supply = NameSupply.for_terms(t)
    r = refresh(t, supply)
    assert alpha_key(r) == alpha_key(t)
    assert size(r) == size(t)
    assert r.fv == t.fv


@given(proper_terms)
def test_split_replug_roundtrip(t):
    sp = split(t)
    assert is_value(sp.head)
    assert replug(sp) == t


@given(proper_terms)
def test_proper_terms_have_no_repeated_mul_occurrence(t):
    for s in subterms(t):
        for x in mfv(s):
            assert occ_count(s, x) == 1


@given(proper_terms)
def test_alpha_key_separates_sizes(t):
    # two terms with equal keys must at least agree on size and free vars
    u = gen.gen_untyped_proper(size(t), 16)
    if alpha_key(u) == alpha_key(t):
        assert size(u) == size(t) and u.fv == t.fv
