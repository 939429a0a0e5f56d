import pytest

from hypothesis import given, settings, strategies as st

from imell import gen
from imell.formulas import Atom, Bang, Lolli, show
from imell.rules import apply, redexes
from imell.surface import parse_formula, parse_sequent, parse_term
from imell.typecheck import TypingError, find_clashes, is_clash_free_bounded, synth

P = parse_term


def S(src: str):
    ctx, t = parse_sequent(src)
    return synth(ctx, t)


def test_annotated_identity():
    assert S("|- \\m: X. m") == Lolli(Atom("X"), Atom("X"))


def test_promotion():
    assert S("e: !X |- !der{e>m} m") == Bang(Atom("X"))


def test_mul_binder_under_dereliction_of_a_double_bang_rejected():
    # !f : !!X forces der to bind m at !X, and a multiplicative hypothesis
    # at a bang formula can never be consumed
    with pytest.raises(TypingError):
        S("f: !X |- cut{\\e: !!X. der{e>m} m > n} sub{n; !f > o} o")


def test_exponential_binders_let_the_same_shape_type():
    got = S("g: !X |- cut{\\e: !!X. der{e>f} f > n} sub{n; !g > f1} f1")
    assert got == Bang(Atom("X"))


def test_formula_show_round_trips():
    f = parse_formula("!(X * Y) -o !Z")
    assert parse_formula(show(f)) == f


@pytest.mark.parametrize(
    "src",
    [
        "|- m",  # unbound
        "m: X |- (m, m)",  # linear variable used twice
        "m: X |- !m",  # promotion over a multiplicative context
        "|- \\m. m",  # unannotated binder cannot be inferred
        "|- \\m: !X. m",  # multiplicative binder annotated at a bang
        "e: !X, m: Y |- e",  # leftover linear context
        "e: !(X * Y) |- cut{!e > m} m",  # mul binder at a bang formula
    ],
)
def test_typing_rejections(src):
    with pytest.raises(TypingError):
        S(src)


def test_exponential_hypothesis_must_be_banged():
    # unreachable through parse_sequent, which rejects "e: X" up front
    from imell.terms import evar

    with pytest.raises(TypingError):
        synth({evar("e"): Atom("X")}, P("e"))


def test_clash_detection():
    assert find_clashes(P("cut{(e,f) > g} g")) == [()]
    assert find_clashes(P("cut{!e > m} m")) == [()]
    assert find_clashes(P("cut{n > m} m")) == []


def test_bounded_clash_search_at_depth_zero():
    v = is_clash_free_bounded(P("cut{(e,f) > g} g"), depth=0)
    assert not v.clash_free and v.witness_path == () and v.witness_steps == ()


def test_bounded_clash_search_finds_a_one_step_witness():
    # search the generator space for a clash that only appears after a step
    for seed in range(4_000):
        t = gen.gen_untyped_proper(seed, 10)
        if find_clashes(t):
            continue
        v = is_clash_free_bounded(t, depth=2)
        if not v.clash_free and len(v.witness_steps) >= 1:
            return
    raise AssertionError("no hidden clash found in the sampled space")


typed_pairs = st.integers(0, 2_000).map(lambda s: gen.gen_typed(s, 16))


@given(typed_pairs)
def test_generated_typed_terms_synthesize(pair):
    ctx, t = pair
    synth(ctx, t)  # must not raise


@given(typed_pairs)
@settings(max_examples=40)
def test_typed_terms_are_clash_free_in_depth(pair):
    _, t = pair
    assert is_clash_free_bounded(t, depth=3, max_nodes=4_000).clash_free


@given(typed_pairs)
@settings(max_examples=60)
def test_one_step_subject_reduction(pair):
    ctx, t = pair
    want = synth(ctx, t)
    for r in redexes(t):
        assert synth(ctx, apply(t, r)) == want
