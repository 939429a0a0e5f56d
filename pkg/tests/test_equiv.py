import random

from hypothesis import given, settings, strategies as st

from imell import gen
from imell.equiv import cut_class, cut_equiv, cuteq_moves
from imell.rules import RuleKind, apply, redexes
from imell.surface import parse_term
from imell.terms import alpha_eq, alpha_key, is_proper, size

P = parse_term


def test_cut_hoists_out_of_a_tensor():
    assert cut_equiv(P("cut{n>m}(o, m)"), P("(o, cut{n>m} m)"))


def test_reflexive():
    t = P("cut{n>m}(o, m)")
    assert cut_equiv(t, t)


def test_different_component_is_not_equivalent():
    assert not cut_equiv(P("cut{n>m}(m, o)"), P("(o, cut{n>m} m)"))


def test_single_move_of_the_tensor_fixture():
    moves = list(cuteq_moves(P("cut{n>m}(o, m)")))
    assert len(moves) == 1 and moves[0] == P("(o, cut{n>m} m)")


def test_equivalent_terms_step_alike():
    t, s = P("cut{n>m}(o, m)"), P("(o, cut{n>m} m)")
    (rt,) = redexes(t)
    (rs,) = redexes(s)
    assert rt.kind is rs.kind is RuleKind.AxM1
    assert cut_equiv(apply(t, rt), apply(s, rs))


pool = st.integers(0, 2_000).map(lambda s: gen.gen_untyped_proper(s, 16))


@given(pool)
@settings(max_examples=60)
def test_moves_preserve_size_and_properness(t):
    for s in cuteq_moves(t):
        assert size(s) == size(t) and is_proper(s)
        # every move has an inverse move
        assert any(alpha_eq(u, t) for u in cuteq_moves(s))


@given(pool)
@settings(max_examples=40, deadline=None)
def test_class_is_uniform_and_contains_the_term(t):
    cls = cut_class(t)
    assert alpha_key(t) in cls
    assert all(size(u) == size(t) for u in cls.values())


@given(pool, st.integers(0, 2**32 - 1))
@settings(max_examples=40)
def test_random_walks_stay_in_the_class(t, seed):
    rng = random.Random(seed)
    s = t
    for _ in range(4):
        opts = list(cuteq_moves(s))
        if not opts:
            break
        s = rng.choice(opts)
    assert cut_equiv(t, s)
