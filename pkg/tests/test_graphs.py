from hypothesis import given, settings, strategies as st

from imell import checks, gen
from imell.formulas import Atom, Bang
from imell.graphs import Bounds, SNStatus, build_graph, check_sn, normal_forms
from imell.rules import Mode, RuleKind
from imell.strategy import good_redexes
from imell.surface import parse_term
from imell.terms import evar

P = parse_term


def test_axiom_graph_has_two_nodes():
    g = build_graph(P("cut{n>m} m"))
    assert len(g) == 2 and not g.truncated
    (nf,) = normal_forms(g)
    assert g.nodes[nf] == P("n")
    (out,) = [out for out in g.edges.values() if out]
    assert out[0][0].kind is RuleKind.AxM1


def test_axiom_graph_is_sn_with_one_step():
    r = check_sn(P("cut{n>m} m"))
    assert r.status is SNStatus.SN and r.is_sn and r.longest_path == 1


def test_omega_cycle_closes_by_depth_six():
    # alpha-deduplication folds the 5-step loop back onto the root
    r = check_sn(gen.gen_omega(), bounds=Bounds(max_depth=6))
    assert r.status is SNStatus.CYCLE and not r.is_sn
    assert sorted(r.witness) == ["ax_e1", "ax_m1", "bang_der", "lolli", "weak"]


def test_omega_without_lolli_is_normal():
    r = check_sn(gen.gen_omega(), Mode.NONLOLLI_MICRO)
    assert r.status is SNStatus.SN and r.longest_path == 0


def test_node_budget_breach_is_flagged():
    _, t = gen.gen_typed(11, 16)
    g = build_graph(t, bounds=Bounds(max_nodes=3))
    assert g.truncated and len(g) == 3
    assert check_sn(t, bounds=Bounds(max_nodes=3)).status is SNStatus.TRUNCATED


def test_good_graphs_use_the_supplied_enumerator():
    _, t = gen.gen_typed(11, 16)
    full = build_graph(t)
    good = build_graph(t, enumerate_redexes=good_redexes)
    assert len(good) <= len(full)
    for key, out in good.edges.items():
        assert {r for r, _ in out} <= set(good_redexes(good.nodes[key]))


def test_full_composition_fixture():
    assert checks.check_full_composition(P("cut{!e>f} der{f>m} m")).ok


def test_subject_reduction_fixture():
    ctx = {evar("g"): Bang(Atom("X"))}
    t = P("cut{\\e: !!X. der{e>f} f > n} sub{n; !g > f1} f1")
    rep = checks.check_subject_reduction(ctx, t)
    assert rep.ok and "1 step" in rep.label


def test_subject_reduction_reports_untypable_inputs():
    assert not checks.check_subject_reduction({}, P("cut{(e,f)>g} g")).ok


def test_cuteq_bisim_fixture():
    rep = checks.check_cuteq_bisim(P("cut{n>m}(o, m)"))
    assert rep.ok and "1 neighbor" in rep.label


pool = st.integers(0, 1_500).map(lambda s: gen.gen_untyped_proper(s, 14))
typed_pool = st.integers(0, 1_500).map(lambda s: gen.gen_typed(s, 16)[1])


@given(pool)
@settings(max_examples=40, deadline=None)
def test_nonlolli_graphs_terminate(t):
    assert check_sn(t, Mode.NONLOLLI_MICRO).is_sn
    assert checks.check_local_termination(t).ok


@given(typed_pool)
@settings(max_examples=30, deadline=None)
def test_typed_micro_graphs_are_confluent(t):
    rep = checks.check_confluence(t, bounds=Bounds(max_nodes=4_000, max_depth=60))
    assert rep.ok, rep.details


@given(typed_pool)
@settings(max_examples=25, deadline=None)
def test_typed_battery(t):
    assert checks.check_measure_decrease(t).ok
    assert checks.check_fullness(t).ok
    assert checks.check_diamond(t).ok
    assert checks.check_random_descent(t, Bounds(max_nodes=4_000)).ok
