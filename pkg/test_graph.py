"""
簡約グラフの構築と解析のテスト
"""

from poslam.harness.bench import omega
from poslam.harness.graph import ReductionGraph, reduction_graph
from poslam.harness.strategies import Reducer
from poslam.positive import OXPOS
from poslam.syntax import alpha_key
from poslam.translate import translate
from poslam.vsc import E_ABS, E_VAR, VSC, VSC_CORE

WITNESS = "(x z)[x <- y][y <- \\w. w]"


def test_variable_graph(P):
    graph = reduction_graph(P("x"), Reducer(VSC))
    assert len(graph) == 1
    assert graph.normal_nodes() == [graph.root]
    assert graph.weakly_normalizing() is True
    assert graph.diverges() is False
    report = graph.check_diamond()
    assert report.diamond and report.ok
    assert report.peaks == 0


def test_witness_is_not_diamond(P):
    graph = ReductionGraph(P(WITNESS), Reducer(VSC))
    assert not graph.truncated
    assert not graph.check_diamond().diamond
    assert graph.check_confluence().ok


def test_witness_exponential_peak(P):
    t = P(WITNESS)
    graph = ReductionGraph(t, Reducer(VSC, labels=(E_ABS, E_VAR)))
    report = graph.check_diamond()
    assert len(report.violations) >= 1
    root_peaks = [(u1, u2) for s, u1, u2 in report.violations if alpha_key(s) == graph.root]
    assert len(root_peaks) == 1
    u1, u2 = root_peaks[0]
    assert sorted(graph.join_distance(alpha_key(u1), alpha_key(u2))) == [1, 2]


def test_translated_omega_cycles():
    graph = ReductionGraph(translate(omega()), Reducer(OXPOS))
    assert not graph.truncated
    assert len(graph) == 2
    assert graph.diverges() is True
    assert graph.weakly_normalizing() is False
    assert graph.check_diamond().ok


def test_truncation_is_explicit():
    graph = ReductionGraph(omega(), Reducer(VSC), node_cap=5)
    assert graph.truncated
    assert len(graph) <= 5
    assert graph.weakly_normalizing() is None


def test_depth_cap(P):
    graph = ReductionGraph(omega(), Reducer(VSC_CORE), depth_cap=3)
    assert graph.truncated
    assert max(d['depth'] for _, d in graph.graph.nodes(data=True)) <= 3


def test_normalizing_graph_has_uniform_lengths(P):
    graph = ReductionGraph(P("(\\x. x) ((\\y. y) z)"), Reducer(VSC_CORE))
    assert graph.weakly_normalizing() is True
    assert graph.diverges() is False
    assert graph.check_confluence().ok


def test_to_dot(P):
    graph = ReductionGraph(P("(\\x. x) y"), Reducer(VSC))
    dot = graph.to_dot()
    assert dot.startswith("digraph reductions {")
    assert "doublecircle" in dot
    assert '[label="m"]' in dot
