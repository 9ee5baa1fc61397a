from pathlib import Path

import numpy as np
import pytest

from logoswb.dot import export_dot
from logoswb.errors import MissingNode, UnknownId
from logoswb.graph import PowerGraph, build_commutation_graph, maximal_contexts
from logoswb.linalg import make_density
from logoswb.psa import PSA, evaluate_psa

GOLDEN = Path(__file__).parent / "golden"
KET0 = make_density(np.diag([1.0, 0.0]))


def golden(name):
    return (GOLDEN / name).read_bytes()


def test_commuting_pair_golden(two_bases):
    g = build_commutation_graph(two_bases[:2])
    assert export_dot(g, evaluate_psa(KET0, g)).encode() == golden("commuting_pair.dot")


def test_empty_graph_golden():
    g = PowerGraph.from_adjacency([], np.zeros((0, 0), dtype=bool))
    assert export_dot(g).encode() == golden("empty.dot")


def test_two_basis_golden(two_basis_graph):
    psa = evaluate_psa(KET0, two_basis_graph)
    out = export_dot(two_basis_graph, psa, highlight=[["P0", "P1"]])
    assert out.encode() == golden("two_basis_dim2.dot")


def test_context_objects_as_highlight(two_basis_graph):
    ctx = maximal_contexts(two_basis_graph)[0]
    a = export_dot(two_basis_graph, evaluate_psa(KET0, two_basis_graph), [ctx])
    assert a.encode() == golden("two_basis_dim2.dot")


def test_deterministic(two_basis_graph):
    psa = evaluate_psa(KET0, two_basis_graph)
    runs = {export_dot(two_basis_graph, psa, [["P0", "P1"], ["Pp", "Pm"]]) for _ in range(5)}
    assert len(runs) == 1


def test_labels_without_psa(two_basis_graph):
    assert '"Pp" [label="Pp"];' in export_dot(two_basis_graph)


def test_no_loops(two_basis_graph):
    out = export_dot(two_basis_graph)
    assert '"P0" -- "P0"' not in out


def test_negative_zero_prints_as_zero(two_bases):
    g = build_commutation_graph(two_bases[:2])
    psa = PSA({"P0": 1.0, "P1": -0.0})
    assert 'label="P1 : 0.000"' in export_dot(g, psa)


def test_quoting():
    g = PowerGraph.from_adjacency(['a"b'], np.ones((1, 1), dtype=bool))
    assert '"a\\"b" [label="a\\"b"];' in export_dot(g)


def test_missing_node(two_basis_graph):
    with pytest.raises(MissingNode):
        export_dot(two_basis_graph, PSA({"P0": 1.0}))


def test_unknown_highlight(two_basis_graph):
    with pytest.raises(UnknownId):
        export_dot(two_basis_graph, highlight=[["P0", "Q"]])
