import json

import pytest

from magnihom.chains import FormalSum
from magnihom.graph import circle_graph, cube_graph
from magnihom.jsonio import (
    MetricAxiomError, ParseError, chains_to_obj, load_chains, load_graph, load_metric, loads,
    metric_to_obj, point_from_obj, point_from_text,
)
from magnihom.metric import random_metric


def test_float_rejected_with_position():
    text = '{"dist": [\n  ["0", 1.5],\n  ["3/2", "0"]]}'
    with pytest.raises(ParseError) as info:
        load_metric(text)
    assert (info.value.line, info.value.column) == (2, 9)


def test_float_inside_string_is_fine():
    assert loads('{"note": "1.5", "x": 2}') == {"note": "1.5", "x": 2}
    with pytest.raises(ParseError):
        load_metric('{"dist": [["0", "1.5"], ["1.5", "0"]]}')


def test_syntax_error_position():
    with pytest.raises(ParseError) as info:
        loads('{"dist": [\n  [0, 1]\n  [1, 0]]}')
    assert info.value.line == 3


def test_metric_roundtrip():
    m = random_metric(5, 3, denominator=3)
    assert load_metric(json.dumps(metric_to_obj(m))) == m


def test_metric_axiom_error():
    with pytest.raises(MetricAxiomError) as info:
        load_metric('{"dist": [["0", "1"], ["2", "0"]]}')
    assert info.value.violation.axiom == "asymmetry"


def test_graph_and_points():
    g = load_graph(json.dumps(cube_graph(2).to_json()))
    assert g.distance(g.vertex(0), g.vertex(7)) == 6
    assert point_from_obj(g, {"edge": 0, "t": "1/2"}) == g.point(0, "1/2")
    assert point_from_obj(g, {"vertex": 3}) == g.vertex(3)
    assert point_from_text(g, "e0@2") == g.vertex(1)
    with pytest.raises(ParseError):
        point_from_text(g, "nowhere")
    with pytest.raises(ParseError):
        load_graph('{"vertices": ["a"], "edges": [{"u": "a", "v": "z", "len": "1"}]}')


def test_chain_file_roundtrip():
    c = circle_graph(2)
    x = FormalSum([((c.vertex(0), c.point(0, "1/3"), c.vertex(1)), 2),
                   ((c.vertex(0), c.point(1, 1), c.vertex(1)), -1)])
    assert load_chains(c, json.dumps(chains_to_obj(x))) == x
    with pytest.raises(ParseError):
        load_chains(c, '[{"coefficient": "2", "points": []}]')
