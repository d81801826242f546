"""JSON documents: metric spaces, metric graphs, graph points and chain files.

Numbers must be exact: rationals are written as "p/q" or integer strings,
JSON integers are accepted, and any JSON float is rejected with its line
and column.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

from .chains import FormalSum
from .graph import GraphPoint, MetricGraph
from .metric import FiniteMetricSpace, MetricViolation, as_rational, validate_metric

_NUMBER = re.compile(r"-?(?:0|[1-9]\d*)(\.\d+)?([eE][-+]?\d+)?")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line, self.column = line, column


class MetricAxiomError(ValueError):
    def __init__(self, violation: MetricViolation):
        super().__init__(f"not a metric: {violation}")
        self.violation = violation


def _position(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def _first_float(text: str) -> int | None:
    """Offset of the first non-integer number literal outside strings."""
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == '"':
            i += 1
            while i < n and text[i] != '"':
                i += 2 if text[i] == "\\" else 1
            i += 1
        elif ch == "-" or ch.isdigit():
            m = _NUMBER.match(text, i)
            if not m:
                return None
            if m.group(1) or m.group(2):
                return i
            i = m.end()
        else:
            i += 1
    return None


def loads(text: str):
    """Parse JSON, refusing floats."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    pos = _first_float(text)
    if pos is not None:
        raise ParseError("floating point number is not exact; write it as \"p/q\"", *_position(text, pos))
    return obj


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _rational(value, what: str) -> Fraction:
    try:
        return as_rational(value)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: {exc}") from None


def metric_from_obj(obj) -> FiniteMetricSpace:
    if not isinstance(obj, dict) or "dist" not in obj:
        raise ParseError('metric document needs a "dist" matrix')
    rows = obj["dist"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError('"dist" must be a list of rows')
    dist = [[_rational(v, f"dist[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)]
    report = validate_metric(dist)
    if not report:
        raise MetricAxiomError(report.violation)
    labels = obj.get("labels")
    return FiniteMetricSpace(dist, labels, check=False)


def load_metric(text: str) -> FiniteMetricSpace:
    return metric_from_obj(loads(text))


def metric_to_obj(m: FiniteMetricSpace) -> dict:
    return {"labels": list(m.labels), "dist": [[str(x) for x in row] for row in m.dist]}


def _vertex_ref(labels: list[str], value, what: str) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, str) and value in labels:
        return labels.index(value)
    raise ParseError(f"{what}: unknown vertex {value!r}")


def graph_from_obj(obj) -> MetricGraph:
    if not isinstance(obj, dict) or "vertices" not in obj or "edges" not in obj:
        raise ParseError('graph document needs "vertices" and "edges"')
    labels = [str(v) for v in obj["vertices"]]
    edges = []
    for k, e in enumerate(obj["edges"]):
        if not isinstance(e, dict) or not {"u", "v", "len"} <= e.keys():
            raise ParseError(f'edge {k} needs "u", "v" and "len"')
        edges.append((_vertex_ref(labels, e["u"], f"edge {k}"),
                      _vertex_ref(labels, e["v"], f"edge {k}"),
                      _rational(e["len"], f"edge {k} length")))
    return MetricGraph(labels, edges)


def load_graph(text: str) -> MetricGraph:
    return graph_from_obj(loads(text))


def point_from_obj(g: MetricGraph, obj) -> GraphPoint:
    if isinstance(obj, dict) and "vertex" in obj:
        return g.vertex(_vertex_ref(list(g.labels), obj["vertex"], "point"))
    if isinstance(obj, dict) and {"edge", "t"} <= obj.keys():
        return g.point(int(obj["edge"]), _rational(obj["t"], "point offset"))
    raise ParseError(f"not a graph point: {obj!r}")


_POINT_TEXT = re.compile(r"e(\d+)@(.+)")


def point_from_text(g: MetricGraph, text: str) -> GraphPoint:
    """A vertex label, or ``e<k>@<t>`` for offset t on edge k."""
    if text in g.labels:
        return g.vertex(text)
    m = _POINT_TEXT.fullmatch(text)
    if m:
        return g.point(int(m.group(1)), _rational(m.group(2), "point offset"))
    raise ParseError(f"not a graph point: {text!r}")


def chains_from_obj(g: MetricGraph, obj) -> FormalSum:
    if not isinstance(obj, list):
        raise ParseError("chain file must be a list of {coefficient, points}")
    terms = []
    for i, item in enumerate(obj):
        if not isinstance(item, dict) or "points" not in item:
            raise ParseError(f"chain {i} needs \"points\"")
        coeff = item.get("coefficient", 1)
        if not isinstance(coeff, int) or isinstance(coeff, bool):
            raise ParseError(f"chain {i}: coefficient must be an integer")
        terms.append((tuple(point_from_obj(g, p) for p in item["points"]), coeff))
    return FormalSum(terms)


def load_chains(g: MetricGraph, text: str) -> FormalSum:
    return chains_from_obj(g, loads(text))


def chains_to_obj(x: FormalSum) -> list:
    return [{"coefficient": k, "points": [p.to_json() for p in c]} for c, k in x.items()]
