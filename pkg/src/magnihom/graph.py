"""Metric graphs as geodesic spaces, with exact points on edges.

A point is either a vertex or an interior point of an edge, given by its
offset ``t`` from the edge's first endpoint.  Distances, geodesics and every
intersection test use rational arithmetic; ν_f's case split is discontinuous
so nothing here is approximated.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx
from networkx.utils import UnionFind

from .chains import FormalSum, boundary
from .metric import FiniteMetricSpace, as_rational


class GraphError(ValueError):
    pass


class NonUniqueGeodesic(GraphError):
    """Two or more geodesics join a pair where uniqueness was assumed."""


class NonBranchingViolation(GraphError):
    pass


@dataclass(frozen=True, order=True)
class GraphPoint:
    """A vertex (kind 0, ``index`` is the vertex) or the point at offset
    ``t`` on edge ``index`` (kind 1).

    Build these through :meth:`MetricGraph.vertex` and :meth:`MetricGraph.point`,
    which put endpoints into vertex form.
    """

    kind: int
    index: int
    t: Fraction = Fraction(0)

    @property
    def is_vertex(self) -> bool:
        return self.kind == 0

    def to_json(self) -> dict:
        if self.is_vertex:
            return {"vertex": self.index}
        return {"edge": self.index, "t": str(self.t)}

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"v{self.index}"
        return f"e{self.index}@{self.t}"


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    length: Fraction


class MetricGraph:
    """Connected graph with positive rational edge lengths.

    Multi-edges and self-loops are allowed.  Treat instances as immutable:
    vertex distances are computed once at construction.
    """

    def __init__(self, vertices: Sequence, edges: Iterable[tuple]):
        self.labels = tuple(str(v) for v in vertices)
        if len(set(self.labels)) != len(self.labels):
            raise GraphError("vertex labels must be distinct")
        es = []
        for u, v, length in edges:
            length = as_rational(length)
            if length <= 0:
                raise GraphError(f"edge ({u}, {v}) has nonpositive length {length}")
            for w in (u, v):
                if not 0 <= w < len(self.labels):
                    raise GraphError(f"edge endpoint {w} is not a vertex")
            es.append(Edge(int(u), int(v), length))
        self.edges = tuple(es)
        nxg = nx.MultiGraph()
        nxg.add_nodes_from(range(len(self.labels)))
        for k, e in enumerate(self.edges):
            nxg.add_edge(e.u, e.v, key=k, weight=e.length)
        if self.labels and not nx.is_connected(nxg):
            raise GraphError("metric graph must be connected")
        self._vd = {s: dict(row) for s, row in nx.all_pairs_dijkstra_path_length(nxg)}
        self._geod_cache: dict = {}

    @classmethod
    def from_edges(cls, n_vertices: int, edges, labels=None) -> "MetricGraph":
        return cls(labels if labels is not None else range(n_vertices), edges)

    # -- points -----------------------------------------------------------

    def vertex(self, i) -> GraphPoint:
        if isinstance(i, str):
            i = self.labels.index(i)
        if not 0 <= i < len(self.labels):
            raise GraphError(f"no vertex {i}")
        return GraphPoint(0, int(i))

    def point(self, edge: int, t) -> GraphPoint:
        e = self.edges[edge]
        t = as_rational(t)
        if not 0 <= t <= e.length:
            raise GraphError(f"offset {t} outside edge {edge} of length {e.length}")
        if t == 0:
            return GraphPoint(0, e.u)
        if t == e.length:
            return GraphPoint(0, e.v)
        return GraphPoint(1, edge, t)

    def _anchors(self, p: GraphPoint) -> list[tuple[int, Fraction]]:
        """Vertices reachable from ``p`` without passing another vertex, with distances."""
        if p.is_vertex:
            return [(p.index, Fraction(0))]
        e = self.edges[p.index]
        return [(e.u, p.t), (e.v, e.length - p.t)]

    def distance(self, p: GraphPoint, q: GraphPoint) -> Fraction:
        if p == q:
            return Fraction(0)
        best = min(dp + self._vd[x][y] + dq
                   for x, dp in self._anchors(p) for y, dq in self._anchors(q))
        if not p.is_vertex and not q.is_vertex and p.index == q.index:
            best = min(best, abs(p.t - q.t))
        return best

    def between(self, x: GraphPoint, y: GraphPoint, z: GraphPoint) -> bool:
        d = self.distance
        return x != y and y != z and d(x, y) + d(y, z) == d(x, z)

    def name(self, p: GraphPoint) -> str:
        if p.is_vertex:
            return self.labels[p.index]
        return f"e{p.index}@{p.t}"

    def to_json(self) -> dict:
        return {
            "vertices": list(self.labels),
            "edges": [{"u": e.u, "v": e.v, "len": str(e.length)} for e in self.edges],
        }


def graph_distance(g: MetricGraph, p: GraphPoint, q: GraphPoint) -> Fraction:
    """Shortest-path distance in the continuum graph."""
    return g.distance(p, q)


# -- geodesics --------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Traversal of edge ``edge`` from offset ``t0`` to offset ``t1``."""

    edge: int
    t0: Fraction
    t1: Fraction

    @property
    def length(self) -> Fraction:
        return abs(self.t1 - self.t0)

    def offset_at(self, s: Fraction) -> Fraction:
        """Offset after travelling ``s`` along the segment."""
        return self.t0 + s if self.t1 > self.t0 else self.t0 - s


@dataclass(frozen=True)
class GeodesicPath:
    start: GraphPoint
    end: GraphPoint
    segments: tuple

    @property
    def length(self) -> Fraction:
        return sum((s.length for s in self.segments), Fraction(0))

    def spans(self) -> list[tuple[Fraction, Fraction, Segment]]:
        """(parameter at start, parameter at end, segment) for each segment."""
        out, s = [], Fraction(0)
        for seg in self.segments:
            out.append((s, s + seg.length, seg))
            s += seg.length
        return out

    def trace(self, g: MetricGraph) -> list[tuple[GraphPoint, Fraction]]:
        """Breakpoints with their arclength parameters."""
        out = [(self.start, Fraction(0))]
        for _, s1, seg in self.spans():
            out.append((g.point(seg.edge, seg.t1), s1))
        return out

    def point_at(self, g: MetricGraph, s) -> GraphPoint:
        s = Fraction(s)
        if not 0 <= s <= self.length:
            raise GraphError(f"parameter {s} outside [0, {self.length}]")
        if s == 0:
            return self.start
        for s0, s1, seg in self.spans():
            if s <= s1:
                return g.point(seg.edge, seg.offset_at(s - s0))
        return self.end

    def vertices(self, g: MetricGraph) -> list[int]:
        return [p.index for p, _ in self.trace(g) if p.is_vertex]

    def to_json(self, g: MetricGraph) -> dict:
        return {
            "start": self.start.to_json(),
            "end": self.end.to_json(),
            "length": str(self.length),
            "trace": [{"point": p.to_json(), "s": str(s)} for p, s in self.trace(g)],
        }


def _split_pieces(g: MetricGraph, points: Iterable[GraphPoint]) -> list[tuple]:
    """Edges cut at the given interior points: (node, node, length, segment)."""
    cuts: dict[int, set] = {}
    for p in points:
        if not p.is_vertex:
            cuts.setdefault(p.index, set()).add(p.t)
    pieces = []
    for k, e in enumerate(g.edges):
        ts = [Fraction(0)] + sorted(cuts.get(k, ())) + [e.length]
        for t0, t1 in zip(ts, ts[1:]):
            pieces.append((g.point(k, t0), g.point(k, t1), t1 - t0, Segment(k, t0, t1)))
    return pieces


def enumerate_geodesics(g: MetricGraph, p: GraphPoint, q: GraphPoint) -> list[GeodesicPath]:
    """Every shortest path from ``p`` to ``q``, in a deterministic order.

    The graph is cut at ``p`` and ``q``; a geodesic is then a walk over
    tight pieces (piece length + d(next, q) = d(current, q)), and there are
    finitely many.  Parallel edges give distinct geodesics.
    """
    key = (p, q)
    if key in g._geod_cache:
        return g._geod_cache[key]
    if p == q:
        out = [GeodesicPath(p, q, ())]
        g._geod_cache[key] = out
        return out
    adj: dict = {}
    for x, y, length, seg in _split_pieces(g, (p, q)):
        adj.setdefault(x, []).append((y, length, seg))
        adj.setdefault(y, []).append((x, length, Segment(seg.edge, seg.t1, seg.t0)))
    for moves in adj.values():
        moves.sort(key=lambda m: (m[2].edge, m[2].t0, m[2].t1))
    to_q = {x: g.distance(x, q) for x in adj}
    out: list[GeodesicPath] = []
    path: list[Segment] = []

    def walk(x):
        if x == q:
            out.append(GeodesicPath(p, q, _merge(path)))
            return
        for y, length, seg in adj[x]:
            if length + to_q[y] == to_q[x]:
                path.append(seg)
                walk(y)
                path.pop()

    walk(p)
    g._geod_cache[key] = out
    return out


def _merge(segs: list[Segment]) -> tuple:
    out: list[Segment] = []
    for s in segs:
        if out and out[-1].edge == s.edge and out[-1].t1 == s.t0 and (
                (out[-1].t1 - out[-1].t0) * (s.t1 - s.t0) > 0):
            out[-1] = Segment(s.edge, out[-1].t0, s.t1)
        else:
            out.append(s)
    return tuple(out)


def common_parameter(g: MetricGraph, f: GeodesicPath, h: GeodesicPath) -> Fraction | None:
    """Some t in (0, d) with f(t) = h(t), or None.

    Equal points occur either at a vertex, which is a breakpoint of both
    traces, or inside an edge both traverse, where the two offsets are
    affine in t and the coincidence is a linear equation.
    """
    d = f.length
    if h.length != d:
        raise GraphError("geodesics of different lengths")
    for (pt, s) in f.trace(g)[1:-1]:
        if pt.is_vertex and h.point_at(g, s) == pt:
            return s
    for (pt, s) in h.trace(g)[1:-1]:
        if pt.is_vertex and f.point_at(g, s) == pt:
            return s
    for a0, a1, sa in f.spans():
        for b0, b1, sb in h.spans():
            if sa.edge != sb.edge:
                continue
            lo, hi = max(a0, b0), min(a1, b1)
            if lo > hi:
                continue
            # offsets: sa.t0 + da*(t - a0) and sb.t0 + db*(t - b0)
            da = 1 if sa.t1 > sa.t0 else -1
            db = 1 if sb.t1 > sb.t0 else -1
            c = sa.t0 - da * a0 - (sb.t0 - db * b0)
            if da == db:
                if c == 0:
                    mid = (max(lo, Fraction(0)) + min(hi, d)) / 2
                    if 0 < mid < d:
                        return mid
                continue
            t = -c / (da - db)
            if lo <= t <= hi and 0 < t < d:
                return t
    return None


@dataclass
class GeodesicClasses:
    geodesics: list
    classes: list  # lists of indices into ``geodesics``

    def __len__(self) -> int:
        return len(self.classes)


def pi0_geodesics(g: MetricGraph, a: GraphPoint, b: GraphPoint) -> GeodesicClasses:
    """Classes of Geod(a, b) under the closure of "equal point at equal parameter"."""
    geods = enumerate_geodesics(g, a, b)
    uf = UnionFind(range(len(geods)))
    for i, j in itertools.combinations(range(len(geods)), 2):
        if uf[i] != uf[j] and common_parameter(g, geods[i], geods[j]) is not None:
            uf.union(i, j)
    classes = sorted(sorted(c) for c in uf.to_sets())
    return GeodesicClasses(geods, classes)


def h2_rank_geodesic(g: MetricGraph, a: GraphPoint, b: GraphPoint) -> int:
    """Rank of H^{d(a,b)}_2(a, b): one less than the number of classes."""
    if a == b:
        raise GraphError("needs a != b")
    return len(pi0_geodesics(g, a, b)) - 1


def geodesic_through(g: MetricGraph, x: GraphPoint, y: GraphPoint, z: GraphPoint) -> GeodesicPath:
    """A geodesic from x to z through y: a geodesic x -> y followed by one y -> z."""
    if not g.between(x, y, z):
        raise GraphError(f"{y} is not between {x} and {z}")
    first = enumerate_geodesics(g, x, y)[0]
    second = enumerate_geodesics(g, y, z)[0]
    path = GeodesicPath(x, z, _merge(list(first.segments + second.segments)))
    if path.length != g.distance(x, z):
        raise GraphError("concatenation is not a shortest path")
    return path


# -- assumption checks ------------------------------------------------------

@dataclass(frozen=True)
class CheckReport:
    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_non_branching(g: MetricGraph, pairs: Iterable[tuple]) -> CheckReport:
    """Distinct geodesics of each pair share no interior point at equal parameter.

    A failure carries ((p, q), f, h, t).
    """
    for p, q in pairs:
        if p == q:
            continue
        geods = enumerate_geodesics(g, p, q)
        for f, h in itertools.combinations(geods, 2):
            t = common_parameter(g, f, h)
            if t is not None:
                return CheckReport(False, ((p, q), f, h, t))
    return CheckReport(True)


def check_unique_between_geodesics(g: MetricGraph, a: GraphPoint, b: GraphPoint,
                                   probes: Iterable[GraphPoint]) -> CheckReport:
    """Each probe pair with a < x < y < b is joined by exactly one geodesic.

    A failure carries (x, y, number of geodesics).
    """
    if a == b:
        raise GraphError("needs a != b")
    probes = sorted(set(probes))
    inside = [x for x in probes if g.between(a, x, b)]
    for x, y in itertools.permutations(inside, 2):
        if g.between(a, x, y) and g.between(x, y, b):
            n = len(enumerate_geodesics(g, x, y))
            if n != 1:
                return CheckReport(False, (x, y, n))
    return CheckReport(True)


def _unique_geodesic(g: MetricGraph, x: GraphPoint, y: GraphPoint) -> GeodesicPath:
    geods = enumerate_geodesics(g, x, y)
    if len(geods) != 1:
        raise NonUniqueGeodesic(f"{len(geods)} geodesics join {x} and {y}")
    return geods[0]


# -- the intersection invariant --------------------------------------------

def _vertices_on(g: MetricGraph, f: GeodesicPath) -> set[int]:
    return {p.index for p, _ in f.trace(g) if p.is_vertex}


def _hits(g: MetricGraph, f: GeodesicPath, h: GeodesicPath) -> list[tuple[Fraction, Fraction]]:
    """Closed parameter intervals of h lying on Im f, merged and sorted."""
    found = []
    on_f = _vertices_on(g, f)
    for p, s in h.trace(g):
        if p.is_vertex and p.index in on_f:
            found.append((s, s))
    for h0, _, sh in h.spans():
        for _, _, sf in f.spans():
            if sf.edge != sh.edge:
                continue
            lo = max(min(sf.t0, sf.t1), min(sh.t0, sh.t1))
            hi = min(max(sf.t0, sf.t1), max(sh.t0, sh.t1))
            if lo > hi:
                continue
            u, v = sorted((h0 + abs(lo - sh.t0), h0 + abs(hi - sh.t0)))
            found.append((u, v))
    # h's endpoints may be interior points of f's edges even when segments miss
    for p, s in ((h.start, Fraction(0)), (h.end, h.length)):
        if _on_image(g, f, p):
            found.append((s, s))
    found.sort()
    merged: list[list[Fraction]] = []
    for u, v in found:
        if merged and u <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], v)
        else:
            merged.append([u, v])
    return [(u, v) for u, v in merged]


def _on_image(g: MetricGraph, f: GeodesicPath, p: GraphPoint) -> bool:
    if p.is_vertex:
        return p.index in _vertices_on(g, f)
    for _, _, seg in f.spans():
        if seg.edge == p.index and min(seg.t0, seg.t1) <= p.t <= max(seg.t0, seg.t1):
            return True
    return False


def _inside(intervals, s) -> bool:
    return any(u <= s <= v for u, v in intervals)


@dataclass(frozen=True)
class RegularPiece:
    start: GraphPoint
    end: GraphPoint
    case: int  # 1..4 as in the classification of f-regular 3-chains


def _classify(intervals, s0: Fraction, s1: Fraction) -> int | None:
    mid = (s0 + s1) / 2
    at0, at1, atm = _inside(intervals, s0), _inside(intervals, s1), _inside(intervals, mid)
    # pieces never contain an interval endpoint strictly inside, so the
    # open piece is either wholly on f or wholly off it
    if atm:
        return 3
    if not at0 and at1:
        return 1
    if at0 and not at1:
        return 2
    if not at0 and not at1:
        return 4
    return None


def decompose_f_regular(g: MetricGraph, f: GeodesicPath, x: GraphPoint, y: GraphPoint) -> list[RegularPiece]:
    """Cut the geodesic x -> y where it enters or leaves Im f.

    Consecutive cut points give f-regular 3-chains <a, x_i, x_{i+1}, b>.  A
    stretch that touches f at both ends but nowhere in between is halved.
    """
    if x == y:
        raise GraphError("degenerate pair x = y")
    h = _unique_geodesic(g, x, y)
    dxy = h.length
    intervals = _hits(g, f, h)
    cuts = sorted({Fraction(0), dxy} | {e for iv in intervals for e in iv if 0 < e < dxy})
    params = []
    for s0, s1 in zip(cuts, cuts[1:]):
        params.append(s0)
        if _classify(intervals, s0, s1) is None:
            params.append((s0 + s1) / 2)
    params.append(dxy)
    out = []
    for s0, s1 in zip(params, params[1:]):
        case = _classify(intervals, s0, s1)
        out.append(RegularPiece(h.point_at(g, s0), h.point_at(g, s1), case))
    return out


def nu_f(g: MetricGraph, f: GeodesicPath, gamma: FormalSum) -> int:
    """Intersection number of a 3-chain combination with the geodesic f."""
    a, b = f.start, f.end
    ell = f.length
    total = 0
    for chain, k in gamma.items():
        if len(chain) != 4 or chain[0] != a or chain[-1] != b:
            raise GraphError(f"{chain} is not a 3-chain from {a} to {b}")
        if sum((g.distance(u, v) for u, v in zip(chain, chain[1:])), Fraction(0)) != ell:
            raise GraphError(f"{chain} does not have length d(a, b) = {ell}")
        pieces = decompose_f_regular(g, f, chain[1], chain[2])
        total += k * sum(1 for piece in pieces if piece.case == 1)
    return total


# -- non-branching description ----------------------------------------------

@dataclass(frozen=True)
class AdmissibleSet:
    """Pairs (x_i, x'_i), one per stretch of the frame."""

    pairs: tuple

    def __init__(self, pairs):
        object.__setattr__(self, "pairs", tuple((x, y) for x, y in pairs))

    @property
    def q(self) -> int:
        return len(self.pairs)

    def swapped(self, i: int) -> "AdmissibleSet":
        ps = list(self.pairs)
        ps[i] = ps[i][::-1]
        return AdmissibleSet(ps)


def check_admissible(g: MetricGraph, frame: Sequence[GraphPoint], adm: AdmissibleSet) -> bool:
    q = len(frame) - 1
    if q < 1:
        raise GraphError("frame needs at least two anchors")
    if adm.q != q:
        return False
    for i, (x, x2) in enumerate(adm.pairs):
        if not (g.between(frame[i], x, frame[i + 1]) and g.between(frame[i], x2, frame[i + 1])):
            return False
    for i in range(q - 1):
        phi = frame[i + 1]
        for u in adm.pairs[i]:
            for w in adm.pairs[i + 1]:
                if g.between(u, phi, w):
                    return False
    return True


def build_gamma_cycle(g: MetricGraph, frame: Sequence[GraphPoint], adm: AdmissibleSet) -> FormalSum:
    """Expand <phi_0, x_1 - x'_1, phi_1, ..., x_q - x'_q, phi_q> into 2^q chains."""
    if not check_admissible(g, frame, adm):
        raise GraphError("not an admissible set for this frame")
    terms = []
    for choice in itertools.product((0, 1), repeat=adm.q):
        chain = [frame[0]]
        for i, c in enumerate(choice):
            chain += [adm.pairs[i][c], frame[i + 1]]
        terms.append((tuple(chain), -1 if sum(choice) % 2 else 1))
    gamma = FormalSum(terms)
    if boundary(gamma, g.distance):
        raise AssertionError("built Γ-chain is not a cycle")
    return gamma


def nonbranching_rank(g: MetricGraph, ell, q: int, anchors: Iterable[GraphPoint],
                      start: GraphPoint | None = None, end: GraphPoint | None = None) -> int:
    """Sum over anchor tuples phi_0..phi_q of prod(|Geod(phi_{i-1}, phi_i)| - 1).

    Consecutive anchors are distinct and their distances add up to ``ell``.
    ``start``/``end`` pin phi_0/phi_q, which gives the summand for one pair
    (a, b).  The result is the rank only when ``anchors`` contains every
    point realizing the compositions; over the continuum that set is usually
    infinite.
    """
    ell = as_rational(ell)
    if q < 1:
        raise GraphError("q must be positive")
    anchors = sorted(set(anchors) | {p for p in (start, end) if p is not None})
    firsts = [start] if start is not None else anchors
    checked: set = set()
    total = 0

    def count(u, v) -> int:
        if (u, v) not in checked:
            report = check_non_branching(g, [(u, v)])
            if not report:
                raise NonBranchingViolation(f"geodesics from {u} to {v} branch")
            checked.add((u, v))
        return len(enumerate_geodesics(g, u, v)) - 1

    def extend(prefix, used):
        nonlocal total
        if len(prefix) == q + 1:
            if used == ell and (end is None or prefix[-1] == end):
                prod = 1
                for u, v in zip(prefix, prefix[1:]):
                    prod *= count(u, v)
                    if not prod:
                        break
                total += prod
            return
        for nxt in anchors:
            if nxt == prefix[-1]:
                continue
            step = g.distance(prefix[-1], nxt)
            if used + step <= ell:
                extend(prefix + [nxt], used + step)

    for s in firsts:
        extend([s], Fraction(0))
    return total


def submodel(g: MetricGraph, points: Iterable[GraphPoint]) -> tuple[FiniteMetricSpace, dict]:
    """Finite metric subspace on ``points`` and the point -> index map."""
    pts = sorted(set(points))
    dist = [[g.distance(p, q) for q in pts] for p in pts]
    m = FiniteMetricSpace(dist, [g.name(p) for p in pts], check=False)
    return m, {p: i for i, p in enumerate(pts)}


# -- fixtures ---------------------------------------------------------------

CUBE_EDGES = ((1, 2), (2, 7), (7, 3), (3, 1), (4, 6), (6, 8), (8, 5), (5, 4),
              (1, 4), (2, 6), (7, 8), (3, 5))


def cube_graph(r=1) -> MetricGraph:
    """The cube's 1-skeleton with vertices labelled 1..8 (index = label - 1)."""
    return MetricGraph([str(i) for i in range(1, 9)],
                       [(u - 1, v - 1, r) for u, v in CUBE_EDGES])


def circle_graph(half=1) -> MetricGraph:
    """Two parallel arcs of length ``half`` between antipodal vertices a, ǎ."""
    return MetricGraph(["a", "a'"], [(0, 1, half), (0, 1, half)])


def path_tree(lengths: Sequence) -> MetricGraph:
    return MetricGraph(range(len(lengths) + 1), [(i, i + 1, w) for i, w in enumerate(lengths)])
