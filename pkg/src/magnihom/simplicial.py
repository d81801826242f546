"""The complexes A(a, b) and B^l(a, b) whose homology models H^l_n(a, b).

``A(a, b)`` has the points strictly between a and b as vertices and the
betweenness-ordered tuples realizing d(a, b) as simplices; its reduced
homology in degree n - 2 is H^{d(a,b)}_n(a, b).  ``B^l(a, b)`` is a graph
whose H_0 is H^l_2(a, b) when l > d(a, b).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from networkx.utils import UnionFind

from .chains import ChainBasis, HomologyGroup
from .metric import FiniteMetricSpace, between
from .smith import IntegerMatrix, invariant_factors


@dataclass(frozen=True)
class SimplicialComplexA:
    a: int
    b: int
    vertices: tuple
    # each simplex is a tuple ordered by the betweenness order from a to b
    simplices: tuple

    def of_dim(self, k: int) -> list[tuple]:
        return [s for s in self.simplices if len(s) == k + 1]

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def to_json(self, labels=None) -> dict:
        name = (lambda x: labels[x]) if labels else (lambda x: x)
        return {
            "a": name(self.a),
            "b": name(self.b),
            "vertices": [name(v) for v in self.vertices],
            "simplices": [[name(v) for v in s] for s in self.simplices],
        }


def build_A(m: FiniteMetricSpace, a: int, b: int, max_dim: int | None = None) -> SimplicialComplexA:
    """Build A(a, b), optionally only up to simplices of dimension ``max_dim``.

    Simplices are grown as geodesic vertex sequences: ``y`` extends
    ``(.., x)`` when ``x < y < b``, which together with ``a < x_1 < ... < x``
    keeps the total length equal to d(a, b).
    """
    if a == b:
        raise ValueError("A(a, b) is only defined for a != b")
    d = m.d
    verts = tuple(x for x in m.points if between(m, a, x, b))
    simplices = [(x,) for x in verts]
    frontier = list(simplices)
    size = 1
    while frontier and (max_dim is None or size <= max_dim):
        nxt = []
        for s in frontier:
            last = s[-1]
            for y in verts:
                if y != last and d(last, y) + d(y, b) == d(last, b):
                    nxt.append(s + (y,))
        simplices.extend(nxt)
        frontier = nxt
        size += 1
    simplices.sort(key=lambda s: (len(s), s))
    return SimplicialComplexA(a, b, verts, tuple(simplices))


def _faces(s: tuple):
    """Faces of an ordered simplex with the sign (-1)^i, i counted from 1."""
    for i in range(len(s)):
        yield s[:i] + s[i + 1:], -1 if (i + 1) % 2 else 1


def simplicial_boundary(c: SimplicialComplexA, k: int) -> IntegerMatrix:
    """Augmented boundary C_k -> C_{k-1}; C_{-1} is Z spanned by the empty simplex."""
    src = c.of_dim(k) if k >= 0 else ([()] if c.vertices else [])
    if k - 1 >= 0:
        dst = c.of_dim(k - 1)
    elif k - 1 == -1:
        dst = [()] if c.vertices else []
    else:
        dst = []
    pos = {s: i for i, s in enumerate(dst)}
    entries = {}
    if k >= 0:
        for j, s in enumerate(src):
            for f, sign in _faces(s):
                entries[pos[f], j] = sign
    return IntegerMatrix(len(dst), len(src), entries)


def reduced_homology_A(c: SimplicialComplexA, k: int) -> HomologyGroup:
    """Reduced homology of A(a, b) in degree ``k`` via the augmented complex.

    The augmentation is folded into the boundary (the sign
    convention gives [x] -> -[]), so the empty complex is zero for k >= 0.
    """
    if k < -1:
        return HomologyGroup()
    if k >= 0 and not c.of_dim(k):
        return HomologyGroup()
    dim = len(c.of_dim(k)) if k >= 0 else (1 if c.vertices else 0)
    if k == -1 and not c.vertices:
        # empty complex: the augmented complex is just Z in degree -1
        return HomologyGroup(1)
    out_f = invariant_factors(simplicial_boundary(c, k))
    in_f = invariant_factors(simplicial_boundary(c, k + 1))
    return HomologyGroup(dim - len(out_f) - len(in_f), tuple(f for f in in_f if f > 1))


def phi_map(basis: ChainBasis) -> dict:
    """Bijection <a, x_1, .., x_p, b> -> [x_1 .. x_p] for l = d(a, b)."""
    return {c: tuple(c[1:-1]) for c in basis.chains}


# -- B^l(a, b) ------------------------------------------------------------

@dataclass(frozen=True)
class GraphComplexB:
    length: Fraction
    a: int
    b: int
    vertices: tuple
    edges: tuple
    # (u, v) with u preceding v: a < u < v < b
    orientation: tuple

    def to_json(self, labels=None) -> dict:
        name = (lambda x: labels[x]) if labels else (lambda x: x)
        return {
            "length": str(self.length),
            "a": name(self.a),
            "b": name(self.b),
            "vertices": [name(v) for v in self.vertices],
            "edges": [[name(u), name(v)] for u, v in self.edges],
        }


def _detour_points(m: FiniteMetricSpace, ell: Fraction, a: int, b: int) -> list[int]:
    """phi with <a, phi, b> of length ell (condition (i))."""
    return [p for p in m.points if p not in (a, b) and m.d(a, p) + m.d(p, b) == ell]


def _has_frame_extension(m: FiniteMetricSpace, ell: Fraction, a: int, phi: int, b: int) -> bool:
    """Some x makes <a,x,phi,b> or <a,phi,x,b> a chain of length ell framed by <a,phi,b>."""
    d = m.d
    for x in m.points:
        if (x not in (a, phi) and d(a, x) + d(x, phi) + d(phi, b) == ell
                and between(m, a, x, phi) and not between(m, x, phi, b)):
            return True
        if (x not in (phi, b) and d(a, phi) + d(phi, x) + d(x, b) == ell
                and between(m, phi, x, b) and not between(m, a, phi, x)):
            return True
    return False


def _smooth_pair(m: FiniteMetricSpace, ell: Fraction, a: int, u: int, v: int, b: int) -> bool:
    """<a, u, v, b> has length ell and frame <a, b> (both interior points smooth)."""
    d = m.d
    return (d(a, u) + d(u, v) + d(v, b) == ell
            and between(m, a, u, v) and between(m, u, v, b))


def build_B(m: FiniteMetricSpace, ell, a: int, b: int) -> GraphComplexB:
    """Build B^l(a, b) for l > d(a, b) by finite enumeration.

    Vertices are the detour points phi (d(a,phi) + d(phi,b) = l) admitting
    no one-point extension with the same frame, minus those joined by a
    smooth 3-chain to a detour point that does admit one.
    """
    ell = Fraction(ell)
    if ell <= m.d(a, b):
        raise ValueError("B^l(a, b) needs l > d(a, b)")
    cand = _detour_points(m, ell, a, b)
    extendable = {p for p in cand if _has_frame_extension(m, ell, a, p, b)}

    def blocked(phi: int) -> bool:
        return any(
            _smooth_pair(m, ell, a, phi, psi, b) or _smooth_pair(m, ell, a, psi, phi, b)
            for psi in extendable
        )

    verts = tuple(p for p in cand if p not in extendable and not blocked(p))
    edges, orient = [], []
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            if _smooth_pair(m, ell, a, u, v, b):
                edges.append((u, v))
                orient.append((u, v))
            elif _smooth_pair(m, ell, a, v, u, b):
                edges.append((u, v))
                orient.append((v, u))
    return GraphComplexB(ell, a, b, verts, tuple(edges), tuple(orient))


def h0_B(c: GraphComplexB) -> HomologyGroup:
    """H_0 of the graph: one Z per connected component."""
    uf = UnionFind(c.vertices)
    for u, v in c.edges:
        uf.union(u, v)
    return HomologyGroup(len(list(uf.to_sets())) if c.vertices else 0)


def h0_A_components(c: SimplicialComplexA) -> list[set]:
    """Connected components of the 1-skeleton of A(a, b)."""
    uf = UnionFind(c.vertices)
    for s in c.of_dim(1):
        uf.union(*s)
    return [set(s) for s in uf.to_sets()] if c.vertices else []
