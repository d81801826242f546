import itertools

import pytest

from magnihom.chains import HomologyGroup, MagnitudeComplex, length_spectrum
from magnihom.metric import FiniteMetricSpace, between, random_metric
from magnihom.simplicial import (
    GraphComplexB, SimplicialComplexA, build_A, build_B, h0_B, phi_map, reduced_homology_A,
    simplicial_boundary,
)

from helpers import cube_vertex_metric, path_metric


def brute_simplices(m, a, b):
    """Every ordered tuple of distinct points whose path from a to b has length d(a, b)."""
    verts = [x for x in m.points if between(m, a, x, b)]
    out = []
    for k in range(1, len(verts) + 1):
        for tup in itertools.permutations(verts, k):
            c = (a,) + tup + (b,)
            if sum(m.d(x, y) for x, y in zip(c, c[1:])) == m.d(a, b):
                out.append(tup)
    return sorted(out, key=lambda s: (len(s), s))


def test_a_small_examples():
    p = path_metric(3)
    assert build_A(p, 0, 1).simplices == ()
    cx = build_A(p, 0, 2)
    assert cx.vertices == (1,) and cx.simplices == ((1,),)
    with pytest.raises(ValueError):
        build_A(p, 1, 1)


def test_a_matches_brute_force():
    for seed in range(10):
        m = random_metric(6, seed)
        for a, b in [(0, 1), (2, 5), (4, 3)]:
            assert list(build_A(m, a, b).simplices) == brute_simplices(m, a, b)


def test_a_cube():
    c = cube_vertex_metric()
    cx = build_A(c, 0, 7)
    assert cx.vertices == tuple(range(1, 7))
    for s in [(1, 6), (2, 4), (3, 5)]:
        assert s in cx.simplices
    assert list(cx.simplices) == brute_simplices(c, 0, 7)
    assert reduced_homology_A(cx, 0).is_zero
    # one 1-cycle: the hexagon 2-7-3-5-4-6
    assert reduced_homology_A(cx, 1) == HomologyGroup(1)


def test_a_downward_closed():
    for seed in range(5):
        m = random_metric(6, 50 + seed)
        cx = build_A(m, 0, 1)
        simplices = set(cx.simplices)
        for s in simplices:
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                assert not face or face in simplices


def test_reduced_homology_examples():
    p = path_metric(5)
    # totally ordered vertex set: a cone, so acyclic
    cx = build_A(p, 0, 4)
    for k in range(-1, 3):
        assert reduced_homology_A(cx, k).is_zero
    two = SimplicialComplexA(0, 3, (1, 2), ((1,), (2,)))
    assert reduced_homology_A(two, 0) == HomologyGroup(1)
    empty = SimplicialComplexA(0, 1, (), ())
    assert reduced_homology_A(empty, 0).is_zero
    assert reduced_homology_A(empty, -1) == HomologyGroup(1)


def test_phi_commutes_with_boundaries():
    for seed in range(8):
        m = random_metric(6, 70 + seed)
        a, b = 0, 1
        cx = MagnitudeComplex(m, m.d(a, b), a, b)
        A = build_A(m, a, b)
        for n in (2, 3, 4):
            src, dst = cx.basis(n), cx.basis(n - 1)
            phi_src, phi_dst = phi_map(src), phi_map(dst)
            # simplices of dimension n - 2 and n - 3 in the same order as chains
            assert sorted(phi_src.values()) == A.of_dim(n - 2)
            d_chain = cx.boundary(n)
            d_simp = simplicial_boundary(A, n - 2)
            rows = {s: i for i, s in enumerate(A.of_dim(n - 3))} if n > 2 else {(): 0}
            cols = {s: j for j, s in enumerate(A.of_dim(n - 2))}
            for (i, j), v in d_chain.entries.items():
                assert d_simp[rows[phi_dst[dst.chains[i]]], cols[phi_src[src.chains[j]]]] == v
            assert len(d_chain.entries) == len(d_simp.entries)


def test_b_examples():
    p = path_metric(4)
    for a, b in [(0, 1), (1, 2), (0, 3)]:
        for ell in length_spectrum(p, 2, a, b):
            if ell > p.d(a, b):
                assert build_B(p, ell, a, b).vertices == ()
    m = FiniteMetricSpace([[0, 1], [1, 0]])
    cx = build_B(m, 5, 0, 1)
    assert cx.vertices == () and h0_B(cx).is_zero
    with pytest.raises(ValueError):
        build_B(p, 1, 0, 1)


def test_b_two_isolated_detours():
    # a and b at distance 1; phi, psi each at total detour 4 and 4 from each other
    m = FiniteMetricSpace([
        [0, 1, 2, 2],
        [1, 0, 2, 2],
        [2, 2, 0, 4],
        [2, 2, 4, 0],
    ], ["a", "b", "phi", "psi"])
    cx = build_B(m, 4, 0, 1)
    assert cx.vertices == (2, 3) and cx.edges == ()
    assert h0_B(cx) == HomologyGroup(2)
    assert MagnitudeComplex(m, 4, 0, 1).homology(2) == HomologyGroup(2)


def test_h0_b_counts_components():
    joined = GraphComplexB(4, 0, 1, (2, 3), ((2, 3),), ((2, 3),))
    assert h0_B(joined) == HomologyGroup(1)
    assert h0_B(GraphComplexB(4, 0, 1, (2, 3), (), ())) == HomologyGroup(2)


def test_json_dumps():
    c = cube_vertex_metric()
    doc = build_A(c, 0, 7).to_json(c.labels)
    assert doc["a"] == "1" and doc["vertices"] == ["2", "3", "4", "5", "6", "7"]
