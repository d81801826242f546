"""Acceptance criteria, one test per criterion.

Run ``python tests/test_acceptance.py`` (or ``pytest tests/test_acceptance.py``)
for a PASS/FAIL line per criterion at the end of the report.
"""
import random
import sys
import time
from fractions import Fraction

import pytest

from conftest import corpus_spaces, seven_point_spaces
from helpers import cube_vertex_metric, path_metric
from magnihom.chains import FormalSum, MagnitudeComplex, boundary, chain_boundary, homology, \
    homology_total, length_spectrum, spectrum_upto
from magnihom.graph import (
    AdmissibleSet, MetricGraph, build_gamma_cycle, check_admissible, circle_graph, cube_graph,
    enumerate_geodesics, h2_rank_geodesic, nonbranching_rank, nu_f, path_tree, pi0_geodesics,
)
from magnihom.metric import random_metric
from magnihom.oracles import oracle_a_rows, oracle_b_rows
from magnihom.smith import IntegerMatrix, determinant, invariant_factors, smith_normal_form
from magnihom.spectral import convergence_check, e1_page

CUBE_GAMMA = [((2, 7), 1), ((3, 7), -1), ((3, 5), 1), ((4, 5), -1), ((4, 6), 1), ((2, 6), -1)]
INSTANCES = 200


def _strictly_between(m, a, b):
    return any(m.d(a, x) + m.d(x, b) == m.d(a, b) for x in m.points if x not in (a, b))


def test_low_degree_closed_forms():
    start = time.perf_counter()
    checked = 0
    for m in corpus_spaces():
        assert homology_total(m, 0, 0).rank == len(m)
        assert not homology_total(m, 0, 0).torsion
        totals = set()
        for a in m.points:
            for b in m.points:
                lengths = set(spectrum_upto(m, 2, a, b)) | {m.d(a, b)}
                totals |= lengths
                for ell in lengths:
                    if ell > 0:
                        assert homology(m, 0, ell, a, b).is_zero
                    h1 = homology(m, 1, ell, a, b)
                    expected = int(a != b and ell == m.d(a, b) and not _strictly_between(m, a, b))
                    assert h1.rank == expected and not h1.torsion
                    checked += 1
        for ell in totals:
            if ell > 0:
                assert homology_total(m, 0, ell).is_zero
    elapsed = time.perf_counter() - start
    print(f"{checked} (a, b, l) triples in {elapsed:.1f}s")
    assert elapsed < 60


def test_h2_torsion_free():
    start = time.perf_counter()
    checked = 0
    for m in corpus_spaces() + seven_point_spaces():
        for a in m.points:
            for b in m.points:
                for ell in length_spectrum(m, 2, a, b):
                    assert homology(m, 2, ell, a, b).torsion == ()
                    checked += 1
    elapsed = time.perf_counter() - start
    print(f"{checked} H2 groups in {elapsed:.1f}s")
    assert checked > 0
    assert elapsed < 300


def test_oracle_a():
    rows = [r for m in corpus_spaces() for r in oracle_a_rows(m, degrees=(2, 3, 4))]
    bad = [r for r in rows if not r["match"]]
    print(f"{len(rows)} rows, {len(bad)} mismatches")
    assert rows and not bad
    assert {r["n"] for r in rows} == {2, 3, 4}


def test_oracle_b():
    rows = [r for m in corpus_spaces() for r in oracle_b_rows(m)]
    bad = [r for r in rows if not r["match"]]
    print(f"{len(rows)} rows, {len(bad)} mismatches")
    assert rows and not bad
    assert any(r["direct"]["rank"] for r in rows)


def test_spectral_convergence():
    six = [m for m in corpus_spaces() if len(m) == 6]
    assert six
    reports = 0
    for m in six:
        for a in m.points:
            for b in m.points:
                for ell in spectrum_upto(m, 3, a, b):
                    rep = convergence_check(m, ell, a, b, max_n=3)
                    assert rep.ok, (a, b, ell, rep.rows)
                    e1 = rep.pages[0]
                    for n in range(1, 4):
                        assert e1.group(n, 0).is_zero
                    two = rep.rows[2]
                    assert (rep.e_infinity.rank(0, 2) + rep.e_infinity.rank(1, 1)
                            == two["direct"].rank)
                    assert rep.e_infinity.rank(2, 0) == 0
                    reports += 1
    print(f"{reports} (a, b, l) spectral sequences on {len(six)} six-point spaces")


def _cube_four_chain(g, a, b, rng):
    pool = [g.vertex(i) for i in range(8)]
    pool += [g.point(k, Fraction(rng.randint(1, 11), 12)) for k in range(len(g.edges)) for _ in range(2)]
    d = g.distance
    while True:
        x, y, z = rng.sample(pool, 3)
        c = (a, x, y, z, b)
        if len(set(c)) == 5 and sum(d(u, v) for u, v in zip(c, c[1:])) == d(a, b):
            return c


def test_cube_fixture():
    start = time.perf_counter()
    g = cube_graph(1)
    V = lambda i: g.vertex(i - 1)  # noqa: E731
    a, b = V(1), V(8)
    paths = enumerate_geodesics(g, a, b)
    assert len(paths) == 6
    assert len(pi0_geodesics(g, a, b).classes) == 1
    assert h2_rank_geodesic(g, a, b) == 0
    f = next(p for p in paths if p.vertices(g) == [0, 1, 6, 7])
    gamma = FormalSum(((a, V(x), V(y), b), k) for (x, y), k in CUBE_GAMMA)
    assert not boundary(gamma, g.distance)
    assert nu_f(g, f, gamma) == -1
    rng = random.Random(20)
    for _ in range(20):
        beta = _cube_four_chain(g, a, b, rng)
        assert nu_f(g, f, chain_boundary(beta, g.distance)) == 0
    # the vertex-only model agrees: H^3_2(1, 8) of the cube's vertex set vanishes
    assert homology(cube_vertex_metric(1), 2, 3, 0, 7).is_zero
    elapsed = time.perf_counter() - start
    print(f"cube fixture in {elapsed:.2f}s")
    assert elapsed < 10


def _trees():
    yield path_tree([1, 2, 1])
    yield path_tree([Fraction(1, 2), 3])
    yield MetricGraph("cabxy", [(0, 1, 1), (0, 2, 2), (0, 3, Fraction(1, 2)), (3, 4, 3)])
    yield MetricGraph(range(5), [(0, 1, 1), (0, 2, 1), (0, 3, 1), (3, 4, 2)])


def test_circle_and_tree_fixture():
    L = 3
    c = circle_graph(L)
    A, B = c.vertex(0), c.vertex(1)
    assert c.distance(A, B) == L
    assert len(enumerate_geodesics(c, A, B)) == 2
    assert len(pi0_geodesics(c, A, B).classes) == 2
    assert h2_rank_geodesic(c, A, B) == 1
    for q in (1, 2, 3):
        assert nonbranching_rank(c, q * L, q, [A, B], start=A) == 1
    for t in _trees():
        verts = [t.vertex(i) for i in range(len(t.labels))]
        lengths = {t.distance(u, v) for u in verts for v in verts} | {Fraction(1, 3), 5, 7}
        for q in (1, 2, 3):
            for ell in lengths:
                if ell > 0:
                    assert nonbranching_rank(t, ell, q, verts) == 0


def _random_space(rng):
    return random_metric(rng.randint(3, 5), rng.randrange(10**6), rng.randint(2, 4), rng.choice([1, 1, 2]))


def _random_triple(rng, cap=3):
    m = _random_space(rng)
    a, b = rng.choice(m.points), rng.choice(m.points)
    return m, a, b, rng.choice(spectrum_upto(m, cap, a, b))


def _arc_configuration(rng):
    arcs, q = rng.randint(2, 3), rng.randint(1, 3)
    half = Fraction(rng.randint(2, 9), rng.randint(1, 3))
    g = MetricGraph(["p", "s"], [(0, 1, half)] * arcs)
    offsets = sorted(Fraction(k, 60) * half for k in rng.sample(range(1, 60), 2 * q))
    frame = [g.vertex(i % 2) for i in range(q + 1)]
    pairs = []
    for i in range(q):
        # offsets grow away from each stretch's start; edges run from vertex 0 to 1
        pairs.append(tuple(g.point(rng.randrange(arcs), s if i % 2 == 0 else half - s)
                           for s in offsets[2 * i: 2 * i + 2]))
    return g, frame, AdmissibleSet(pairs)


def test_structural_properties():
    rng = random.Random(2024)
    counts = dict.fromkeys(["dd", "d1d1", "snf", "gamma"], 0)
    for _ in range(INSTANCES):
        m, a, b, ell = _random_triple(rng)
        cx = MagnitudeComplex(m, ell, a, b)
        for n in (2, 3, 4):
            assert (cx.boundary(n - 1) @ cx.boundary(n)).is_zero()
        counts["dd"] += 1

        m, a, b, ell = _random_triple(rng)
        page = e1_page(m, ell, a, b, 3)
        for (p, q), d in page.differentials.items():
            if (p - 1, q) in page.differentials:
                assert (page.differentials[p - 1, q] @ d).is_zero()
        counts["d1d1"] += 1

        r, k = rng.randint(1, 6), rng.randint(1, 6)
        mat = IntegerMatrix.from_dense([[rng.randint(-6, 6) for _ in range(k)] for _ in range(r)])
        u, d, v = smith_normal_form(mat)
        assert u @ mat @ v == d
        assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
        assert all(i == j for i, j in d.entries)
        diag = [d[i, i] for i in range(min(r, k))]
        nonzero = [x for x in diag if x]
        assert all(x > 0 for x in nonzero) and diag[:len(nonzero)] == nonzero
        assert all(y % x == 0 for x, y in zip(nonzero, nonzero[1:]))
        assert invariant_factors(mat) == nonzero
        counts["snf"] += 1

        g, frame, adm = _arc_configuration(rng)
        assert check_admissible(g, frame, adm)
        gamma = build_gamma_cycle(g, frame, adm)
        assert len(gamma) == 2 ** adm.q
        assert not boundary(gamma, g.distance)
        for i in range(adm.q):
            assert build_gamma_cycle(g, frame, adm.swapped(i)) == -gamma
        counts["gamma"] += 1
    # a known nonzero differential keeps the d^2 = 0 checks honest
    cx = MagnitudeComplex(path_metric(4), 3, 0, 3)
    assert not cx.boundary(2).is_zero()
    print(counts)
    assert min(counts.values()) >= INSTANCES


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
