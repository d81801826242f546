from fractions import Fraction

import numpy as np
import pytest

from magnihom.metric import (
    FiniteMetricSpace, as_rational, between, chain_length, frame, is_four_cut,
    random_metric, smoothness_count, validate_metric,
)

from helpers import cube_vertex_metric, find_four_cut, path_metric


def test_as_rational_rejects_floats():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational(" -4 ") == -4
    with pytest.raises(TypeError):
        as_rational(1.5)
    with pytest.raises(ValueError):
        as_rational("1.5")
    with pytest.raises(TypeError):
        as_rational(True)


def test_validate_examples():
    assert validate_metric([[0, 1], [1, 0]])
    r = validate_metric([[0, 1], [2, 0]])
    assert not r and r.violation.axiom == "asymmetry" and r.violation.indices == (0, 1)
    r = validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert r.violation.axiom == "triangle inequality" and r.violation.indices == (0, 2, 1)
    assert validate_metric([[1, 1], [1, 0]]).violation.axiom == "nonzero diagonal"
    assert validate_metric([[0, 0], [0, 0]]).violation.axiom == "nonpositive distance"
    assert validate_metric([[0, 1], [1]]).violation.axiom == "non-square"


def test_space_rejects_bad_input():
    with pytest.raises(ValueError):
        FiniteMetricSpace([[0, 1], [2, 0]])
    with pytest.raises(ValueError):
        FiniteMetricSpace([[0, 1], [1, 0]], ["x", "x"])


def test_chain_length_examples():
    m = FiniteMetricSpace([[0, 1], [1, 0]])
    assert chain_length(m, (0,)) == 0
    assert chain_length(m, (0, 1, 0)) == 2
    c = cube_vertex_metric(Fraction(5, 2))
    assert chain_length(c, (0, 1, 6, 7)) == Fraction(15, 2)


def test_between_examples():
    p = path_metric(3)
    assert not between(p, 0, 0, 2)
    assert between(p, 0, 1, 2)
    c = cube_vertex_metric()
    assert c.d(0, 6) == 2 and between(c, 0, 6, 7)


def test_smoothness_examples():
    p = path_metric(4)
    assert smoothness_count(p, (0, 3)) == 0
    assert smoothness_count(p, (0, 1, 3)) == 1
    with pytest.raises(ValueError):
        smoothness_count(p, (0, 0, 1))


def test_four_cut_has_two_smooth_points():
    m, c = find_four_cut()
    assert smoothness_count(m, c) == 2
    assert chain_length(m, c) > m.d(c[0], c[3])
    assert not between(m, c[0], c[2], c[3])


def test_four_cut_examples():
    p = path_metric(4)
    assert not is_four_cut(p, (0, 1, 2, 3))
    c = cube_vertex_metric()
    # <1,2,7,8> is a geodesic: length 3 = d(1,8), so not a 4-cut
    assert not is_four_cut(c, (0, 1, 6, 7))
    # the square's corner walk a-x-b-y has both betweenness relations and length 3 > 1
    sq = FiniteMetricSpace([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])
    assert is_four_cut(sq, (0, 1, 2, 3))
    assert not is_four_cut(p, (0, 2, 1, 3))
    with pytest.raises(ValueError):
        is_four_cut(p, (0, 1, 2))


def test_frame_deletes_smooth_points():
    p = path_metric(5)
    # <0, 1, 4, 3, 2>: 1 smooth, 4 singular, 3 smooth
    assert frame((0, 1, 4, 3, 2), p.d) == (0, 4, 2)


def test_properties_on_random_chains():
    rng = np.random.default_rng(7)
    for seed in range(20):
        m = random_metric(5, seed)
        perm = list(rng.permutation(5))
        mp = m.relabel(perm)
        for _ in range(30):
            n = int(rng.integers(1, 5))
            c = [int(rng.integers(5))]
            while len(c) < n + 1:
                x = int(rng.integers(5))
                if x != c[-1]:
                    c.append(x)
            c = tuple(c)
            cp = tuple(perm[x] for x in c)
            assert chain_length(m, c) >= m.d(c[0], c[-1])
            assert smoothness_count(m, c) <= n - 1
            assert smoothness_count(m, c) == smoothness_count(mp, cp)
            assert chain_length(m, c) == chain_length(mp, cp)
            if n == 3:
                assert is_four_cut(m, c) == is_four_cut(mp, cp)
        for x, y, z in np.ndindex(5, 5, 5):
            assert between(m, x, y, z) == between(m, z, y, x)


def test_random_metric_is_metric():
    for seed in range(10):
        m = random_metric(6, seed, denominator=3)
        assert validate_metric(m.dist)
