"""Small fixtures shared by several test modules."""
import numpy as np

from magnihom.graph import cube_graph
from magnihom.metric import FiniteMetricSpace, is_four_cut, is_proper, random_metric


def path_metric(n):
    return FiniteMetricSpace([[abs(i - j) for j in range(n)] for i in range(n)])


def cube_vertex_metric(r=1):
    g = cube_graph(r)
    return FiniteMetricSpace([[g.distance(g.vertex(i), g.vertex(j)) for j in range(8)] for i in range(8)],
                             g.labels)


def find_four_cut():
    for seed in range(200):
        m = random_metric(5, seed)
        for c in np.ndindex(5, 5, 5, 5):
            if is_proper(c) and is_four_cut(m, c):
                return m, c
    raise AssertionError("no 4-cut found")
