"""Property-based checks of the algebraic invariants."""
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from magnihom.chains import MagnitudeComplex, boundary, homology, length_spectrum, spectrum_upto
from magnihom.graph import AdmissibleSet, MetricGraph, build_gamma_cycle, check_admissible
from magnihom.metric import random_metric
from magnihom.smith import IntegerMatrix, determinant, invariant_factors, smith_normal_form
from magnihom.spectral import e1_page

spaces = st.builds(
    random_metric,
    st.integers(3, 5),
    st.integers(0, 10**6),
    st.integers(2, 4),
    st.sampled_from([1, 1, 2]),
)


@settings(max_examples=200, deadline=None)
@given(spaces, st.data())
def test_boundary_squares_to_zero(m, data):
    a = data.draw(st.sampled_from(list(m.points)))
    b = data.draw(st.sampled_from(list(m.points)))
    ell = data.draw(st.sampled_from(spectrum_upto(m, 3, a, b)))
    cx = MagnitudeComplex(m, ell, a, b)
    for n in (2, 3, 4):
        assert (cx.boundary(n - 1) @ cx.boundary(n)).is_zero()


@settings(max_examples=200, deadline=None)
@given(spaces, st.data())
def test_d1_squares_to_zero(m, data):
    a = data.draw(st.sampled_from(list(m.points)))
    b = data.draw(st.sampled_from(list(m.points)))
    ell = data.draw(st.sampled_from(spectrum_upto(m, 3, a, b)))
    page = e1_page(m, ell, a, b, 3)
    for (p, q), d in page.differentials.items():
        if (p - 1, q) in page.differentials:
            assert (page.differentials[p - 1, q] @ d).is_zero()


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_smith_normal_form(rows):
    m = IntegerMatrix.from_dense(rows)
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
    diag = [d[i, i] for i in range(min(d.rows, d.cols))]
    assert all(x >= 0 for x in diag)
    assert all(i == j for i, j in d.entries)
    nonzero = [x for x in diag if x]
    assert diag[:len(nonzero)] == nonzero
    assert all(y % x == 0 for x, y in zip(nonzero, nonzero[1:]))
    assert invariant_factors(m) == nonzero


@settings(max_examples=100, deadline=None)
@given(spaces, st.permutations(range(5)), st.data())
def test_homology_relabel_invariant(m, perm, data):
    perm = [p for p in perm if p < len(m)]
    mp = m.relabel(perm)
    a = data.draw(st.sampled_from(list(m.points)))
    b = data.draw(st.sampled_from(list(m.points)))
    for ell in length_spectrum(m, 2, a, b):
        assert homology(m, 2, ell, a, b) == homology(mp, 2, ell, perm[a], perm[b])


@st.composite
def arc_configurations(draw):
    """Anchors alternating between the poles of k parallel arcs, with points
    placed so that offsets from the stretch's start increase along the frame."""
    arcs = draw(st.integers(2, 3))
    half = Fraction(draw(st.integers(2, 9)), draw(st.integers(1, 3)))
    q = draw(st.integers(1, 3))
    g = MetricGraph(["p", "s"], [(0, 1, half)] * arcs)
    grid = draw(st.lists(st.integers(1, 59), min_size=2 * q, max_size=2 * q, unique=True))
    offsets = sorted(Fraction(k, 60) * half for k in grid)
    frame = [g.vertex(i % 2) for i in range(q + 1)]
    pairs = []
    for i in range(q):
        pts = []
        for s in offsets[2 * i: 2 * i + 2]:
            arc = draw(st.integers(0, arcs - 1))
            # offsets along an edge run from vertex 0 to vertex 1
            pts.append(g.point(arc, s if i % 2 == 0 else half - s))
        pairs.append(tuple(pts))
    return g, frame, AdmissibleSet(pairs)


@settings(max_examples=200, deadline=None)
@given(arc_configurations(), st.data())
def test_gamma_cycles(config, data):
    g, frame, adm = config
    assert check_admissible(g, frame, adm)
    gamma = build_gamma_cycle(g, frame, adm)
    assert not boundary(gamma, g.distance)
    assert len(gamma) == 2 ** adm.q
    i = data.draw(st.integers(0, adm.q - 1))
    assert build_gamma_cycle(g, frame, adm.swapped(i)) == -gamma
