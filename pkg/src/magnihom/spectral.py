"""Smoothness filtration of C^l_*(a, b) and its spectral sequence.

A chain lies in F_p when it has at most p smooth points.  The boundary
always removes at least one smooth point, so the E^1 term is the free group
on chains with exactly p smooth points, and d^1 keeps only the faces with
p - 1 smooth points.  Later pages are computed as subquotients

    E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1}),
    Z^r_p = {x in F_p : dx in F_{p-r}},

with integer kernel bases and Smith normal form, so torsion is tracked.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chains import HomologyGroup, MagnitudeComplex, chain_boundary
from .metric import FiniteMetricSpace, _four_cut, _length, _smooth_positions, frame
from .smith import IntegerMatrix, QuotientGroup, invariant_factors, kernel_basis, quotient, solve_in_lattice

INFINITY = None


class SpectralConsistencyError(RuntimeError):
    """Raised when a page computation contradicts the filtration structure."""


@dataclass
class PageEntry:
    """One E^r_{p,q}: generators (vectors in the chain basis of degree p+q)
    modulo relations, with the resulting group structure."""

    p: int
    q: int
    generators: list
    relations: list
    group: QuotientGroup

    @property
    def rank(self) -> int:
        return self.group.rank

    @property
    def torsion(self) -> tuple:
        return self.group.torsion


@dataclass
class SpectralPage:
    r: int | None
    filtered: "FilteredComplex"
    entries: dict = field(default_factory=dict)
    differentials: dict = field(default_factory=dict)
    # E^1 only: chain -> frame, chain -> tuple of segment lengths
    frames: dict = field(default_factory=dict)
    length_tuples: dict = field(default_factory=dict)

    def rank(self, p: int, q: int) -> int:
        e = self.entries.get((p, q))
        return e.rank if e else 0

    def group(self, p: int, q: int) -> HomologyGroup:
        e = self.entries.get((p, q))
        if e is None:
            return HomologyGroup()
        return HomologyGroup(e.rank, e.torsion)

    def target(self, p: int, q: int) -> tuple[int, int]:
        return p - self.r, q + self.r - 1

    def frame_blocks(self, p: int, q: int) -> dict:
        """E^1 only: chains of E^1_{p,q} grouped by frame."""
        blocks: dict = {}
        for c in self.filtered.chains_with_sigma(p + q, p):
            blocks.setdefault(self.frames[c], []).append(c)
        return blocks

    def to_json(self, labels=None) -> dict:
        name = (lambda x: labels[x]) if labels else (lambda x: x)
        out = []
        for (p, q), e in sorted(self.entries.items()):
            row = {"p": p, "q": q, "rank": e.rank, "torsion": list(e.torsion)}
            if self.r == 1:
                row["frames"] = [
                    {"frame": [name(x) for x in fr], "size": len(cs)}
                    for fr, cs in sorted(self.frame_blocks(p, q).items())
                ]
            out.append(row)
        return {"page": "inf" if self.r is None else self.r, "entries": out}


class FilteredComplex:
    """C^l_n(a, b) for n <= max_n + 1 with each basis chain's smoothness."""

    def __init__(self, m: FiniteMetricSpace, ell, a: int, b: int, max_n: int = 4):
        if max_n < 1:
            raise ValueError("max_n must be at least 1")
        self.m = m
        self.ell = Fraction(ell)
        self.a, self.b = a, b
        self.max_n = max_n
        self.cx = MagnitudeComplex(m, ell, a, b)
        self.sigma = {}
        for n in range(max_n + 2):
            self.sigma[n] = [len(_smooth_positions(c, m.d)) for c in self.cx.basis(n).chains]

    def basis(self, n: int):
        return self.cx.basis(n)

    def dense_boundary(self, n: int) -> list[list[int]]:
        return self.cx.boundary(n).to_dense()

    def chains_with_sigma(self, n: int, p: int) -> list[tuple]:
        return [c for c, s in zip(self.basis(n).chains, self.sigma.get(n, [])) if s == p]

    def indices(self, n: int, pred) -> list[int]:
        return [i for i, s in enumerate(self.sigma.get(n, [])) if pred(s)]

    # -- lattices ---------------------------------------------------------

    def z(self, n: int, p: int, r: int | None) -> list[list[int]]:
        """Basis of Z^r_p in degree n; r=None means cycles inside F_p."""
        dim = len(self.basis(n))
        cols = self.indices(n, lambda s: s <= p)
        if not cols:
            return []
        if n == 0:
            rows = []
        else:
            cut = -1 if r is None else p - r
            rows = self.indices(n - 1, lambda s: s > cut)
        if not rows:
            vecs = [[int(i == j) for i in range(len(cols))] for j in range(len(cols))]
        else:
            full = self.dense_boundary(n)
            sub = IntegerMatrix.from_dense([[full[i][j] for j in cols] for i in rows], cols=len(cols))
            vecs = kernel_basis(sub)
        out = []
        for v in vecs:
            w = [0] * dim
            for k, j in enumerate(cols):
                w[j] = v[k]
            out.append(w)
        return out

    def image(self, n: int, vectors: list[list[int]]) -> list[list[int]]:
        """Boundary of degree-n vectors, as degree-(n-1) vectors."""
        if n == 0:
            return [[] for _ in vectors]
        full = self.dense_boundary(n)
        rows = len(full)
        return [[sum(full[i][j] * v[j] for j in range(len(v)) if v[j]) for i in range(rows)]
                for v in vectors]

    def e_term(self, p: int, q: int, r: int | None) -> PageEntry:
        n = p + q
        num = self.z(n, p, r)
        if r is None:
            den = self.z(n, p - 1, None) + _boundaries_in_filtration(self, n, p)
        else:
            den = self.z(n, p - 1, r - 1) + self.image(n + 1, self.z(n + 1, p + r - 1, r - 1))
        den = [v for v in den if any(v)]
        return PageEntry(p, q, num, den, quotient(num, den))


def _in_filtration(v, sigma, p) -> bool:
    return all(not x or s <= p for x, s in zip(v, sigma))


def _boundaries_in_filtration(fc: FilteredComplex, n: int, p: int) -> list[list[int]]:
    """Generators of (image of the boundary) intersected with F_p in degree n."""
    size = len(fc.basis(n + 1))
    if not size:
        return []
    rows = fc.indices(n, lambda s: s > p)
    if rows:
        full = fc.dense_boundary(n + 1)
        sub = IntegerMatrix.from_dense([[full[i][j] for j in range(size)] for i in rows], cols=size)
        pre = kernel_basis(sub)
    else:
        pre = [[int(i == j) for i in range(size)] for j in range(size)]
    return fc.image(n + 1, pre)


def e1_page(m: FiniteMetricSpace, ell, a: int, b: int, max_n: int = 4) -> SpectralPage:
    """E^1: free on chains with exactly p smooth points, with frames recorded."""
    fc = FilteredComplex(m, ell, a, b, max_n)
    page = SpectralPage(1, fc)
    for n in range(max_n + 1):
        basis = fc.basis(n)
        for p in range(n + 1):
            idx = fc.indices(n, lambda s: s == p)
            gens = [[int(i == j) for i in range(len(basis))] for j in idx]
            page.entries[p, n - p] = PageEntry(p, n - p, gens, [], QuotientGroup(len(idx)))
        for c in basis.chains:
            fr = frame(c, m.d)
            page.frames[c] = fr
            page.length_tuples[c] = _segment_lengths(c, fr, m)
    for (p, q) in page.entries:
        if p >= 1:
            page.differentials[p, q] = d1_matrix(page, p, q)
    return page


def _segment_lengths(c: tuple, fr: tuple, m: FiniteMetricSpace) -> tuple:
    """Lengths of the stretches of ``c`` between consecutive frame points."""
    smooth = set(_smooth_positions(c, m.d))
    cuts = [i for i in range(len(c)) if i not in smooth]
    return tuple(_length(c[i:j + 1], m.d) for i, j in zip(cuts, cuts[1:]))


def d1_matrix(page: SpectralPage, p: int, q: int) -> IntegerMatrix:
    """d^1 : E^1_{p,q} -> E^1_{p-1,q} in the chain bases of the two entries."""
    if page.r != 1:
        raise ValueError("d1_matrix needs the E^1 page")
    fc = page.filtered
    n = p + q
    src = fc.chains_with_sigma(n, p)
    dst = fc.chains_with_sigma(n - 1, p - 1) if n >= 1 else []
    pos = {c: i for i, c in enumerate(dst)}
    entries = {}
    for j, c in enumerate(src):
        for face, k in chain_boundary(c, fc.m.d).items():
            i = pos.get(face)
            if i is not None:
                entries[i, j] = k
    return IntegerMatrix(len(dst), len(src), entries)


def _map_rank(matrix_cols: list[list[int]], relations: list[list[int]], dim: int) -> int:
    """Rank over Q of a map into a presented group span(gens)/span(relations)."""
    def qrank(vectors):
        if not vectors:
            return 0
        return len(invariant_factors(IntegerMatrix.from_dense(
            [[v[i] for v in vectors] for i in range(dim)], cols=len(vectors))))
    return qrank(matrix_cols + relations) - qrank(relations)


def page_advance(page: SpectralPage) -> SpectralPage:
    """E^{r+1} from E^r, with d^{r+1} induced by the boundary on representatives."""
    fc = page.filtered
    r = page.r + 1
    nxt = SpectralPage(r, fc)
    for (p, q) in page.entries:
        nxt.entries[p, q] = fc.e_term(p, q, r)
    for (p, q), e in nxt.entries.items():
        n = p + q
        tp, tq = p - r, q + r - 1
        if tp < 0 or n == 0 or (tp, tq) not in nxt.entries:
            continue
        images = fc.image(n, e.generators)
        sig = fc.sigma[n - 1]
        for v in images:
            if not _in_filtration(v, sig, tp):
                raise SpectralConsistencyError(
                    f"boundary of a Z^{r}_{p} representative leaves F_{tp} in degree {n - 1}")
        tgt = nxt.entries[tp, tq]
        coords = solve_in_lattice(tgt.generators, images)
        nxt.differentials[p, q] = IntegerMatrix.from_dense(
            [[coords[j][i] for j in range(len(coords))] for i in range(len(tgt.generators))],
            cols=len(coords))
    _check_ranks(page, nxt)
    return nxt


def _differential_rank(page: SpectralPage, key) -> int:
    """Rank over Q of d^r leaving ``key``."""
    fc = page.filtered
    p, q = key
    e = page.entries[key]
    tgt_key = page.target(p, q)
    if tgt_key not in page.entries or not e.generators:
        return 0
    tgt = page.entries[tgt_key]
    n = p + q
    dim = len(fc.basis(n - 1))
    if page.r == 1:
        # E^1 generators are chains; keep only the components with sigma = p - 1
        sig = fc.sigma[n - 1]
        images = [[x if s == p - 1 else 0 for x, s in zip(v, sig)] for v in fc.image(n, e.generators)]
        return _map_rank(images, [], dim)
    images = fc.image(n, e.generators)
    return _map_rank(images, tgt.relations, dim)


def _check_ranks(prev: SpectralPage, nxt: SpectralPage) -> None:
    top = max(p + q for p, q in prev.entries)
    for (p, q), e in prev.entries.items():
        if p + q == top:
            # the incoming differential starts in a degree that was not built
            continue
        out_rank = _differential_rank(prev, (p, q))
        src = (p + prev.r, q - prev.r + 1)
        in_rank = _differential_rank(prev, src) if src in prev.entries else 0
        expected = e.rank - out_rank - in_rank
        if nxt.rank(p, q) != expected:
            raise SpectralConsistencyError(
                f"rank E^{nxt.r}_{p},{q} = {nxt.rank(p, q)}, expected {expected} from E^{prev.r}")


def e_infinity(fc: FilteredComplex) -> SpectralPage:
    page = SpectralPage(INFINITY, fc)
    for n in range(fc.max_n + 1):
        for p in range(n + 1):
            page.entries[p, n - p] = fc.e_term(p, n - p, None)
    return page


def spectral_pages(m: FiniteMetricSpace, ell, a: int, b: int, max_n: int = 4) -> list[SpectralPage]:
    """E^1, E^2, ... until every differential touching degree <= max_n vanishes."""
    pages = [e1_page(m, ell, a, b, max_n)]
    # d^r leaves F_p for F_{p-r}; filtration degrees in C_n are at most n - 1
    while pages[-1].r <= max_n:
        pages.append(page_advance(pages[-1]))
    return pages


@dataclass
class ConvergenceReport:
    ell: Fraction
    a: int
    b: int
    rows: list
    stable_page: int
    pages: list = field(default_factory=list, repr=False)
    e_infinity: SpectralPage | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return all(row["match"] for row in self.rows)


def convergence_check(m: FiniteMetricSpace, ell, a: int, b: int, max_n: int = 4) -> ConvergenceReport:
    """Compare graded E^infinity ranks with direct homology ranks, degree by degree.

    Torsion of E^infinity is reported but not compared: the extension
    problem can move torsion between graded pieces.
    """
    pages = spectral_pages(m, ell, a, b, max_n)
    last = pages[-1]
    fc = last.filtered
    inf = e_infinity(fc)
    rows = []
    for n in range(max_n + 1):
        h = fc.cx.homology(n)
        ranks = {p: inf.rank(p, n - p) for p in range(n + 1)}
        stable = all(last.rank(p, n - p) == ranks[p] for p in ranks)
        rows.append({
            "n": n,
            "e_inf_ranks": ranks,
            "e_inf_torsion": {p: list(inf.entries[p, n - p].torsion) for p in ranks},
            "rank_sum": sum(ranks.values()),
            "direct": h,
            "stable": stable,
            "match": stable and sum(ranks.values()) == h.rank,
        })
    return ConvergenceReport(Fraction(ell), a, b, rows, last.r, pages, inf)


def e_infinity_02_quotient(m: FiniteMetricSpace, ell, a: int, b: int) -> HomologyGroup:
    """E^1_{0,2} modulo d^1(E^1_{1,2}) plus the boundaries of 4-cut 3-chains.

    Computed straight from chains, independently of the page machinery.
    """
    cx = MagnitudeComplex(m, ell, a, b)
    d = m.d
    two = [c for c in cx.basis(2).chains if not _smooth_positions(c, d)]
    pos = {c: i for i, c in enumerate(two)}
    rels = []
    for c in cx.basis(3).chains:
        smooth = _smooth_positions(c, d)
        if len(smooth) == 1 or (len(smooth) == 2 and _four_cut(c, d)):
            v = [0] * len(two)
            for face, k in chain_boundary(c, d).items():
                if face in pos:
                    v[pos[face]] += k
            if any(v):
                rels.append(v)
    gens = [[int(i == j) for i in range(len(two))] for j in range(len(two))]
    g = quotient(gens, rels)
    return HomologyGroup(g.rank, g.torsion)
