"""Side-by-side checks of direct homology against the A, B and spectral models."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .chains import homology, length_spectrum, spectrum_upto
from .metric import FiniteMetricSpace
from .simplicial import build_A, build_B, h0_B, reduced_homology_A
from .spectral import convergence_check


def _group(h) -> dict:
    return {"rank": h.rank, "torsion": list(h.torsion)}


def all_pairs(m: FiniteMetricSpace) -> list[tuple[int, int]]:
    return [(a, b) for a in m.points for b in m.points]


def oracle_a_rows(m: FiniteMetricSpace, pairs: Iterable | None = None, degrees=(2, 3, 4)) -> list[dict]:
    """H^{d(a,b)}_n(a, b) against reduced H_{n-2}(A(a, b))."""
    rows = []
    for a, b in pairs or all_pairs(m):
        if a == b:
            continue
        ell = m.d(a, b)
        cx = build_A(m, a, b, max_dim=max(degrees) - 1)
        for n in degrees:
            direct = homology(m, n, ell, a, b)
            model = reduced_homology_A(cx, n - 2)
            rows.append({
                "oracle": "A", "a": m.labels[a], "b": m.labels[b], "n": n, "length": str(ell),
                "direct": _group(direct), "model": _group(model), "match": direct == model,
            })
    return rows


def oracle_b_rows(m: FiniteMetricSpace, pairs: Iterable | None = None) -> list[dict]:
    """H^l_2(a, b) against H_0(B^l(a, b)) for every spectrum length l > d(a, b)."""
    rows = []
    for a, b in pairs or all_pairs(m):
        for ell in length_spectrum(m, 2, a, b):
            if ell <= m.d(a, b):
                continue
            direct = homology(m, 2, ell, a, b)
            model = h0_B(build_B(m, ell, a, b))
            rows.append({
                "oracle": "B", "a": m.labels[a], "b": m.labels[b], "n": 2, "length": str(ell),
                "direct": _group(direct), "model": _group(model), "match": direct == model,
            })
    return rows


def convergence_rows(m: FiniteMetricSpace, pairs: Iterable | None = None, max_n: int = 3) -> list[dict]:
    """Graded E^infinity ranks against direct ranks, one row per (a, b, l, n)."""
    rows = []
    for a, b in pairs or all_pairs(m):
        for ell in spectrum_upto(m, max_n, a, b):
            report = convergence_check(m, ell, a, b, max_n)
            for row in report.rows:
                rows.append({
                    "oracle": "spectral", "a": m.labels[a], "b": m.labels[b], "n": row["n"],
                    "length": str(Fraction(ell)),
                    "direct": _group(row["direct"]),
                    "model": {"rank": row["rank_sum"],
                              "e_inf": {str(p): r for p, r in row["e_inf_ranks"].items()}},
                    "match": row["match"],
                })
    return rows


def all_oracle_rows(m: FiniteMetricSpace, pairs=None, max_n: int = 3) -> list[dict]:
    pairs = list(pairs) if pairs is not None else None
    return (oracle_a_rows(m, pairs, degrees=tuple(range(2, max(max_n, 2) + 1)))
            + oracle_b_rows(m, pairs)
            + convergence_rows(m, pairs, max_n))
