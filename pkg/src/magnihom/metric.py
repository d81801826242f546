"""Finite metric spaces with exact rational distances and chain predicates.

Points are referred to by their integer index.  A chain is a plain tuple of
indices; an ``n``-chain has ``n + 1`` entries.  Every distance is a
:class:`fractions.Fraction`, so length equalities are decided exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

import numpy as np

Chain = tuple
DistanceFn = Callable[[Hashable, Hashable], Fraction]


def as_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction, refusing floats."""
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, float):
        raise TypeError(f"floating point value {value!r} is not exact")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        if not _is_int_literal(num) or (sep and not _is_int_literal(den)):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(int(num), int(den) if sep else 1)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def _is_int_literal(text: str) -> bool:
    text = text.strip()
    if text[:1] in "+-":
        text = text[1:]
    return text.isdigit()


@dataclass(frozen=True)
class MetricViolation:
    """First violated metric axiom found by :func:`validate_metric`."""

    axiom: str
    indices: tuple

    def __str__(self) -> str:
        return f"{self.axiom} at {self.indices}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: MetricViolation | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_metric(dist) -> ValidationReport:
    """Check the metric axioms on a square matrix of rationals.

    Returns a passing report, or one carrying the first violation in the
    order: shape, diagonal, symmetry, positivity, triangle inequality.
    """
    rows = [list(r) for r in dist]
    n = len(rows)
    for i, r in enumerate(rows):
        if len(r) != n:
            return ValidationReport(False, MetricViolation("non-square", (i,)))
    d = [[as_rational(v) for v in r] for r in rows]
    for i in range(n):
        if d[i][i] != 0:
            return ValidationReport(False, MetricViolation("nonzero diagonal", (i, i)))
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                return ValidationReport(False, MetricViolation("asymmetry", (i, j)))
    for i in range(n):
        for j in range(n):
            if i != j and d[i][j] <= 0:
                return ValidationReport(False, MetricViolation("nonpositive distance", (i, j)))
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if d[i][k] > d[i][j] + d[j][k]:
                    return ValidationReport(
                        False, MetricViolation("triangle inequality", (i, k, j))
                    )
    return ValidationReport(True)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Labelled points with an exact rational distance matrix."""

    labels: tuple
    dist: tuple = field(repr=False)

    def __init__(self, dist, labels: Sequence[str] | None = None, *, check: bool = True):
        matrix = tuple(tuple(as_rational(v) for v in row) for row in dist)
        if labels is None:
            labels = [str(i) for i in range(len(matrix))]
        labels = tuple(str(s) for s in labels)
        if len(labels) != len(matrix):
            raise ValueError("label count does not match matrix size")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        if check:
            report = validate_metric(matrix)
            if not report:
                raise ValueError(f"not a metric: {report.violation}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", matrix)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def points(self) -> range:
        return range(len(self.labels))

    def d(self, x: int, y: int) -> Fraction:
        return self.dist[x][y]

    def index(self, label: str) -> int:
        return self.labels.index(str(label))

    def relabel(self, perm: Sequence[int]) -> "FiniteMetricSpace":
        """Space whose point ``perm[i]`` is this space's point ``i``."""
        n = len(self)
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        dist = [[self.dist[inv[i]][inv[j]] for j in range(n)] for i in range(n)]
        labels = [self.labels[inv[i]] for i in range(n)]
        return FiniteMetricSpace(dist, labels, check=False)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.dist, dtype=object)


# Predicates.  The underscored variants take a distance callable so the same
# code serves finite spaces and points of a metric graph.

def _length(chain: Sequence, d: DistanceFn) -> Fraction:
    return sum((d(x, y) for x, y in zip(chain, chain[1:])), Fraction(0))


def _between(x, y, z, d: DistanceFn) -> bool:
    return x != y and y != z and d(x, y) + d(y, z) == d(x, z)


def _smooth_positions(chain: Sequence, d: DistanceFn) -> list[int]:
    return [
        i for i in range(1, len(chain) - 1)
        if _between(chain[i - 1], chain[i], chain[i + 1], d)
    ]


def is_proper(chain: Sequence) -> bool:
    return len(chain) > 0 and all(x != y for x, y in zip(chain, chain[1:]))


def chain_length(m: FiniteMetricSpace, c: Sequence[int]) -> Fraction:
    """Sum of consecutive distances; zero for a 0-chain."""
    return _length(c, m.d)


def between(m: FiniteMetricSpace, x: int, y: int, z: int) -> bool:
    """``x < y < z``: ``y`` strictly between ``x`` and ``z``."""
    return _between(x, y, z, m.d)


def smoothness_count(m: FiniteMetricSpace, c: Sequence[int]) -> int:
    if not is_proper(c):
        raise ValueError(f"chain {tuple(c)} is not proper")
    return len(_smooth_positions(c, m.d))


def _four_cut(c: Sequence, d: DistanceFn) -> bool:
    x0, x1, x2, x3 = c
    return (
        _between(x0, x1, x2, d)
        and _between(x1, x2, x3, d)
        and _length(c, d) > d(x0, x3)
    )


def is_four_cut(m: FiniteMetricSpace, c: Sequence[int]) -> bool:
    if len(c) != 4:
        raise ValueError("a 4-cut is a 3-chain (four entries)")
    if not is_proper(c):
        raise ValueError(f"chain {tuple(c)} is not proper")
    return _four_cut(c, m.d)


def frame(c: Sequence, d: DistanceFn) -> tuple:
    """Delete the smooth points of ``c``; the result may be improper."""
    smooth = set(_smooth_positions(c, d))
    return tuple(x for i, x in enumerate(c) if i not in smooth)


def random_metric(
    n_points: int,
    rng: np.random.Generator | int | None = None,
    max_weight: int = 4,
    denominator: int = 1,
) -> FiniteMetricSpace:
    """Shortest-path closure of a random symmetric positive integer matrix.

    Entries are drawn uniformly from ``1..max_weight`` and divided by
    ``denominator``; small weights produce many exact betweenness ties.
    """
    rng = np.random.default_rng(rng)
    w = rng.integers(1, max_weight + 1, size=(n_points, n_points))
    d = [[Fraction(0) if i == j else Fraction(int(w[min(i, j), max(i, j)]), denominator)
          for j in range(n_points)] for i in range(n_points)]
    for k in range(n_points):
        for i in range(n_points):
            dik = d[i][k]
            for j in range(n_points):
                if dik + d[k][j] < d[i][j]:
                    d[i][j] = dik + d[k][j]
    return FiniteMetricSpace(d, check=False)
