"""Exact integer matrices, Smith normal form and lattice helpers.

Boundary matrices are stored sparse (a dict of nonzero entries).  Homology
only needs invariant factors, which :func:`invariant_factors` computes by
eliminating unit pivots sparsely and running the dense Smith reduction on
whatever block is left.  :func:`smith_normal_form` is the full dense
reduction with unimodular transforms.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class IntegerMatrix:
    """Sparse ``rows x cols`` matrix of Python integers."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {(i, j): int(v) for i, row in enumerate(data) for j, v in enumerate(row) if v}
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, key) -> int:
        return self.entries.get(key, 0)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def to_numpy(self) -> np.ndarray:
        return np.array(self.to_dense(), dtype=object).reshape(self.rows, self.cols)

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def column(self, j: int) -> dict[int, int]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def is_zero(self) -> bool:
        return not self.entries

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out[i, j] = out.get((i, j), 0) + a * b
        return IntegerMatrix(self.rows, other.cols, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def determinant(m: IntegerMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = m.to_dense()
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


# -- dense Smith reduction --------------------------------------------------

def _snf_dense(a: list[list[int]], track: bool):
    """Reduce ``a`` in place.  Returns (diagonal, U, V) with U a V = D."""
    m = len(a)
    n = len(a[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if track:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        if track:
            for row in V:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, c):  # row[dst] += c * row[src]
        rs, rd = a[src], a[dst]
        for j in range(n):
            if rs[j]:
                rd[j] += c * rs[j]
        if track:
            us, ud = U[src], U[dst]
            for j in range(m):
                if us[j]:
                    ud[j] += c * us[j]

    def add_col(dst, src, c):  # col[dst] += c * col[src]
        for row in a:
            if row[src]:
                row[dst] += c * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += c * row[src]

    diag = []
    for t in range(min(m, n)):
        # pivot of minimal absolute value limits coefficient growth
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        done = False
            if not done:
                best = None
                for i in range(t, m):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, "r")
                for j in range(t, n):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            p = a[t][t]
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            if track:
                U[t] = [-v for v in U[t]]
        diag.append(a[t][t])
    return diag, U, V


def smith_normal_form(M: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``, U and V unimodular.

    ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``.
    """
    a = M.to_dense()
    if M.rows == 0 or M.cols == 0:
        return IntegerMatrix.identity(M.rows), IntegerMatrix(M.rows, M.cols), IntegerMatrix.identity(M.cols)
    diag, U, V = _snf_dense(a, track=True)
    D = IntegerMatrix(M.rows, M.cols, {(i, i): v for i, v in enumerate(diag)})
    return IntegerMatrix.from_dense(U, M.rows), D, IntegerMatrix.from_dense(V, M.cols)


def invariant_factors(M: IntegerMatrix) -> list[int]:
    """Nonzero Smith diagonal of ``M`` (its length is the rank)."""
    rows: dict[int, dict[int, int]] = {}
    for (i, j), v in M.entries.items():
        rows.setdefault(i, {})[j] = v
    cols: dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)

    units = 0
    while True:
        pivot = None
        for i, r in rows.items():
            for j, v in r.items():
                if v == 1 or v == -1:
                    cost = (len(r) - 1) * (len(cols[j]) - 1)
                    if pivot is None or cost < pivot[0]:
                        pivot = (cost, i, j)
                        if cost == 0:
                            break
            if pivot and pivot[0] == 0:
                break
        if pivot is None:
            break
        _, pi, pj = pivot
        prow = rows.pop(pi)
        s = prow[pj]
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols[pj]):
            r = rows[i]
            c = r[pj] * s  # pivot is +-1, so r - c*prow clears column pj
            for j, v in prow.items():
                nv = r.get(j, 0) - c * v
                if nv:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = nv
                else:
                    if j in r:
                        del r[j]
                        cols[j].discard(i)
            if not r:
                del rows[i]
        del cols[pj]
        units += 1

    rest = [i for i, r in rows.items() if r]
    factors = [1] * units
    if rest:
        used = sorted({j for i in rest for j in rows[i]})
        pos = {j: k for k, j in enumerate(used)}
        block = [[0] * len(used) for _ in rest]
        for bi, i in enumerate(rest):
            for j, v in rows[i].items():
                block[bi][pos[j]] = v
        diag, _, _ = _snf_dense(block, track=False)
        factors.extend(diag)
    return factors


def rank(M: IntegerMatrix) -> int:
    return len(invariant_factors(M))


def normalize_torsion(orders: Iterable[int]) -> list[int]:
    """Reassemble cyclic orders into a divisibility chain of factors > 1."""
    from sympy import factorint

    powers: dict[int, list[int]] = {}
    for o in orders:
        if o <= 1:
            continue
        for p, e in factorint(o).items():
            powers.setdefault(p, []).append(p ** e)
    for lst in powers.values():
        lst.sort(reverse=True)
    length = max((len(v) for v in powers.values()), default=0)
    chain = []
    for k in range(length):
        f = 1
        for lst in powers.values():
            if k < len(lst):
                f *= lst[k]
        chain.append(f)
    return sorted(chain)


# -- lattice helpers for subquotients ---------------------------------------

def kernel_basis(M: IntegerMatrix) -> list[list[int]]:
    """A Z-basis of ``{v : M v = 0}`` as a list of integer vectors.

    Column operations (tracked in ``V``) bring ``M`` to column echelon
    form; the columns of ``V`` whose images vanish span the kernel and,
    being part of a unimodular matrix, form a saturated basis.
    """
    n = M.cols
    if n == 0:
        return []
    a = M.to_dense()
    V = [[int(i == j) for i in range(n)] for j in range(n)]  # V[j] = column j
    cols = [[a[i][j] for i in range(M.rows)] for j in range(n)]
    active = list(range(n))
    for i in range(M.rows):
        nz = [j for j in active if cols[j][i]]
        if not nz:
            continue
        while len(nz) > 1:
            nz.sort(key=lambda j: abs(cols[j][i]))
            p = nz[0]
            for j in nz[1:]:
                q = cols[j][i] // cols[p][i]
                cj, cp = cols[j], cols[p]
                for k in range(M.rows):
                    if cp[k]:
                        cj[k] -= q * cp[k]
                vj, vp = V[j], V[p]
                for k in range(n):
                    if vp[k]:
                        vj[k] -= q * vp[k]
            nz = [j for j in nz if cols[j][i]]
        active.remove(nz[0])
    return [V[j] for j in active]


def solve_in_lattice(basis: Sequence[Sequence[int]], targets: Sequence[Sequence[int]]) -> list[list[int]]:
    """Integer coordinates of each target in the given independent basis.

    Raises ``ValueError`` if some target is not an integral combination.
    """
    k = len(basis)
    if k == 0:
        if any(any(t) for t in targets):
            raise ValueError("nonzero target in the zero lattice")
        return [[] for _ in targets]
    dim = len(basis[0])
    # rows: coordinates; augmented columns: basis vectors then targets
    aug = [[Fraction(basis[c][r]) for c in range(k)] + [Fraction(t[r]) for t in targets]
           for r in range(dim)]
    pivots = []
    row = 0
    for c in range(k):
        piv = next((r for r in range(row, dim) if aug[r][c]), None)
        if piv is None:
            raise ValueError("basis vectors are linearly dependent")
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][c]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(dim):
            if r != row and aug[r][c]:
                f = aug[r][c]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[row])]
        pivots.append(row)
        row += 1
    for r in range(row, dim):
        if any(aug[r][k:]):
            raise ValueError("target outside the span of the basis")
    out = []
    for t in range(len(targets)):
        coords = [aug[pivots[c]][k + t] for c in range(k)]
        if any(x.denominator != 1 for x in coords):
            raise ValueError("target is not an integral combination")
        out.append([int(x) for x in coords])
    return out


@dataclass(frozen=True)
class QuotientGroup:
    """``rank`` and ``torsion`` of a finitely generated abelian group."""

    rank: int
    torsion: tuple = ()


def quotient(numerator: Sequence[Sequence[int]], denominator: Sequence[Sequence[int]]) -> QuotientGroup:
    """Structure of ``span(numerator) / span(denominator)``.

    ``numerator`` must be linearly independent and contain the span of
    ``denominator``.
    """
    coords = solve_in_lattice(numerator, denominator)
    k = len(numerator)
    rel = IntegerMatrix.from_dense([[coords[t][c] for t in range(len(coords))] for c in range(k)],
                                   cols=len(coords))
    f = invariant_factors(rel)
    return QuotientGroup(k - len(f), tuple(x for x in f if x > 1))
