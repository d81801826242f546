"""Magnitude chain complex C^l_*(a, b) and its integral homology."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .metric import DistanceFn, FiniteMetricSpace, _between
from .smith import IntegerMatrix, invariant_factors, normalize_torsion


@dataclass(frozen=True)
class HomologyGroup:
    """Finitely generated abelian group ``Z^rank + sum Z/t``."""

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        if any(x <= 1 for x in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not a divisibility chain of factors > 1")
        object.__setattr__(self, "torsion", t)

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __add__(self, other: "HomologyGroup") -> "HomologyGroup":
        return HomologyGroup(self.rank + other.rank,
                             tuple(normalize_torsion(self.torsion + other.torsion)))

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


class FormalSum(Mapping):
    """Integer linear combination of chains; zero coefficients are dropped."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for chain, coeff in items:
            chain = tuple(chain)
            acc[chain] = acc.get(chain, 0) + int(coeff)
        self._terms = {c: k for c, k in acc.items() if k}

    @classmethod
    def of(cls, chain: Sequence, coeff: int = 1) -> "FormalSum":
        return cls([(tuple(chain), coeff)])

    def __getitem__(self, chain) -> int:
        return self._terms[tuple(chain)]

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum(list(self.items()) + list(other.items()))

    def __neg__(self) -> "FormalSum":
        return FormalSum((c, -k) for c, k in self.items())

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def __mul__(self, k: int) -> "FormalSum":
        return FormalSum((c, k * v) for c, v in self.items())

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, FormalSum):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "FormalSum(0)"
        body = " ".join(f"{'+' if k > 0 else '-'}{abs(k) if abs(k) != 1 else ''}<{', '.join(map(str, c))}>"
                        for c, k in self.items())
        return f"FormalSum({body})"


def chain_boundary(chain: Sequence, d: DistanceFn) -> FormalSum:
    """Magnitude boundary: sum of (-1)^i times the chain with smooth x_i removed."""
    chain = tuple(chain)
    terms = []
    for i in range(1, len(chain) - 1):
        if _between(chain[i - 1], chain[i], chain[i + 1], d):
            terms.append((chain[:i] + chain[i + 1:], -1 if i % 2 else 1))
    return FormalSum(terms)


def boundary(x: FormalSum, d: DistanceFn) -> FormalSum:
    out = FormalSum()
    for chain, k in x.items():
        out = out + chain_boundary(chain, d) * k
    return out


# -- enumeration ------------------------------------------------------------

def length_spectrum(m: FiniteMetricSpace, n: int, a: int, b: int) -> list[Fraction]:
    """All lengths l for which some proper n-chain runs from a to b."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    reach = {a: {Fraction(0)}}
    for _ in range(n):
        nxt: dict = {}
        for x, lengths in reach.items():
            for y in m.points:
                if y != x:
                    dxy = m.d(x, y)
                    nxt.setdefault(y, set()).update(l + dxy for l in lengths)
        reach = nxt
    return sorted(reach.get(b, ()))


def spectrum_upto(m: FiniteMetricSpace, max_n: int, a: int, b: int) -> list[Fraction]:
    """Union of the length spectra in degrees 0..max_n."""
    out: set = set()
    for n in range(max_n + 1):
        out.update(length_spectrum(m, n, a, b))
    return sorted(out)


@dataclass(frozen=True)
class ChainBasis:
    """Proper n-chains of length exactly ``length`` from a to b, sorted."""

    degree: int
    length: Fraction
    a: int
    b: int
    chains: tuple

    @cached_property
    def index(self) -> dict:
        return {c: i for i, c in enumerate(self.chains)}

    def __len__(self) -> int:
        return len(self.chains)

    def __iter__(self):
        return iter(self.chains)

    def vector(self, x: FormalSum) -> list[int]:
        v = [0] * len(self.chains)
        for c, k in x.items():
            v[self.index[c]] = k
        return v


def _enumerate(m: FiniteMetricSpace, n: int, ell: Fraction, a: int, b: int) -> list[tuple]:
    if n == 0:
        return [(a,)] if a == b and ell == 0 else []
    if m.d(a, b) > ell:
        return []
    d = m.dist
    out = []
    path = [a]

    def extend(cur: int, acc: Fraction, steps_left: int):
        if steps_left == 1:
            if cur != b and acc + d[cur][b] == ell:
                out.append(tuple(path) + (b,))
            return
        for x in m.points:
            if x == cur:
                continue
            nacc = acc + d[cur][x]
            if nacc + d[x][b] > ell:
                continue
            path.append(x)
            extend(x, nacc, steps_left - 1)
            path.pop()

    extend(a, Fraction(0), n)
    return out


def enumerate_chains(m: FiniteMetricSpace, n: int, ell, a: int, b: int) -> ChainBasis:
    """Basis of C^l_n(a, b) in lexicographic order.

    Depth-first from ``a``; a prefix is abandoned once its length plus the
    distance still to cover exceeds ``ell``.  The basis size can grow
    combinatorially with ``n``.
    """
    ell = Fraction(ell)
    if ell < 0:
        raise ValueError("length must be nonnegative")
    return ChainBasis(n, ell, a, b, tuple(_enumerate(m, n, ell, a, b)))


def boundary_matrix(m: FiniteMetricSpace, basis_n: ChainBasis, basis_n_minus_1: ChainBasis) -> IntegerMatrix:
    """Matrix of the boundary C^l_n(a,b) -> C^l_{n-1}(a,b) in the given bases."""
    src, dst = basis_n, basis_n_minus_1
    if (src.length, src.a, src.b) != (dst.length, dst.a, dst.b) or src.degree != dst.degree + 1:
        raise ValueError("bases must share (length, a, b) and differ by one in degree")
    entries = {}
    for j, c in enumerate(src.chains):
        for face, k in chain_boundary(c, m.d).items():
            i = dst.index.get(face)
            if i is None:
                raise ValueError(f"face {face} of {c} missing from target basis")
            entries[i, j] = k
    return IntegerMatrix(len(dst), len(src), entries)


class MagnitudeComplex:
    """Lazily built C^l_*(a, b) with cached bases and boundary matrices."""

    def __init__(self, m: FiniteMetricSpace, ell, a: int, b: int):
        self.m = m
        self.ell = Fraction(ell)
        self.a = a
        self.b = b
        self._bases: dict[int, ChainBasis] = {}
        self._mats: dict[int, IntegerMatrix] = {}
        self._factors: dict[int, list[int]] = {}

    def basis(self, n: int) -> ChainBasis:
        if n not in self._bases:
            if n < 0:
                self._bases[n] = ChainBasis(n, self.ell, self.a, self.b, ())
            else:
                self._bases[n] = enumerate_chains(self.m, n, self.ell, self.a, self.b)
        return self._bases[n]

    def boundary(self, n: int) -> IntegerMatrix:
        """Matrix of C_n -> C_{n-1}."""
        if n not in self._mats:
            if n <= 0:
                self._mats[n] = IntegerMatrix(len(self.basis(n - 1)), len(self.basis(n)))
            else:
                self._mats[n] = boundary_matrix(self.m, self.basis(n), self.basis(n - 1))
        return self._mats[n]

    def factors(self, n: int) -> list[int]:
        if n not in self._factors:
            self._factors[n] = invariant_factors(self.boundary(n))
        return self._factors[n]

    def homology(self, n: int) -> HomologyGroup:
        dim = len(self.basis(n))
        r = dim - len(self.factors(n)) - len(self.factors(n + 1))
        return HomologyGroup(r, tuple(f for f in self.factors(n + 1) if f > 1))

    def report(self, n: int) -> dict:
        h = self.homology(n)
        return {
            "n": n,
            "length": str(self.ell),
            "a": self.m.labels[self.a],
            "b": self.m.labels[self.b],
            "rank": h.rank,
            "torsion": list(h.torsion),
            "dim_chains": len(self.basis(n)),
            "dim_boundaries": len(self.factors(n + 1)),
        }


def homology(m: FiniteMetricSpace, n: int, ell, a: int, b: int) -> HomologyGroup:
    """H^l_n(a, b): rank = dim ker - rank of incoming boundary."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return MagnitudeComplex(m, ell, a, b).homology(n)


def homology_total(m: FiniteMetricSpace, n: int, ell) -> HomologyGroup:
    """H^l_n(X) as the direct sum of the summands over ordered pairs."""
    total = HomologyGroup()
    for a in m.points:
        for b in m.points:
            total = total + homology(m, n, ell, a, b)
    return total

