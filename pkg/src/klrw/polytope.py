"""Exact rational convex polytopes in H-representation.

Small dimensions only: vertices come from brute-force n-subsets of the
constraints, volumes from a recursive pulling triangulation.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Sequence

Vec = tuple[Fraction, ...]


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vec | None:
    """Unique solution of a square system, or None if singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(m[r][n] for r in range(n))


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    m = [list(v) for v in vectors]
    if not m:
        return 0
    rk, cols = 0, len(m[0])
    for col in range(cols):
        piv = next((r for r in range(rk, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for r in range(len(m)):
            if r != rk and m[r][col] != 0:
                f = m[r][col] / m[rk][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rk])]
        rk += 1
    return rk


def affine_dim(points: Sequence[Vec]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(r) for r in m]
    n, d = len(a), Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            d = -d
        d *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return d


class Polytope:
    """{x : A x <= b} with exact Fraction data."""

    def __init__(self, A, b):
        self.A = [tuple(Fraction(x) for x in row) for row in A]
        self.b = [Fraction(x) for x in b]
        self.n = len(self.A[0]) if self.A else 0
        self._verts: list[Vec] | None = None

    @staticmethod
    def box(lo: Sequence, hi: Sequence) -> "Polytope":
        n = len(lo)
        A, b = [], []
        for k in range(n):
            e = [0] * n
            e[k] = 1
            A.append(tuple(e))
            b.append(hi[k])
            A.append(tuple(-x for x in e))
            b.append(-Fraction(lo[k]))
        return Polytope(A, b)

    def add(self, a, c) -> "Polytope":
        return Polytope(self.A + [tuple(a)], self.b + [c])

    def contains(self, x, strict=False) -> bool:
        for row, c in zip(self.A, self.b):
            s = sum(r * xi for r, xi in zip(row, x))
            if s > c or (strict and s == c):
                return False
        return True

    def vertices(self) -> list[Vec]:
        if self._verts is None:
            seen = {}
            for S in combinations(range(len(self.A)), self.n):
                x = solve([self.A[i] for i in S], [self.b[i] for i in S])
                if x is not None and x not in seen and self.contains(x):
                    seen[x] = None
            self._verts = list(seen)
        return self._verts

    def dim(self) -> int:
        return affine_dim(self.vertices())

    def is_full(self) -> bool:
        return self.dim() == self.n

    def centroid(self) -> Vec:
        vs = self.vertices()
        return tuple(sum(col) / len(vs) for col in zip(*vs))

    def split(self, a, c):
        """Pieces on either side of a.x = c that are full-dimensional."""
        vals = [sum(x * y for x, y in zip(a, v)) - c for v in self.vertices()]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            return [self]
        lo = self.add(a, c)
        hi = self.add(tuple(-x for x in a), -Fraction(c))
        return [p for p in (lo, hi) if p.is_full()]

    def tight(self, v: Vec) -> frozenset:
        return frozenset(i for i, (row, c) in enumerate(zip(self.A, self.b))
                         if sum(r * x for r, x in zip(row, v)) == c)

    def simplices(self) -> list[tuple[int, ...]]:
        vs = self.vertices()
        tights = [self.tight(v) for v in vs]
        d = affine_dim(vs)

        def tri(face: frozenset, dim: int):
            if dim == 0:
                return [(min(face),)]
            v0 = min(face)
            facets = set()
            for c in range(len(self.A)):
                sub = frozenset(i for i in face if c in tights[i])
                if sub and sub != face and sub not in facets and \
                        affine_dim([vs[i] for i in sorted(sub)]) == dim - 1:
                    facets.add(sub)
            out = []
            for F in sorted(facets, key=sorted):
                if v0 not in F:
                    out.extend((v0,) + s for s in tri(F, dim - 1))
            return out

        return tri(frozenset(range(len(vs))), d) if d >= 0 else []

    def volume(self) -> Fraction:
        vs = self.vertices()
        if affine_dim(vs) < self.n:
            return Fraction(0)
        total = Fraction(0)
        for s in self.simplices():
            p0 = vs[s[0]]
            total += abs(det([[a - b for a, b in zip(vs[i], p0)] for i in s[1:]]))
        return total / factorial(self.n)
