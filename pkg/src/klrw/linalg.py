"""Exact linear algebra over Q on sparse dict vectors (keys are any sortable labels)."""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping


def _clean(v: Mapping) -> dict:
    return {k: Fraction(c) for k, c in v.items() if c}


class Span:
    """Incrementally built row-echelon basis of a subspace."""

    def __init__(self, order=None):
        self.rows: dict = {}  # pivot -> normalized row
        self.order = order or (lambda k: k)

    def reduce(self, vec: Mapping) -> dict:
        v = _clean(vec)
        while v:
            piv = min(v, key=self.order)
            row = self.rows.get(piv)
            if row is None:
                return v
            c = v[piv]
            for k, x in row.items():
                nv = v.get(k, 0) - c * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def add(self, vec: Mapping) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v, key=self.order)
        c = v[piv]
        self.rows[piv] = {k: x / c for k, x in v.items()}
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list[dict]:
        return [dict(r) for r in self.rows.values()]


def rank(vectors: Iterable[Mapping]) -> int:
    s = Span()
    for v in vectors:
        s.add(v)
    return s.dim


def kernel(columns: list[tuple[Hashable, Mapping]]) -> list[dict]:
    """Kernel of the map e_j -> columns[j]; returns vectors over the column labels."""
    span: dict = {}  # pivot -> (image row, combination)
    out = []
    for label, img in columns:
        v = _clean(img)
        comb = {label: Fraction(1)}
        while v:
            piv = min(v)
            if piv not in span:
                break
            row, rc = span[piv]
            c = v[piv] / row[piv]
            for k, x in row.items():
                nv = v.get(k, 0) - c * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
            for k, x in rc.items():
                nc = comb.get(k, 0) - c * x
                if nc:
                    comb[k] = nc
                else:
                    comb.pop(k, None)
        if v:
            span[min(v)] = (v, comb)
        else:
            out.append(comb)
    return out


def complement(space: list[Mapping], sub: Span) -> list[dict]:
    """Vectors of ``space`` (a basis list) spanning a complement of ``sub`` inside span(space)."""
    s = Span(sub.order)
    s.rows = {k: dict(v) for k, v in sub.rows.items()}
    out = []
    for v in space:
        if s.add(v):
            out.append(_clean(v))
    return out
