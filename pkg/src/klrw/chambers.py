"""Flavored sequences and the chamber decomposition of the longitude torus.

A point x of the lifted torus (one real coordinate per corporeal strand)
determines for every interacting pair an integer

    F[a, red (i,m)]   = floor(x_a - lift[i,m])
    F[a, ghost (c,e)] = floor(x_a - x_c - lift[e])

and two points lie in the same chamber exactly when their F-vectors agree
after relabelling strands of equal label and translating strands by
integers (which acts on F by a lattice gauge transformation).  The
canonical key below is the lexicographically least gauge-fixed F over all
relabellings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import floor, factorial, gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from .polytope import Polytope, affine_dim, solve
from .quiver_flavor import (Circuit, FlavorError, Flavoring, enumerate_circuits,
                            is_generic)


class ChamberError(ValueError):
    pass


# ---------------------------------------------------------------- strand data

@dataclass(frozen=True)
class Pair:
    """An interacting (corporeal, ghost/red) pair."""

    a: int
    kind: str  # "red" | "ghost"
    red: tuple | None = None  # framing key (i, m)
    c: int | None = None  # ghost owner
    edge: str | None = None


@dataclass(frozen=True)
class StrandData:
    flavoring: Flavoring
    v: tuple[tuple[str, int], ...]

    @staticmethod
    def make(f: Flavoring, v: Mapping[str, int]) -> "StrandData":
        q = f.cb.base
        missing = [i for i in q.vertices if i not in v]
        if missing:
            raise FlavorError(f"v undefined on {missing}")
        return StrandData(f, tuple((i, int(v[i])) for i in q.vertices))

    @property
    def quiver(self):
        return self.flavoring.cb.base

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(i for i, vi in self.v for _ in range(vi))

    @property
    def names(self) -> tuple[tuple[str, int], ...]:
        return tuple((i, k) for i, vi in self.v for k in range(1, vi + 1))

    @property
    def n(self) -> int:
        return sum(vi for _, vi in self.v)

    def v_of(self, vertex: str) -> int:
        return dict(self.v)[vertex]

    def blocks(self) -> list[list[int]]:
        out, pos = [], 0
        for _, vi in self.v:
            out.append(list(range(pos, pos + vi)))
            pos += vi
        return out

    def pairs(self) -> tuple[Pair, ...]:
        labels = self.labels
        out = []
        for a, la in enumerate(labels):
            for key in self.flavoring.cb.framing_edges:
                if key[0] == la:
                    out.append(Pair(a, "red", red=key))
            for e in self.quiver.edges:
                if e.tail != la:
                    continue
                for c, lc in enumerate(labels):
                    if lc == e.head and c != a:
                        out.append(Pair(a, "ghost", c=c, edge=e.id))
        return tuple(out)

    def label_perms(self) -> list[tuple[int, ...]]:
        """All label-preserving permutations sigma, as tuples sigma[a]."""
        blocks = self.blocks()
        out = []
        for choice in product(*[permutations(b) for b in blocks]):
            sigma = [0] * self.n
            for b, img in zip(blocks, choice):
                for src, dst in zip(b, img):
                    sigma[src] = dst
            out.append(tuple(sigma))
        return out

    def weyl_order(self) -> int:
        out = 1
        for _, vi in self.v:
            out *= factorial(vi)
        return out


def phi(pair: Pair, x: Sequence, lift: Mapping) -> Fraction:
    if pair.kind == "red":
        return Fraction(x[pair.a]) - Fraction(lift[pair.red])
    return Fraction(x[pair.a]) - Fraction(x[pair.c]) - Fraction(lift[pair.edge])


def f_vector(sd: StrandData, x: Sequence, lift: Mapping) -> tuple[int, ...]:
    return tuple(floor(phi(p, x, lift)) for p in sd.pairs())


class Canonicalizer:
    """Canonical form of F-vectors under relabelling and lattice gauge."""

    def __init__(self, sd: StrandData):
        self.sd = sd
        self.pairs = sd.pairs()
        self.index = {self._pkey(p): k for k, p in enumerate(self.pairs)}
        self.perms = sd.label_perms()
        # BFS spanning forest rooted at the red node; depends only on the pair set
        n = sd.n
        adj: dict = {u: [] for u in list(range(n)) + ["inf"]}
        for k, p in enumerate(self.pairs):
            if p.kind == "red":
                adj["inf"].append((p.a, k))
                adj[p.a].append(("inf", k))
            else:
                adj[p.a].append((p.c, k))
                adj[p.c].append((p.a, k))
        self.tree: list[tuple] = []  # (child, parent, pair index)
        seen = {"inf"}
        roots = ["inf"] + list(range(n))
        for r in roots:
            if r in seen and r != "inf":
                continue
            seen.add(r)
            if r != "inf":
                self.tree.append((r, None, None))
            queue = [r]
            while queue:
                u = queue.pop(0)
                for w, k in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        self.tree.append((w, u, k))
                        queue.append(w)
        self._perm_maps = [self._perm_map(s) for s in self.perms]

    @staticmethod
    def _pkey(p: Pair):
        return (p.a, p.kind, p.red, p.c, p.edge)

    def _perm_map(self, sigma):
        """Index map: position k of permuted F receives entry from src[k]."""
        src = [0] * len(self.pairs)
        for k, p in enumerate(self.pairs):
            q = Pair(sigma[p.a], p.kind, p.red, None if p.c is None else sigma[p.c], p.edge)
            src[self.index[self._pkey(q)]] = k
        return src

    def gauge_fix(self, F: Sequence[int]) -> tuple[int, ...]:
        nvals = {"inf": 0}
        for child, parent, k in self.tree:
            if parent is None:
                nvals[child] = 0
                continue
            p = self.pairs[k]
            if p.kind == "red":
                nvals[child] = -F[k]
            elif p.a == child:  # F + n_child - n_parent = 0
                nvals[child] = nvals[parent] - F[k]
            else:  # F + n_parent - n_child = 0
                nvals[child] = nvals[parent] + F[k]
        out = []
        for k, p in enumerate(self.pairs):
            if p.kind == "red":
                out.append(F[k] + nvals[p.a])
            else:
                out.append(F[k] + nvals[p.a] - nvals[p.c])
        return tuple(out)

    def key(self, F: Sequence[int]) -> tuple[int, ...]:
        best = None
        for src in self._perm_maps:
            cand = self.gauge_fix([F[s] for s in src])
            if best is None or cand < best:
                best = cand
        return best if best is not None else ()


# ---------------------------------------------------------------- sequences

@dataclass(frozen=True)
class Item:
    kind: str  # "C" | "G" | "R"
    k: int | None = None  # 1-based corporeal position for C and G
    edge: str | None = None
    red: tuple | None = None

    def __str__(self):
        if self.kind == "C":
            return str(self.k)
        if self.kind == "G":
            return f"({self.k},{self.edge})"
        return f"(*,{self.red[0]}:{self.red[1]})"


@dataclass(frozen=True)
class FlavoredSequence:
    labels: tuple[str, ...]
    longitudes: tuple
    order: tuple[Item, ...]  # circular list
    group_kind: str = "Q/Z"
    p: int | None = None

    def __str__(self):
        return " < ".join(str(x) for x in self.order)


def _item_longitude(seq: FlavoredSequence, it: Item, f: Flavoring):
    g = f.group
    if it.kind == "C":
        return g.element(seq.longitudes[it.k - 1])
    if it.kind == "G":
        return g.add(seq.longitudes[it.k - 1], f[it.edge])
    return f[it.red]


def cgr_items(labels: Sequence[str], f: Flavoring) -> list[Item]:
    q = f.cb.base
    items = [Item("C", k + 1) for k in range(len(labels))]
    for k, lab in enumerate(labels):
        for e in q.edges:
            if e.head == lab:
                items.append(Item("G", k + 1, edge=e.id))
    items += [Item("R", red=key) for key in f.cb.framing_edges]
    return items


def preferred_sequence(point: Mapping[tuple[str, int], object], f: Flavoring,
                       check_generic: bool = True) -> FlavoredSequence:
    if check_generic and not is_generic(f).generic:
        raise ChamberError("non-generic flavoring")
    g, q = f.group, f.cb.base
    vo = q.order
    strands = sorted(point.items(), key=lambda kv: (g.unit(kv[1]), vo(kv[0][0]), kv[0][1]))
    labels = tuple(name[0] for name, _ in strands)
    longs = tuple(g.element(val) for _, val in strands)
    seq0 = FlavoredSequence(labels, longs, (), g.kind, g.p)
    rank = {"R": 0, "G": 1, "C": 2}

    def sort_key(it: Item):
        a = g.unit(_item_longitude(seq0, it, f))
        if it.kind == "C":
            return (a, rank["C"], vo(labels[it.k - 1]), it.k, "", 0)
        if it.kind == "G":
            t = q.edge(it.edge).tail
            return (a, rank["G"], vo(t), it.k, it.edge, 0)
        return (a, rank["R"], vo(it.red[0]), 0, "", it.red[1])

    order = tuple(sorted(cgr_items(labels, f), key=sort_key))
    return FlavoredSequence(labels, longs, order, g.kind, g.p)


def _cyc(pos, x, y, z) -> bool:
    a, b, c = pos[x], pos[y], pos[z]
    return (a < b < c) or (b < c < a) or (c < a < b)


def is_valid_sequence(seq: FlavoredSequence, f: Flavoring) -> bool:
    """Axioms (i) weak monotonicity and (ii) tie-break, checked by brute force."""
    g = f.group
    items = list(seq.order)
    if sorted(map(str, items)) != sorted(map(str, cgr_items(seq.labels, f))):
        return False
    pos = {it: n for n, it in enumerate(items)}
    lon = {it: g.unit(_item_longitude(seq, it, f)) for it in items}

    def cyc_vals(a, b, c):
        return (a < b < c) or (b < c < a) or (c < a < b)

    for x in items:
        for y in items:
            for z in items:
                if len({x, y, z}) < 3:
                    continue
                if not _cyc(pos, x, y, z) and cyc_vals(lon[x], lon[y], lon[z]):
                    return False
    for gr in items:
        if gr.kind == "C":
            continue
        for m in items:
            if m.kind != "C" or lon[m] != lon[gr]:
                continue
            for x in items:
                if x in (gr, m) or lon[x] == lon[gr]:
                    continue
                if _cyc(pos, x, m, gr):
                    return False
    return True


def sequence_point(seq: FlavoredSequence, sd: StrandData) -> tuple[Fraction, ...]:
    """Coordinates of the sequence's corporeals in the StrandData indexing."""
    g = sd.flavoring.group
    slots: dict[str, list] = {}
    for lab, val in zip(seq.labels, seq.longitudes):
        slots.setdefault(lab, []).append(g.unit(val))
    out = []
    for lab in sd.labels:
        if not slots.get(lab):
            raise ChamberError("sequence does not match the dimension vector")
        out.append(slots[lab].pop(0))
    return tuple(out)


def sequences_equivalent(s1: FlavoredSequence, s2: FlavoredSequence, sd: StrandData,
                         lift: Mapping | None = None) -> bool:
    f = sd.flavoring
    for s in (s1, s2):
        if not is_valid_sequence(s, f):
            raise ChamberError(f"invalid flavored sequence {s}")
    lift = dict(lift or f.default_lift())
    can = Canonicalizer(sd)
    k1 = can.key(f_vector(sd, sequence_point(s1, sd), lift))
    k2 = can.key(f_vector(sd, sequence_point(s2, sd), lift))
    return k1 == k2


# ---------------------------------------------------------------- chambers

@dataclass
class Chamber:
    id: str
    key: tuple
    representative: tuple
    volume: Fraction | None = None
    count: int | None = None
    cells: list = field(default_factory=list, repr=False)

    def sequence(self, sd: StrandData) -> FlavoredSequence:
        f = sd.flavoring
        if f.group.kind == "Fp":
            pt = {nm: int(x * f.group.p) for nm, x in zip(sd.names, self.representative)}
        else:
            pt = dict(zip(sd.names, self.representative))
        return preferred_sequence(pt, f, check_generic=False)

    def word(self, sd: StrandData) -> str:
        return str(self.sequence(sd)) if sd.n else "-"


def cube_walls(sd: StrandData, lift: Mapping) -> list[tuple[tuple, Fraction]]:
    """Hyperplanes a.x = c meeting the open unit cube, one per matter wall."""
    n = sd.n
    out = []
    seen = set()
    for p in sd.pairs():
        a = [0] * n
        if p.kind == "red":
            a[p.a] = 1
            vals = [Fraction(lift[p.red]) - floor(Fraction(lift[p.red]))]
        else:
            a[p.a], a[p.c] = 1, -1
            d0 = Fraction(lift[p.edge]) - floor(Fraction(lift[p.edge]))
            vals = [d0, d0 - 1] if d0 != 0 else [d0]
        for c in vals:
            key = (tuple(a), c)
            if key not in seen:
                seen.add(key)
                out.append(key)
    return out


def cube_cells(sd: StrandData, lift: Mapping) -> list[Polytope]:
    n = sd.n
    cells = [Polytope.box([0] * n, [1] * n)]
    for a, c in cube_walls(sd, lift):
        nxt = []
        for cell in cells:
            nxt.extend(cell.split(a, c))
        cells = nxt
    return cells


def _check_lift(sd: StrandData, lift: Mapping):
    f = sd.flavoring
    for k, val in f.beta:
        if f.group.element(lift[k]) != f.group.element(val) and f.group.kind == "Q/Z":
            raise ChamberError(f"lift for {k} does not reduce to the flavor value")


def enumerate_chambers(sd: StrandData, lift: Mapping | None = None,
                       check_generic: bool = True) -> list[Chamber]:
    f = sd.flavoring
    if check_generic and not is_generic(f).generic:
        raise ChamberError("non-generic flavoring")
    lift = dict(lift or f.default_lift())
    can = Canonicalizer(sd)
    if sd.n == 0:
        return [Chamber("c0", (), (), Fraction(1) if f.group.kind == "Q/Z" else None,
                        None if f.group.kind == "Q/Z" else 1)]
    groups: dict = {}
    if f.group.kind == "Q/Z":
        _check_lift(sd, lift)
        for cell in cube_cells(sd, lift):
            x = cell.centroid()
            key = can.key(f_vector(sd, x, lift))
            g = groups.setdefault(key, {"rep": x, "vol": Fraction(0), "cells": []})
            g["vol"] += cell.volume()
            g["cells"].append(cell)
        out = [Chamber("", k, g["rep"], g["vol"], None, g["cells"]) for k, g in groups.items()]
    else:
        p = f.group.p
        counts = fp_scan(sd, lift, p, can)
        out = [Chamber("", k, rep, None, cnt) for k, (cnt, rep) in counts.items()]
    out.sort(key=lambda c: c.key)
    for n, c in enumerate(out):
        c.id = f"c{n}"
    return out


def _integer_lift(sd: StrandData, lift: Mapping, p: int):
    """Scale lifts so that floor computations on k/p are integer divisions."""
    vals = [Fraction(lift[k]) for k in sd.flavoring.cb.edge_keys()]
    D = 1
    for v in vals:
        D = D * v.denominator // gcd(D, v.denominator)
    return D, {k: Fraction(lift[k]) * D * p for k in sd.flavoring.cb.edge_keys()}


def f_matrix(sd: StrandData, lift: Mapping, p: int, ks: np.ndarray) -> np.ndarray:
    """F-vectors of the points ks/p (rows of integer numerators)."""
    D, scaled = _integer_lift(sd, lift, p)
    for v in scaled.values():
        if v.denominator != 1:
            raise ChamberError("torsion scan needs lifts with denominators dividing p*D")
    pairs = sd.pairs()
    cols = []
    for pr in pairs:
        if pr.kind == "red":
            num = D * ks[:, pr.a] - int(scaled[pr.red])
        else:
            num = D * (ks[:, pr.a] - ks[:, pr.c]) - int(scaled[pr.edge])
        cols.append(np.floor_divide(num, D * p))
    if not cols:
        return np.zeros((len(ks), 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def _grid(n: int, p: int) -> np.ndarray:
    axes = np.meshgrid(*[np.arange(p, dtype=np.int64)] * n, indexing="ij")
    return np.stack([a.ravel() for a in axes], axis=1)


def fp_scan(sd: StrandData, lift: Mapping, p: int, can: Canonicalizer) -> dict:
    ks = _grid(sd.n, p)
    F = f_matrix(sd, lift, p, ks)
    rows, first, inv = np.unique(F, axis=0, return_index=True, return_inverse=True)
    counts = np.bincount(inv.ravel(), minlength=len(rows))
    out: dict = {}
    for r, idx, cnt in zip(rows, first, counts):
        key = can.key([int(x) for x in r])
        rep = tuple(Fraction(int(k), p) for k in ks[idx])
        if key in out:
            out[key] = (out[key][0] + int(cnt), min(out[key][1], rep))
        else:
            out[key] = (int(cnt), rep)
    return out


def chamber_volume(c: Chamber) -> Fraction:
    if c.volume is None:
        raise ChamberError("volumes are defined for the rational circle only")
    return c.volume


def normalized_volume(c: Chamber, sd: StrandData, normalization: str = "haar") -> Fraction:
    vol = chamber_volume(c)
    if normalization == "haar":
        return vol
    if normalization == "symmetric":
        return vol / sd.weyl_order()
    raise ValueError(f"unknown normalization {normalization!r}")


def torsion_counts(sd: StrandData, p: int, lift: Mapping | None = None) -> dict[tuple, int]:
    f = sd.flavoring
    lift = dict(lift or f.default_lift())
    for k in f.cb.edge_keys():
        if Fraction(lift[k]).denominator % p == 0:
            raise ChamberError(f"p={p} collides with the wall value of {k}")
    if sd.n == 0:
        return {(): 1}
    can = Canonicalizer(sd)
    return {k: cnt for k, (cnt, _) in fp_scan(sd, lift, p, can).items()}


def torsion_count(c: Chamber, sd: StrandData, p: int, lift: Mapping | None = None) -> int:
    return torsion_counts(sd, p, lift).get(c.key, 0)


def wall_count(sd: StrandData, lift: Mapping | None = None) -> int:
    return len(cube_walls(sd, dict(lift or sd.flavoring.default_lift())))


def chamber_of(sd: StrandData, x: Sequence, lift: Mapping | None = None) -> tuple:
    lift = dict(lift or sd.flavoring.default_lift())
    return Canonicalizer(sd).key(f_vector(sd, x, lift))


def central_charge(dims: Mapping[str, int], chambers: Iterable[Chamber], sd: StrandData | None = None,
                   normalization: str = "haar") -> Fraction:
    chs = {c.id: c for c in chambers}
    unknown = [k for k in dims if k not in chs]
    if unknown:
        raise ChamberError(f"dims keyed by unknown chambers {unknown}")
    total = Fraction(0)
    for k, d in dims.items():
        vol = chamber_volume(chs[k]) if sd is None else normalized_volume(chs[k], sd, normalization)
        total += vol * d
    return total


# ---------------------------------------------------------------- walls / alcoves

@dataclass(frozen=True)
class Wall:
    circuit: Circuit
    m: int
    sign: int = 1  # coorientation: positive side where sign*(f - m) > 0

    def value(self, lift: Mapping) -> Fraction:
        return self.circuit.evaluate(lift) - self.m


def alcove_arrangement(f: Flavoring, box: tuple[int, int], chi: Mapping | None = None,
                       zero_edge_flavor: bool = False) -> list[Wall]:
    circuits = enumerate_circuits(f.cb)
    if zero_edge_flavor:
        circuits = [c for c in circuits if c.ends is not None]
        circuits = [Circuit(c.ends, ()) for c in circuits]
        uniq = {}
        for c in circuits:
            uniq[tuple(sorted(c.coefficients().items(), key=str))] = c
        circuits = [c for c in uniq.values() if c.coefficients()]
    out = []
    for c in circuits:
        sign = 1
        if chi is not None:
            pairing = sum(chi.get(k, 0) * v for k, v in c.coefficients().items())
            if pairing == 0:
                raise ChamberError(f"cocharacter lies on the wall family {c.label()}")
            sign = 1 if pairing > 0 else -1
        for m in range(box[0], box[1] + 1):
            out.append(Wall(c, m, sign))
    return out


def same_alcove(f: Flavoring, lift1: Mapping, lift2: Mapping) -> bool:
    for c in enumerate_circuits(f.cb):
        v1, v2 = c.evaluate(lift1), c.evaluate(lift2)
        if v1.denominator == 1 or v2.denominator == 1:
            raise ChamberError(f"lift lies on a wall of {c.label()}")
        if floor(v1) != floor(v2):
            return False
    return True


def _on_walls(circuits, lift) -> list:
    return [c for c in circuits if c.evaluate(lift).denominator == 1]


def wall_point(f: Flavoring, lift: Mapping, wall: Wall) -> dict:
    """A generic point of the wall reached from the lift without crossing other walls."""
    circuits = enumerate_circuits(f.cb)
    val = wall.circuit.evaluate(lift)
    if val == wall.m:
        raise ChamberError("wall passes through the chosen flavor (degenerate query)")
    target_coeffs = wall.circuit.coefficients()
    for key, co in sorted(target_coeffs.items(), key=lambda kv: str(kv[0])):
        new = dict(lift)
        new[key] = Fraction(lift[key]) + (wall.m - val) / co
        hits = _on_walls(circuits, new)
        same = [c for c in hits if _proportional(c, wall.circuit)]
        if len(hits) != len(same):
            continue
        # no other wall strictly between
        ok = True
        for c in circuits:
            if _proportional(c, wall.circuit):
                continue
            a, b = c.evaluate(lift), c.evaluate(new)
            if floor(a) != floor(b):
                ok = False
                break
        # the target wall must be the first level of its own family we meet
        lo, hi = sorted((val, Fraction(wall.m)))
        if any(Fraction(m) > lo and Fraction(m) < hi for m in range(floor(lo), floor(hi) + 1)):
            ok = False
        if ok:
            return new
    raise ChamberError("wall not adjacent to the alcove of the chosen flavor")


def _proportional(c1: Circuit, c2: Circuit) -> bool:
    a, b = c1.coefficients(), c2.coefficients()
    if set(a) != set(b):
        return False
    k0 = next(iter(a))
    r = Fraction(a[k0], b[k0])
    return all(Fraction(a[k], b[k]) == r for k in a)


def region_polytope(sd: StrandData, x0: Sequence, lift_region: Mapping, lift_eval: Mapping,
                    closed: bool = True) -> Polytope:
    """Closure of the region of x0 (read with lift_region) with walls at lift_eval."""
    n = sd.n
    A, b = [], []
    for p in sd.pairs():
        F = floor(phi(p, x0, lift_region))
        row = [Fraction(0)] * n
        if p.kind == "red":
            row[p.a] = Fraction(1)
            off = Fraction(lift_eval[p.red])
        else:
            row[p.a], row[p.c] = Fraction(1), Fraction(-1)
            off = Fraction(lift_eval[p.edge])
        # F <= row.x - off <= F + 1
        A.append(tuple(-r for r in row))
        b.append(-(F + off))
        A.append(tuple(row))
        b.append(F + 1 + off)
    R = Fraction(n + 3)
    for k in range(n):
        e = [Fraction(0)] * n
        e[k] = Fraction(1)
        A.append(tuple(e))
        b.append(Fraction(x0[k]) + R)
        A.append(tuple(-t for t in e))
        b.append(-(Fraction(x0[k]) - R))
    return Polytope(A, b)


@dataclass
class LockingResult:
    codimension: int
    classes: list  # list of (set of corporeals, contains_red)
    affine_codimension: int


def locking(sd: StrandData, chamber: Chamber, lift: Mapping, wall_lift: Mapping) -> LockingResult:
    n = sd.n
    P = region_polytope(sd, chamber.representative, lift, wall_lift)
    verts = P.vertices()
    if not verts:
        raise ChamberError("limiting polytope is empty")
    parent = list(range(n)) + ["inf"]
    idx = {k: k for k in range(n)}
    idx["inf"] = n

    def find(u):
        while parent[idx[u]] != u:
            u = parent[idx[u]]
        return u

    def union(u, w):
        ru, rw = find(u), find(w)
        if ru != rw:
            if ru == "inf":
                ru, rw = rw, ru
            parent[idx[ru]] = rw

    for p in sd.pairs():
        vals = {phi(p, v, wall_lift) for v in verts}
        if len(vals) == 1:
            union(p.a, "inf" if p.kind == "red" else p.c)
    classes: dict = {}
    for a in range(n):
        classes.setdefault(find(a), set()).add(a)
    cls = [(members, root == "inf") for root, members in classes.items()]
    free = sum(1 for _, red in cls if not red)
    return LockingResult(n - free, cls, n - affine_dim(verts))


def locking_codimension(sd: StrandData, chamber: Chamber, wall: Wall,
                        lift: Mapping | None = None) -> int:
    lift = dict(lift or sd.flavoring.default_lift())
    return locking(sd, chamber, lift, wall_point(sd.flavoring, lift, wall)).codimension


def e_m_support(sd: StrandData, wall: Wall, m: int, lift: Mapping | None = None,
                chambers: list[Chamber] | None = None) -> set[str]:
    lift = dict(lift or sd.flavoring.default_lift())
    chambers = chambers or enumerate_chambers(sd, lift)
    wl = wall_point(sd.flavoring, lift, wall)
    return {c.id for c in chambers if locking(sd, c, lift, wl).codimension > m}


def interpolate(ts: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients c_0..c_{k-1} of the interpolating polynomial (exact)."""
    k = len(ts)
    rows = [[Fraction(t) ** j for j in range(k)] for t in ts]
    sol = solve(rows, [Fraction(y) for y in ys])
    if sol is None:
        raise ChamberError("interpolation nodes must be distinct")
    return list(sol)


def path_volumes(sd: StrandData, lift_wall: Mapping, lift: Mapping, t: Fraction) -> dict:
    """Chamber volumes at (1-t)*wall + t*lift keyed by canonical key."""
    lt = {k: (1 - t) * Fraction(lift_wall[k]) + t * Fraction(lift[k]) for k in lift}
    can = Canonicalizer(sd)
    out: dict = {}
    cells = cube_cells(sd, lt)
    for cell in cells:
        key = can.key(f_vector(sd, cell.centroid(), lt))
        out[key] = out.get(key, Fraction(0)) + cell.volume()
    return out


def charge_polynomial(sd: StrandData, wall: Wall, dims_by_key: Mapping[tuple, int],
                      lift: Mapping | None = None, points: int | None = None) -> list[Fraction]:
    """Exact polynomial t -> Z_{beta_t}(dims), interpolated on (0,1]."""
    lift = dict(lift or sd.flavoring.default_lift())
    wl = wall_point(sd.flavoring, lift, wall)
    npts = points or sd.n + 2
    ts = [Fraction(j, npts) for j in range(1, npts + 1)]
    ys = []
    for t in ts:
        vols = path_volumes(sd, wl, lift, t)
        ys.append(sum((vols.get(k, Fraction(0)) * d for k, d in dims_by_key.items()), Fraction(0)))
    coeffs = interpolate(ts, ys)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs
