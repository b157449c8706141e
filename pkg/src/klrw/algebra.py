"""Cylindrical flavored KLRW algebras realized inside the twisted group ring.

A morphism from chamber a to chamber b is computed from a path in the
unrolled configuration space X from the representative of a to a Weyl
translate g of the representative of b: the crossed walls contribute
operators (root walls: divided differences; matched matter walls crossed
north-east: multiplication by a linear factor), and the path is closed up
by [g^-1].
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from math import comb, floor
from typing import Callable, Mapping, Sequence

from .chambers import Chamber, StrandData, enumerate_chambers
from .polyrep import (Poly, PolyError, Ring, SkewElement, Weyl,
                      ghost_factor, op_root_crossing, red_factor, weyl_act_point,
                      weyl_identity, weyl_inv)


class AlgebraError(ValueError):
    pass


class DegeneratePath(AlgebraError):
    pass


class NonFiniteHom(AlgebraError):
    pass


# ---------------------------------------------------------------- geometry

@dataclass(frozen=True)
class Family:
    kind: str  # root | red | ghost
    a: int
    b: int | None = None  # second strand for root, ghost owner for ghost
    key: object = None  # framing key or edge id


@dataclass(frozen=True)
class Crossing:
    s: Fraction
    family: Family
    level: int
    direction: int


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Geometry:
    """Walls of the unrolled arrangement; the flavor may move linearly in t."""

    def __init__(self, sd: StrandData, lift0: Mapping, lift1: Mapping | None = None):
        self.sd = sd
        self.lift0 = {k: _frac(v) for k, v in lift0.items()}
        self.lift1 = {k: _frac(v) for k, v in (lift1 or lift0).items()}
        labels = sd.labels
        fams = []
        for a in range(sd.n):
            for b in range(a + 1, sd.n):
                if labels[a] == labels[b]:
                    fams.append(Family("root", a, b))
        for p in sd.pairs():
            if p.kind == "red":
                fams.append(Family("red", p.a, None, p.red))
            else:
                fams.append(Family("ghost", p.a, p.c, p.edge))
        self.families = fams

    def lift_at(self, key, t: Fraction) -> Fraction:
        return (1 - t) * self.lift0[key] + t * self.lift1[key]

    def base(self, fam: Family, x: Sequence, t: Fraction = Fraction(0)) -> Fraction:
        if fam.kind == "root":
            return x[fam.a] - x[fam.b]
        if fam.kind == "red":
            return x[fam.a] - self.lift_at(fam.key, t)
        return x[fam.a] - x[fam.b] - self.lift_at(fam.key, t)

    def region_key(self, x: Sequence, t: Fraction = Fraction(0)) -> tuple:
        out = []
        for f in self.families:
            v = self.base(f, x, t)
            if v.denominator == 1:
                raise DegeneratePath(f"point lies on a wall of {f}")
            out.append(floor(v))
        return tuple(out)

    def on_wall(self, x: Sequence, t: Fraction = Fraction(0)) -> bool:
        return any(self.base(f, x, t).denominator == 1 for f in self.families)

    def crossings(self, x0, x1, t0=Fraction(0), t1=Fraction(0)) -> list[Crossing]:
        out = []
        for f in self.families:
            v0, v1 = self.base(f, x0, t0), self.base(f, x1, t1)
            if v0.denominator == 1 or v1.denominator == 1:
                raise DegeneratePath(f"segment endpoint on a wall of {f}")
            if v0 == v1:
                continue
            d = 1 if v1 > v0 else -1
            lo, hi = sorted((v0, v1))
            for k in range(floor(lo) + 1, floor(hi) + 1):
                s = (k - v0) / (v1 - v0)
                level = k if f.kind == "root" else -k
                out.append(Crossing(s, f, level, d))
        out.sort(key=lambda c: c.s)
        for c1, c2 in zip(out, out[1:]):
            if c1.s == c2.s:
                raise DegeneratePath("path meets a codimension-two stratum")
        return out

    def count_degree(self, x0, x1, t0=Fraction(0), t1=Fraction(0), weights=None) -> int:
        """Degree of the straight path: matter walls +1, root walls -2."""
        deg = 0
        for f in self.families:
            v0, v1 = self.base(f, x0, t0), self.base(f, x1, t1)
            k = abs(floor(v1) - floor(v0))
            deg += -2 * k if f.kind == "root" else k
        return deg

    def root_count(self, x0, x1, t0=Fraction(0), t1=Fraction(0)) -> int:
        total = 0
        for f in self.families:
            if f.kind == "root":
                total += abs(floor(self.base(f, x1, t1)) - floor(self.base(f, x0, t0)))
        return total


def generic_point_in(cell_vertices: Sequence[Sequence[Fraction]], ok: Callable) -> tuple:
    """A point of the open cell accepted by ``ok``, found by pulling the centroid to vertices."""
    c = tuple(sum(col) / len(cell_vertices) for col in zip(*cell_vertices))
    if ok(c):
        return c
    for denom in (7, 11, 13, 17, 19, 23):
        for k, v in enumerate(cell_vertices):
            for j, w in enumerate(cell_vertices[k + 1:] + cell_vertices[:1]):
                d = Fraction(1, denom)
                e = Fraction(1, denom * (j + 3))
                x = tuple((1 - d - e) * ci + d * vi + e * wi for ci, vi, wi in zip(c, v, w))
                if ok(x):
                    return x
    raise AlgebraError("failed to find a generic interior point")


def to_fundamental(sd: StrandData, x: Sequence[Fraction]) -> tuple[tuple, Weyl]:
    """Fundamental-region representative y and g with g·y = x."""
    n = sd.n
    red = [Fraction(v) - floor(Fraction(v) + Fraction(1, 2)) for v in x]  # in [-1/2, 1/2)
    shift_of = [floor(Fraction(v) + Fraction(1, 2)) for v in x]
    y = [None] * n
    perm = [0] * n  # y-slot k is sent to x-slot perm[k]
    for block in sd.blocks():
        order = sorted(block, key=lambda a: red[a])
        for slot, a in zip(block, order):
            y[slot] = red[a]
            perm[slot] = a
    shift = [0] * n
    for slot in range(n):
        shift[perm[slot]] = shift_of[perm[slot]]
    g = (tuple(perm), tuple(shift))
    return tuple(y), g


# ---------------------------------------------------------------- algebra

@dataclass
class State:
    """An object of the algebra: a chamber and its representative point."""

    id: str
    point: tuple
    chamber: str


@dataclass
class Basis:
    """Dot-free basis elements D_g of Hom(a, b) with their degrees."""

    source: str
    target: str
    elements: list  # (g, degree, radius)


class KLRW:
    def __init__(self, sd: StrandData, lift: Mapping | None = None, quantum: bool = False,
                 ghost_sign: int = 1, p: int | None = None, chambers: list[Chamber] | None = None,
                 lift1: Mapping | None = None):
        self.sd = sd
        f = sd.flavoring
        self.lift = {k: _frac(v) for k, v in (lift or f.default_lift()).items()}
        self.quantum = quantum
        self.ghost_sign = ghost_sign
        params = []
        if quantum:
            params = [f"b_{e.id}" for e in sd.quiver.edges] + \
                     [f"b_{i}:{m}" for i, m in f.cb.framing_edges]
        znames = [f"z_{i}{k}" for i, k in sd.names]
        self.ring = Ring.make(sd.n, params, quantum=quantum, p=p, znames=znames)
        self.geom = Geometry(sd, self.lift)
        self.chambers = chambers if chambers is not None else enumerate_chambers(sd, self.lift)
        self.states: dict[str, State] = {}
        for c in self.chambers:
            self.states[c.id] = State(c.id, self._fundamental_rep(c), c.id)
        self._cache: dict = {}
        self._lock = threading.Lock()

    # -- points
    def _generic(self, x) -> bool:
        if self.geom.on_wall(x):
            return False
        for v in x:
            if (v + Fraction(1, 2)).denominator == 1:
                return False
        return True

    def _fundamental_rep(self, c: Chamber) -> tuple:
        if self.sd.n == 0:
            return ()
        verts = c.cells[0].vertices() if c.cells else [c.representative]

        def ok(x):
            if not self._generic(x):
                return False
            y, _ = to_fundamental(self.sd, x)
            return self._generic(y)

        x = generic_point_in(verts, ok) if c.cells else c.representative
        y, _ = to_fundamental(self.sd, x)
        return y

    def add_state(self, sid: str, point: Sequence, chamber: str | None = None) -> State:
        point = tuple(_frac(v) for v in point)
        if not self._generic(point):
            raise AlgebraError("state point lies on a wall")
        if chamber is None:
            from .chambers import chamber_of
            key = chamber_of(self.sd, [v - floor(v) for v in point], self.lift)
            chamber = next(c.id for c in self.chambers if c.key == key)
        st = State(sid, point, chamber)
        self.states[sid] = st
        return st

    def state(self, s) -> State:
        return s if isinstance(s, State) else self.states[s]

    # -- coefficient data
    def bparam(self, key) -> Poly | None:
        if not self.quantum:
            return None
        name = f"b_{key}" if not isinstance(key, tuple) else f"b_{key[0]}:{key[1]}"
        return self.ring.var(name)

    def crossing_operator(self, c: Crossing) -> SkewElement:
        ring = self.ring
        f = c.family
        if f.kind == "root":
            return op_root_crossing(ring, f.a, f.b, c.level, c.direction)
        if c.direction < 0:
            return SkewElement.identity(ring)
        if f.kind == "red":
            return SkewElement.mult(red_factor(ring, f.a, c.level, self.bparam(f.key)))
        return SkewElement.mult(ghost_factor(ring, f.a, f.b, c.level, self.bparam(f.key),
                                             self.ghost_sign))

    def path_operator(self, points: Sequence[Sequence], times: Sequence | None = None,
                      geom: Geometry | None = None) -> tuple[SkewElement, int]:
        """Operator of a polyline (later crossings compose on the left) and its degree."""
        geom = geom or self.geom
        times = times or [Fraction(0)] * len(points)
        op = SkewElement.identity(self.ring)
        deg = 0
        for (x0, t0), (x1, t1) in zip(zip(points, times), zip(points[1:], times[1:])):
            for c in geom.crossings(x0, x1, _frac(t0), _frac(t1)):
                op = self.crossing_operator(c) * op
                deg += -2 if c.family.kind == "root" else 1
        return op, deg

    def closing(self, y: Sequence, target: State, geom: Geometry | None = None,
                t: Fraction = Fraction(0)) -> Weyl:
        """g with g·(target point) in the same full region as y, moving strands least."""
        geom = geom or self.geom
        key = geom.region_key(y, t)
        eta = target.point
        n = self.sd.n
        best = None
        blocks = self.sd.blocks()
        for choice in product(*[permutations(b) for b in blocks]):
            perm = [0] * n
            for b, img in zip(blocks, choice):
                for src, dst in zip(b, img):
                    perm[src] = dst
            base = [0] * n
            for k in range(n):
                base[perm[k]] = floor(y[perm[k]] - eta[k])
            for delta in product((0, 1), repeat=n):
                shift = tuple(base[j] + delta[j] for j in range(n))
                g = (tuple(perm), shift)
                z = weyl_act_point(g, eta)
                try:
                    if geom.region_key(z, t) != key:
                        continue
                except DegeneratePath:
                    continue
                cost = sum(abs(a - b) for a, b in zip(z, y))
                if best is None or cost < best[0]:
                    best = (cost, g)
        if best is None:
            raise AlgebraError("endpoint is not in the chamber of the target")
        return best[1]

    def element_from_path(self, points: Sequence[Sequence], source, target) -> "Element":
        src, tgt = self.state(source), self.state(target)
        pts = [tuple(_frac(v) for v in p) for p in points]
        if pts[0] != src.point:
            g0 = self.closing(pts[0], src)
            g0i = weyl_inv(g0)
            pts = [src.point] + [weyl_act_point(g0i, p) for p in pts]
        op, deg = self.path_operator(pts)
        g = self.closing(pts[-1], tgt)
        last = weyl_act_point(g, tgt.point)
        if last != pts[-1]:
            more, d2 = self.path_operator([pts[-1], last])
            op, deg = more * op, deg + d2
        sk = SkewElement.group(self.ring, weyl_inv(g)) * op
        sk.source, sk.target = src.id, tgt.id
        return Element(self, sk, src.id, tgt.id, deg)

    # -- basis
    def d_element(self, g: Weyl, source, target) -> "Element":
        key = ("D", g, self.state(source).id, self.state(target).id)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        src, tgt = self.state(source), self.state(target)
        end = weyl_act_point(g, tgt.point)
        try:
            el = self.element_from_path([src.point, end], src, tgt)
        except DegeneratePath:
            el = None
            for j in range(1, 40):
                nudge = tuple(Fraction(((k + 1) * j * 7919) % 97 - 48, 1000 * (97 + j)) for k in range(self.sd.n))
                mid = tuple(a + b for a, b in zip(src.point, nudge))
                try:
                    if self.geom.region_key(mid) != self.geom.region_key(src.point):
                        continue
                    el = self.element_from_path([src.point, mid, end], src, tgt)
                    break
                except DegeneratePath:
                    continue
            if el is None:
                raise
        with self._lock:
            self._cache[key] = el
        return el

    def d_degree(self, g: Weyl, source, target) -> int:
        src, tgt = self.state(source), self.state(target)
        return self.geom.count_degree(src.point, weyl_act_point(g, tgt.point))

    def root_length(self, g: Weyl, source, target) -> int:
        src, tgt = self.state(source), self.state(target)
        return self.geom.root_count(src.point, weyl_act_point(g, tgt.point))

    def weyl_ball(self, radius: int) -> list[Weyl]:
        n = self.sd.n
        blocks = self.sd.blocks()
        perms = []
        for choice in product(*[permutations(b) for b in blocks]):
            perm = [0] * n
            for b, img in zip(blocks, choice):
                for src, dst in zip(b, img):
                    perm[src] = dst
            perms.append(tuple(perm))
        out = []
        for shift in product(range(-radius, radius + 1), repeat=n):
            for p in perms:
                out.append((p, tuple(shift)))
        return out

    def weyl_shell(self, radius: int) -> list[Weyl]:
        return [g for g in self.weyl_ball(radius) if max((abs(t) for t in g[1]), default=0) == radius]

    def basis(self, source, target, maxdeg: int, radius: int | None = None,
              max_radius: int = 12) -> Basis:
        """D_g with deg <= maxdeg.  Without ``radius`` the shells are grown until
        two consecutive shells lie entirely above maxdeg."""
        src, tgt = self.state(source), self.state(target)
        elems = []
        if radius is not None:
            for g in self.weyl_ball(radius):
                d = self.d_degree(g, src, tgt)
                if d <= maxdeg:
                    elems.append((g, d, max((abs(t) for t in g[1]), default=0)))
            return Basis(src.id, tgt.id, sorted(elems, key=lambda e: (e[1], e[0])))
        elems = grow_shells(self, lambda g: self.d_degree(g, src, tgt), maxdeg, max_radius)
        return Basis(src.id, tgt.id, sorted(elems, key=lambda e: (e[1], e[0])))

    # -- dims
    def poly_dim(self, d: int) -> int:
        n = self.sd.n
        if d < 0 or d % 2:
            return 0
        if n == 0:
            return 1 if d == 0 else 0
        m = d // 2
        return comb(m + n - 1, n - 1)

    def hom_dims(self, source, target, maxdeg: int, radius: int | None = None,
                 mindeg: int | None = None) -> dict[int, int]:
        B = self.basis(source, target, maxdeg, radius)
        lo = min([d for _, d, _ in B.elements] + [0]) if mindeg is None else mindeg
        out = {d: 0 for d in range(lo, maxdeg + 1)}
        for _, dg, _ in B.elements:
            for d in range(max(dg, lo), maxdeg + 1):
                out[d] += self.poly_dim(d - dg)
        return out

    def monomials(self, d: int) -> list[Poly]:
        """Monomials in the dot variables of degree d (dots have degree 2)."""
        n = self.sd.n
        if d < 0 or d % 2:
            return []
        if n == 0:
            return [self.ring.one()] if d == 0 else []
        out = []
        for combo in combinations_with_replacement(range(n), d // 2):
            m = self.ring.one()
            for k in combo:
                m = m * self.ring.z(k)
            out.append(m)
        return out

    # -- identities
    def identity(self, state) -> "Element":
        st = self.state(state)
        return Element(self, SkewElement.identity(self.ring, st.id, st.id), st.id, st.id, 0)

    def dot(self, state, k: int) -> "Element":
        st = self.state(state)
        return Element(self, SkewElement.mult(self.ring.z(k), st.id, st.id), st.id, st.id, 2)

    def zero(self, source, target) -> "Element":
        return Element(self, SkewElement(self.ring, {}, source, target), source, target, None)

    # -- normal form
    def normal_form(self, el: "Element") -> dict[Weyl, Poly]:
        """Coefficients p_g with el = Σ p_g D_g (p_g on the left)."""
        src, tgt = self.state(el.source), self.state(el.target)
        return reduce_to_basis(self.ring, el.skew.terms, src.id, tgt.id,
                               lambda g: self.root_length(g, src, tgt),
                               lambda g: self.d_element(g, src, tgt).skew)

    def coordinates(self, el: "Element", index: dict) -> dict:
        """Sparse coordinate vector in the basis {monomial * D_g}."""
        vec = {}
        for g, pg in self.normal_form(el).items():
            for m, c in pg.terms.items():
                vec[(g, m)] = c
                index.setdefault((g, m), len(index))
        return vec

    def minimal_gallery(self, source, target, g: Weyl, rng) -> "Element | None":
        src, tgt = self.state(source), self.state(target)
        end = weyl_act_point(g, tgt.point)
        for _ in range(20):
            mid = tuple((a + b) / 2 + Fraction(rng.randint(-40, 40), 97 * (k + 3))
                        for k, (a, b) in enumerate(zip(src.point, end)))
            try:
                c1 = self.geom.crossings(src.point, mid)
                c2 = self.geom.crossings(mid, end)
            except DegeneratePath:
                continue
            walls = [(c.family, c.level) for c in c1 + c2]
            if len(walls) != len(set(walls)):
                continue
            try:
                return self.element_from_path([src.point, mid, end], src, tgt)
            except DegeneratePath:
                continue
        return None

    def hom_dims_spanning(self, source, target, maxdeg: int, radius: int | None = None,
                          products: int = 60, seed: int = 0, mindeg: int | None = None) -> dict[int, int]:
        """Dimensions from ranks of normal forms of gallery elements and products.

        Minimal galleries through random waypoints and products of two basis
        elements through random intermediate chambers, times monomials, are
        brought to normal form; the rank in each degree is reported.  With a
        radius only vectors supported in the translation ball are kept.
        """
        import random
        rng = random.Random(seed)
        src, tgt = self.state(source), self.state(target)
        B = self.basis(src, tgt, maxdeg, radius)
        R = radius if radius is not None else max((r for _, _, r in B.elements), default=0)
        lo = min([d for _, d, _ in B.elements] + [0]) if mindeg is None else mindeg
        ech = {d: Echelon(self.ring) for d in range(lo, maxdeg + 1)}

        def feed(el: Element):
            if el.degree is None or el.is_zero():
                return
            for d0 in range(max(el.degree, lo), maxdeg + 1):
                for m in self.monomials(d0 - el.degree):
                    nf = self.normal_form(el.lmul(m))
                    if nf and _nf_radius(nf) <= R:
                        ech[d0].add(_coords(nf))

        for g, _, _ in B.elements:
            el = self.minimal_gallery(src, tgt, g, rng)
            if el is not None:
                feed(el)
        mids = [s for s in self.states.values() if s.id in {c.id for c in self.chambers}]
        for _ in range(products):
            mid = rng.choice(mids)
            B1 = self.basis(src, mid, maxdeg - lo + 2, radius=max(R, 1))
            B2 = self.basis(mid, tgt, maxdeg - lo + 2, radius=max(R, 1))
            if not B1.elements or not B2.elements:
                continue
            g1, d1, _ = rng.choice(B1.elements)
            g2, d2, _ = rng.choice(B2.elements)
            if d1 + d2 > maxdeg:
                continue
            X = self.d_element(g2, mid, tgt) * self.d_element(g1, src, mid)
            if rng.random() < 0.5 and self.sd.n:
                k = rng.randrange(self.sd.n)
                X = self.d_element(g2, mid, tgt) * self.dot(mid, k) * self.d_element(g1, src, mid)
            feed(X)
        return {d: e.rank for d, e in ech.items()}

    # -- idempotents
    def idempotent_state(self, alpha: Sequence, sid: str | None = None) -> tuple[State, list]:
        """State for a configuration with ties, perturbed within each block of equal longitude."""
        alpha = tuple(_frac(a) for a in alpha)
        labels = self.sd.labels
        groups: dict = {}
        for k, (lab, a) in enumerate(zip(labels, alpha)):
            groups.setdefault((lab, a), []).append(k)
        blocks = [sorted(b) for b in groups.values()]
        base = alpha
        tries = [(d, s) for d in (1000, 3000, 9001, 27011) for s in (0, 1, -1)]
        for eps_den, shift in tries:
            eps = Fraction(1, eps_den * (self.sd.n + 1))
            # a common shift keeps the block in its region when alpha sits on the chart seam
            alpha = tuple(a + shift * eps / 7 for a in base)
            x = list(alpha)
            for b in blocks:
                for r, k in enumerate(b):
                    x[k] = alpha[k] + r * eps
            if not self._generic(x):
                continue
            ok = True
            for b in blocks:
                y = list(x)
                for r, k in enumerate(b):
                    y[k] = alpha[k] + (len(b) - 1 - r) * eps
                if not self._generic(y):
                    ok = False
            if ok:
                st = self.add_state(sid or f"e{alpha}", x)
                return st, blocks
        raise AlgebraError("could not separate tied strands generically")

    def eprime(self, alpha: Sequence, sid: str | None = None) -> Element:
        st, blocks = self.idempotent_state(alpha, sid)
        x = st.point
        pts = [x]
        cur = list(x)
        for b in blocks:
            order = list(b)  # strand at rank r
            for i in range(len(order)):
                for j in range(len(order) - 1 - i):
                    a1, a2 = order[j], order[j + 1]
                    cur[a1], cur[a2] = cur[a2], cur[a1]
                    order[j], order[j + 1] = a2, a1
                    pts.append(tuple(cur))
        if len(pts) == 1:
            return self.identity(st)
        psi = self.element_from_path(pts, st, st)
        cands = []
        for reverse in (False, True):
            z = self.ring.one()
            for b in blocks:
                seq = b[::-1] if reverse else b
                for r, k in enumerate(seq):
                    z = z * self.ring.z(k) ** (len(b) - 1 - r)
            cands.append(psi * Element(self, SkewElement.mult(z, st.id, st.id), st.id, st.id,
                                       2 * (z.degree() if z else 0)))
        for e in cands:
            if e * e == e:
                return e
        raise AlgebraError("no nilHecke idempotent found")

    def ea(self, a) -> Element:
        return self.eprime([_frac(a)] * self.sd.n, sid=f"E{a}")

    def make_idempotent(self, kind: str, data=None) -> "Idempotent":
        """kind: 'E' (data = chamber id), 'Eprime' (data = longitudes), 'Ea' (data = a)."""
        if kind == "E":
            st = self.state(data)
            return Idempotent(kind, data, self.identity(st))
        if kind == "Eprime":
            return Idempotent(kind, tuple(data), self.eprime(data))
        if kind == "Ea":
            a = _frac(data)
            for key in self.sd.flavoring.cb.framing_edges:
                if (a - self.lift[key]) % 1 == 0:
                    raise AlgebraError(f"a = {a} coincides with the red strand {key}")
            return Idempotent(kind, a, self.ea(a))
        raise AlgebraError(f"unknown idempotent kind {kind!r}")

    def corner_dims(self, e: Element, maxdeg: int, radius: int | None = None) -> dict[int, int]:
        st = e.source
        B = self.basis(st, st, maxdeg, radius)
        lo = min([d for _, d, _ in B.elements] + [0])
        ech = {d: Echelon(self.ring) for d in range(lo, maxdeg + 1)}
        for g, dg, _ in B.elements:
            D = self.d_element(g, st, st)
            for d in range(max(dg, lo), maxdeg + 1):
                for m in self.monomials(d - dg):
                    X = e * D.lmul(m) * e
                    if not X.is_zero():
                        ech[d].add(_coords(self.normal_form(X)))
        return {d: ech[d].rank for d in ech}

    def coulomb_dims(self, a, maxdeg: int, radius: int | None = None) -> dict[int, int]:
        if self.sd.n == 0:
            return {d: int(d == 0) for d in range(maxdeg + 1)}
        return self.corner_dims(self.ea(a), maxdeg, radius)


@dataclass(frozen=True)
class Idempotent:
    kind: str
    data: object
    element: "Element"

    @property
    def state(self) -> str:
        return self.element.source


@dataclass
class Element:
    alg: KLRW
    skew: SkewElement
    source: str
    target: str
    degree: int | None = None

    def __mul__(self, other: "Element") -> "Element":
        """self after other (other: a -> b, self: b -> c)."""
        if isinstance(other, (int, Fraction)):
            return Element(self.alg, self.skew.scale(other), self.source, self.target, self.degree)
        if other.target != self.source:
            return self.alg.zero(other.source, self.target)
        sk = self.skew * other.skew
        sk.source, sk.target = other.source, self.target
        deg = None if self.degree is None or other.degree is None else self.degree + other.degree
        return Element(self.alg, sk, other.source, self.target, deg)

    def __add__(self, other: "Element") -> "Element":
        if (self.source, self.target) != (other.source, other.target):
            raise AlgebraError("adding elements of different Hom spaces")
        deg = self.degree if self.degree == other.degree else None
        return Element(self.alg, self.skew + other.skew, self.source, self.target, deg)

    def __sub__(self, other: "Element") -> "Element":
        return self + other.scale(-1)

    def scale(self, c) -> "Element":
        return Element(self.alg, self.skew.scale(c), self.source, self.target, self.degree)

    def lmul(self, p: Poly) -> "Element":
        return Element(self.alg, SkewElement.mult(p) * self.skew, self.source, self.target,
                       None if self.degree is None else self.degree + 2 * (p.degree() if p else 0))

    def is_zero(self) -> bool:
        return self.skew.is_zero()

    def __eq__(self, other):
        return isinstance(other, Element) and (self.source, self.target) == (other.source, other.target) \
            and self.skew == other.skew

    def apply(self, p: Poly) -> Poly:
        return self.skew.apply(p)

    def normal_form(self):
        return self.alg.normal_form(self)


# ---------------------------------------------------------------- linear algebra

class Echelon:
    """Incremental row echelon form of sparse vectors over Q or F_p."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.rows: dict = {}  # pivot -> row (pivot entry 1)

    def _norm(self, c):
        return self.ring.coerce(c) if self.ring.p is None else c % self.ring.p

    def reduce(self, vec: Mapping) -> dict:
        v = {k: c for k, c in vec.items() if c}
        while v:
            piv = min(v)
            if piv not in self.rows:
                return v
            c = v[piv]
            for k, x in self.rows[piv].items():
                nv = self._norm(v.get(k, 0) - c * x)
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def add(self, vec: Mapping) -> bool:
        v = self.reduce(vec)
        while v:
            piv = min(v)
            inv = self.ring.inv(v[piv])
            row = {k: self._norm(c * inv) for k, c in v.items()}
            self.rows[piv] = row
            return True
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)




def grow_shells(alg: "KLRW", degree: Callable, maxdeg: int, max_radius: int = 12) -> list:
    """(g, deg, radius) with deg <= maxdeg over translation shells of growing radius.

    Stops once two consecutive shells lie entirely above maxdeg.
    """
    elems = []
    quiet = 0
    prev_min = None
    for r in range(0, max_radius + 1):
        shell = alg.weyl_shell(r) if alg.sd.n else [weyl_identity(0)] if r == 0 else []
        degs = [(g, degree(g)) for g in shell]
        mins = min((d for _, d in degs), default=maxdeg + 1)
        elems.extend((g, d, r) for g, d in degs if d <= maxdeg)
        if alg.sd.n == 0:
            break
        if mins > maxdeg and (prev_min is None or mins >= prev_min):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
        prev_min = mins
    else:
        raise NonFiniteHom("Hom space is not finite in the requested degrees; pass a radius")
    return elems

def reduce_to_basis(ring: Ring, terms: Mapping, source: str, target: str,
                    length: Callable, basis_skew: Callable) -> dict:
    """Leading-term reduction of a skew element against the basis D_g.

    D_g has leading group term g^-1; terms of largest ``length`` are cleared first.
    """
    rest = SkewElement(ring, dict(terms), source, target)
    out: dict = {}
    guard = 0
    while not rest.is_zero():
        guard += 1
        if guard > 10000:
            raise AlgebraError("normal form did not terminate")
        cands = [(length(weyl_inv(u)), weyl_inv(u), u) for u in rest.terms]
        L = max(c[0] for c in cands)
        for _, g, u in [c for c in cands if c[0] == L]:
            lead = basis_skew(g).terms.get(u)
            if lead is None:
                raise AlgebraError("basis element lacks its leading term")
            f = rest.terms[u]
            try:
                pg = (f.num * lead.den_poly()).exact_div(lead.num * f.den_poly())
            except PolyError as exc:
                raise AlgebraError(f"non-polynomial coefficient at {g}") from exc
            out[g] = out[g] + pg if g in out else pg
            rest = rest - SkewElement.mult(pg) * basis_skew(g)
    return {g: p for g, p in out.items() if p}

def _vec_key(g: Weyl, mono: tuple) -> tuple:
    return (g[1], g[0], mono)


def _radius(g: Weyl) -> int:
    return max((abs(t) for t in g[1]), default=0)


def _coords(nf: Mapping[Weyl, Poly]) -> dict:
    vec = {}
    for g, p in nf.items():
        for m, c in p.terms.items():
            vec[_vec_key(g, m)] = c
    return vec


def _nf_radius(nf: Mapping) -> int:
    return max((_radius(g) for g in nf), default=0)


# ---------------------------------------------------------------- diagram words

@dataclass(frozen=True)
class WordEvent:
    kind: str  # "cross" | "dot"
    slot: int


@dataclass
class DiagramWord:
    bottom: str
    events: list = field(default_factory=list)

    @staticmethod
    def parse(text: str) -> "DiagramWord":
        bottom = None
        events = []
        for ln, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "bottom" and len(parts) == 2:
                bottom = parts[1]
            elif parts[0] in ("cross", "dot") and len(parts) == 2 and parts[1].lstrip("-").isdigit():
                events.append(WordEvent(parts[0], int(parts[1])))
            else:
                raise AlgebraError(f"line {ln}: cannot parse {raw!r}")
        if bottom is None:
            raise AlgebraError("word file lacks a 'bottom <chamber>' line")
        return DiagramWord(bottom, events)

    def dump(self) -> str:
        return "\n".join([f"bottom {self.bottom}"] + [f"{e.kind} {e.slot}" for e in self.events]) + "\n"


@dataclass(frozen=True)
class _Item:
    kind: str  # C | G | R
    strand: int | None = None
    key: object = None


@dataclass
class Lift:
    points: list  # polyline in X
    ops: list  # ("path", from, to) or ("dot", strand, level)
    closing: Weyl
    top: str




class WordLifter:
    def __init__(self, alg: KLRW):
        self.alg = alg
        sd = alg.sd
        self.items: list[_Item] = [_Item("C", k) for k in range(sd.n)]
        labels = sd.labels
        for c, lab in enumerate(labels):
            for e in sd.quiver.edges:
                if e.head == lab:
                    self.items.append(_Item("G", c, e.id))
        for key in sd.flavoring.cb.framing_edges:
            self.items.append(_Item("R", None, key))
        offs = {Fraction(0)}
        for st in alg.states.values():
            offs |= {(self.position(it, st.point) + Fraction(1, 2)) % 1 for it in self.items}
        gap = min([o for o in offs if o > 0], default=Fraction(1))
        # seam just right of -1/2, clear of every item of every chamber representative
        self.seam = Fraction(-1, 2) + gap / 2

    def _chart(self, v: Fraction) -> Fraction:
        return (v - self.seam) % 1

    def position(self, it: _Item, x) -> Fraction:
        lift = self.alg.lift
        if it.kind == "C":
            return x[it.strand]
        if it.kind == "G":
            return x[it.strand] + lift[it.key]
        return lift[it.key]

    def order(self, x) -> list[_Item]:
        pos = [(self._chart(self.position(it, x)), n, it) for n, it in enumerate(self.items)]
        chart = [p for p, _, _ in pos]
        if len(set(chart)) != len(chart):
            raise AlgebraError("configuration has coincident items")
        return [it for _, _, it in sorted(pos)]

    def cyclic_word(self, x) -> str:
        names = self.alg.sd.names
        out = []
        for it in self.order(x):
            if it.kind == "C":
                out.append(f"{names[it.strand][0]}{names[it.strand][1]}")
            elif it.kind == "G":
                out.append(f"({names[it.strand][0]}{names[it.strand][1]},{it.key})")
            else:
                out.append(f"(*,{it.key[0]}:{it.key[1]})")
        return " < ".join(out)

    def lift(self, word: DiagramWord) -> Lift:
        alg = self.alg
        start = alg.state(word.bottom)
        x = list(start.point)
        pts = [tuple(x)]
        ops = []
        seg_start = 0
        for ev in word.events:
            seq = self.order(x)
            N = len(seq)
            if not (0 <= ev.slot < N):
                raise AlgebraError(f"slot {ev.slot} out of range for {N} items")
            if ev.kind == "dot":
                it = seq[ev.slot]
                if it.kind != "C":
                    raise AlgebraError("dots sit on corporeal strands only")
                level = -floor(x[it.strand] + Fraction(1, 2))
                ops.append(("path", seg_start, len(pts) - 1))
                seg_start = len(pts) - 1
                ops.append(("dot", it.strand, level))
                continue
            left, right = seq[ev.slot], seq[(ev.slot + 1) % N]
            if left.kind in "CG":
                mover, other, after, sign = left, right, seq[(ev.slot + 2) % N], 1
            elif right.kind in "CG":
                mover, other, after, sign = right, left, seq[(ev.slot - 1) % N], -1
            else:
                raise AlgebraError("a crossing needs a corporeal strand or ghost")
            p_m = self._chart(self.position(mover, x))
            p_o = self._chart(self.position(other, x))
            p_a = self._chart(self.position(after, x)) if after is not mover else p_m
            if sign > 0:
                end = p_a if p_o < p_a else Fraction(1)
                delta = (p_o + end) / 2 - p_m
                if p_o < p_m:
                    delta += 1
            else:
                end = p_a if p_a < p_o else Fraction(0)
                delta = (p_o + end) / 2 - p_m
                if p_o > p_m:
                    delta -= 1
            x[mover.strand] += delta
            pts.append(tuple(x))
        ops.append(("path", seg_start, len(pts) - 1))
        top, g = None, None
        for st in alg.states.values():
            if st.id != st.chamber:
                continue
            try:
                g = alg.closing(tuple(x), st)
                top = st.id
                break
            except AlgebraError:
                continue
        if top is None:
            raise AlgebraError("top of the word matches no chamber")
        return Lift(pts, ops, g, top)

    def evaluate(self, word: DiagramWord) -> Element:
        alg = self.alg
        L = self.lift(word)
        src, tgt = alg.state(word.bottom), alg.state(L.top)
        op = SkewElement.identity(alg.ring)
        deg = 0
        h = alg.ring.hpoly()
        for kind, a, b in L.ops:
            if kind == "path":
                more, d = alg.path_operator(L.points[a:b + 1]) if b > a else (SkewElement.identity(alg.ring), 0)
                op, deg = more * op, deg + d
            else:
                op = SkewElement.mult(alg.ring.z(a) + h.scale(b)) * op
                deg += 2
        end = L.points[-1]
        last = weyl_act_point(L.closing, tgt.point)
        if last != end:
            more, d = alg.path_operator([end, last])
            op, deg = more * op, deg + d
        sk = SkewElement.group(alg.ring, weyl_inv(L.closing)) * op
        sk.source, sk.target = src.id, tgt.id
        return Element(alg, sk, src.id, tgt.id, deg)


def lift_word(alg: KLRW, word: DiagramWord) -> Lift:
    return WordLifter(alg).lift(word)


def evaluate(alg: KLRW, word: DiagramWord) -> Element:
    return WordLifter(alg).evaluate(word)
