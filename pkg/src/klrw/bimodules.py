"""Change-of-flavor and wall-crossing bimodules.

A bimodule element from chamber a of the flavor lift b0 to chamber b of the
lift b1 is the operator of a path in X x [0, 1] along which the flavor moves
linearly from b0 to b1.  Ghosts then wind around their corporeals exactly
floor(b1_e) - floor(b0_e) times.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import comb, floor
from typing import Mapping, Sequence

from .algebra import (KLRW, DegeneratePath, Echelon, Element, Geometry,
                      _coords, grow_shells, reduce_to_basis)
from .chambers import StrandData, same_alcove as _same_alcove
from .polyrep import SkewElement, Weyl, weyl_act_point, weyl_inv


class BimoduleError(ValueError):
    pass


# ---------------------------------------------------------------- winding

def _value_at(path: Sequence[tuple], t: Fraction) -> Fraction:
    for (t0, v0), (t1, v1) in zip(path, path[1:]):
        if t0 <= t <= t1:
            if t1 == t0:
                return Fraction(v1)
            return Fraction(v0) + (Fraction(v1) - Fraction(v0)) * (t - t0) / (t1 - t0)
    raise BimoduleError(f"time {t} outside the path")


def signed_intersections(path_a: Sequence[tuple], path_b: Sequence[tuple]) -> int:
    """Signed crossings of two piecewise-linear circle paths given by real lifts.

    Each path is a list of (t, value) breakpoints with t running from 0 to 1.
    The count is floor(D(1)) - floor(D(0)) for D = a - b.
    """
    ts = sorted({Fraction(t) for t, _ in path_a} | {Fraction(t) for t, _ in path_b})
    if ts[0] != 0 or ts[-1] != 1:
        raise BimoduleError("paths must be parametrized by [0, 1]")
    diff = [_value_at(path_a, t) - _value_at(path_b, t) for t in ts]
    if diff[0].denominator == 1 or diff[-1].denominator == 1:
        raise BimoduleError("endpoints must be distinct points of the circle")
    for j in range(1, len(ts) - 1):
        if diff[j].denominator == 1:
            before, after = diff[j] - diff[j - 1], diff[j + 1] - diff[j]
            if before * after <= 0:
                raise BimoduleError(f"tangency at t = {ts[j]}")
    for j in range(len(ts) - 1):
        if diff[j] == diff[j + 1] and diff[j].denominator == 1:
            raise BimoduleError("paths overlap along a segment")
    return floor(diff[-1]) - floor(diff[0])


def twist_vector(lift0: Mapping, lift1: Mapping) -> dict:
    return {k: floor(Fraction(lift1[k])) - floor(Fraction(lift0[k])) for k in lift0}


# ---------------------------------------------------------------- bimodules

@dataclass
class BimoduleElement:
    skew: SkewElement
    source: str
    target: str
    degree: int
    twist: dict
    # which lifts the source and target chambers refer to
    lifts: tuple = ()

    def __mul__(self, other: "BimoduleElement") -> "BimoduleElement":
        """self after other."""
        if self.lifts and other.lifts and other.lifts[1] != self.lifts[0]:
            raise BimoduleError("middle flavor mismatch")
        tw = {k: self.twist.get(k, 0) + other.twist.get(k, 0)
              for k in set(self.twist) | set(other.twist)}
        lifts = (other.lifts[0], self.lifts[1]) if self.lifts and other.lifts else ()
        if other.target != self.source:
            zero = SkewElement(self.skew.ring, {}, other.source, self.target)
            return BimoduleElement(zero, other.source, self.target, self.degree + other.degree,
                                   tw, lifts)
        sk = self.skew * other.skew
        sk.source, sk.target = other.source, self.target
        return BimoduleElement(sk, other.source, self.target, self.degree + other.degree, tw, lifts)

    def lmul(self, p) -> "BimoduleElement":
        sk = SkewElement.mult(p, self.target, self.target) * self.skew
        sk.source, sk.target = self.source, self.target
        return BimoduleElement(sk, self.source, self.target, self.degree + 2 * p.degree(),
                               self.twist, self.lifts)

    def is_zero(self) -> bool:
        return self.skew.is_zero()


def _reflavor(sd: StrandData, lift: Mapping) -> StrandData:
    f = sd.flavoring
    beta = {k: Fraction(v) % 1 if f.group.kind == "Q/Z" else v for k, v in lift.items()}
    return StrandData.make(f.with_beta(beta), {i: sd.v_of(i) for i in sd.quiver.vertices})


def _key(lift: Mapping) -> tuple:
    return tuple(sorted((str(k), Fraction(v)) for k, v in lift.items()))


class WallCrossing:
    """The bimodule B_{b1,b0}: left R_{b1}-, right R_{b0}-module.

    It depends only on the two lifts; the reds move linearly between them.
    """

    def __init__(self, sd: StrandData, lift0: Mapping, lift1: Mapping,
                 alg0: KLRW | None = None, alg1: KLRW | None = None, quantum: bool = False):
        self.sd = sd
        self.lift0 = {k: Fraction(v) for k, v in lift0.items()}
        self.lift1 = {k: Fraction(v) for k, v in lift1.items()}
        try:
            self.alg0 = alg0 or KLRW(_reflavor(sd, self.lift0), self.lift0, quantum=quantum)
            self.alg1 = alg1 or KLRW(_reflavor(sd, self.lift1), self.lift1, quantum=quantum)
        except Exception as exc:  # non-generic lifts surface from chamber enumeration
            raise BimoduleError(f"lifts are not generic: {exc}") from exc
        if self.alg0.ring != self.alg1.ring:
            raise BimoduleError("source and target rings differ")
        self.ring = self.alg0.ring
        self.geom = Geometry(sd, self.lift0, self.lift1)
        self.twist = twist_vector(self.lift0, self.lift1)
        self._cache: dict = {}

    @property
    def lifts(self) -> tuple:
        return (_key(self.lift0), _key(self.lift1))

    def reverse(self) -> "WallCrossing":
        return WallCrossing(self.sd, self.lift1, self.lift0, self.alg1, self.alg0)

    def _operator(self, points, times):
        op = SkewElement.identity(self.ring)
        deg = 0
        for (x0, t0), (x1, t1) in zip(zip(points, times), zip(points[1:], times[1:])):
            for c in self.geom.crossings(x0, x1, t0, t1):
                op = self.alg0.crossing_operator(c) * op
                deg += -2 if c.family.kind == "root" else 1
        return op, deg

    def d_element(self, g: Weyl, source: str, target: str) -> BimoduleElement:
        key = (g, source, target)
        if key in self._cache:
            return self._cache[key]
        x0 = self.alg0.state(source).point
        x1 = weyl_act_point(g, self.alg1.state(target).point)
        half = Fraction(1, 2)
        try:
            op, deg = self._operator([x0, x1], [Fraction(0), Fraction(1)])
        except DegeneratePath:
            op = None
            for j in range(1, 40):
                nudge = [Fraction(((k + 1) * j * 7919) % 97 - 48, 1000 * (97 + j))
                         for k in range(self.sd.n)]
                mid = tuple((a + b) / 2 + c for a, b, c in zip(x0, x1, nudge))
                try:
                    op, deg = self._operator([x0, mid, x1], [Fraction(0), half, Fraction(1)])
                    break
                except DegeneratePath:
                    continue
            if op is None:
                raise
        sk = SkewElement.group(self.ring, weyl_inv(g)) * op
        sk.source, sk.target = source, target
        el = BimoduleElement(sk, source, target, deg, dict(self.twist), self.lifts)
        self._cache[key] = el
        return el

    def d_degree(self, g: Weyl, source: str, target: str) -> int:
        x0 = self.alg0.state(source).point
        x1 = weyl_act_point(g, self.alg1.state(target).point)
        return self.geom.count_degree(x0, x1, Fraction(0), Fraction(1))

    def root_length(self, g: Weyl, source: str, target: str) -> int:
        x0 = self.alg0.state(source).point
        x1 = weyl_act_point(g, self.alg1.state(target).point)
        return self.geom.root_count(x0, x1, Fraction(0), Fraction(1))

    def basis(self, source: str, target: str, maxdeg: int,
              radius: int | None = None) -> list[tuple[Weyl, int]]:
        """(g, deg D_g) with deg <= maxdeg; shells are grown when no radius is given."""
        deg = lambda g: self.d_degree(g, source, target)  # noqa: E731
        if radius is None:
            return [(g, d) for g, d, _ in grow_shells(self.alg0, deg, maxdeg)]
        return [(g, d) for g in self.alg0.weyl_ball(radius) if (d := deg(g)) <= maxdeg]

    def hom_dims(self, source: str, target: str, maxdeg: int, radius: int | None = None,
                 mindeg: int = 0) -> dict[int, int]:
        """Graded dims of e_target B e_source from the free basis {p D_g}."""
        out = {d: 0 for d in range(mindeg, maxdeg + 1)}
        for _, dg in self.basis(source, target, maxdeg, radius):
            for d in range(max(dg, mindeg), maxdeg + 1):
                out[d] += self.alg0.poly_dim(d - dg)
        return out

    def normal_form(self, el: BimoduleElement) -> dict:
        """Coefficients p_g with el = Σ p_g D_g in this bimodule."""
        return reduce_to_basis(self.ring, el.skew.terms, el.source, el.target,
                               lambda g: self.root_length(g, el.source, el.target),
                               lambda g: self.d_element(g, el.source, el.target).skew)

    def chambers(self) -> tuple[list[str], list[str]]:
        return [c.id for c in self.alg0.chambers], [c.id for c in self.alg1.chambers]


def make_wallcross_bimodule(sd: StrandData, lift0: Mapping, lift1: Mapping,
                            quantum: bool = False) -> WallCrossing:
    return WallCrossing(sd, lift0, lift1, quantum=quantum)


def compose_bimodules(b2: WallCrossing, b1: WallCrossing) -> WallCrossing:
    """B2 tensor B1 as a context from b1's source flavor to b2's target flavor."""
    if _key(b1.lift1) != _key(b2.lift0):
        raise BimoduleError("middle flavoring does not match")
    out = WallCrossing(b1.sd, b1.lift0, b2.lift1, b1.alg0, b2.alg1)
    out.twist = {k: b1.twist[k] + b2.twist[k] for k in b1.twist}
    return out


def same_alcove(sd_or_flavoring, lift0: Mapping, lift1: Mapping) -> bool:
    f = getattr(sd_or_flavoring, "flavoring", sd_or_flavoring)
    return _same_alcove(f, lift0, lift1)


# ---------------------------------------------------------------- Morita test

@dataclass
class MoritaReport:
    surjective0: bool
    hit: set = field(default_factory=set)
    missed: set = field(default_factory=set)
    reverse_surjective0: bool | None = None
    reverse_hit: set = field(default_factory=set)
    reverse_missed: set = field(default_factory=set)

    @property
    def ok(self) -> bool:
        return self.surjective0 and bool(self.reverse_surjective0)


def _hit_idempotents(fwd: WallCrossing, back: WallCrossing, maxdeg: int, radius: int):
    """Chambers c of fwd's source whose idempotent lies in the degree-0 image of back (x) fwd."""
    A = fwd.alg0
    src_ids, mid_ids = fwd.chambers()
    balls = A.weyl_ball(radius)
    hit, missed = set(), set()
    for c in src_ids:
        ech = Echelon(A.ring)
        for m in mid_ids:
            outs = [(g, fwd.d_degree(g, c, m)) for g in balls]
            backs = [(g, back.d_degree(g, m, c)) for g in balls]
            for g1, d1 in outs:
                if abs(d1) > maxdeg:
                    continue
                for g2, d2 in backs:
                    s = d1 + d2
                    if s > 0 or -s > maxdeg or s % 2:
                        continue
                    X = fwd.d_element(g1, c, m)
                    Y = back.d_element(g2, m, c)
                    for mono_deg in range(0, -s + 1, 2):
                        for p in A.monomials(mono_deg):
                            for q in A.monomials(-s - mono_deg):
                                P = Y.lmul(p) * X.lmul(q)
                                if P.is_zero():
                                    continue
                                el = Element(A, P.skew, c, c, 0)
                                ech.add(_coords(A.normal_form(el)))
        e = _coords(A.normal_form(A.identity(c)))
        if not ech.reduce(e):
            hit.add(c)
        else:
            missed.add(c)
    return hit, missed


def morita_check(sd: StrandData, lift0: Mapping, lift1: Mapping, maxdeg: int = 2,
                 radius: int = 1) -> MoritaReport:
    fwd = WallCrossing(sd, lift0, lift1)
    back = fwd.reverse()
    hit, missed = _hit_idempotents(fwd, back, maxdeg, radius)
    rhit, rmissed = _hit_idempotents(back, fwd, maxdeg, radius)
    return MoritaReport(not missed, hit, missed, not rmissed, rhit, rmissed)


# ---------------------------------------------------------------- composites

def compose_chain(chain: Sequence[WallCrossing]) -> WallCrossing:
    """The bimodule between the first source lift and the last target lift."""
    out = chain[0]
    for b in chain[1:]:
        out = compose_bimodules(b, out)
    return out


def product_image_dims(chain: Sequence[WallCrossing], source: str, target: str,
                       maxdeg: int) -> dict[int, int]:
    """Graded dims of the image of B_k (x) ... (x) B_1 -> B_{end,start} at (source, target).

    ``chain[0]`` acts first.  Products p_k D_k ... p_1 D_1 of basis elements
    are reduced in the composite bimodule.
    """
    comp = compose_chain(chain)
    A = comp.alg0
    ech = {d: Echelon(A.ring) for d in range(maxdeg + 1)}
    mids = [[c.id for c in b.alg1.chambers] for b in chain[:-1]] + [[target]]
    lows = []
    for b in chain:
        degs = [d for a in b.alg0.chambers for c in b.alg1.chambers
                for _, d in b.basis(a.id, c.id, maxdeg)]
        lows.append(min(degs, default=maxdeg + 1))
    tail = [sum(lows[k + 1:]) for k in range(len(chain))]

    def grow(k: int, cur: str, el: BimoduleElement | None, deg: int):
        if k == len(chain):
            for d in range(max(deg, 0), maxdeg + 1, 2):
                for p in A.monomials(d - deg):
                    P = el.lmul(p) if d > deg else el
                    if not P.is_zero():
                        ech[d].add(_coords(comp.normal_form(P)))
            return
        b = chain[k]
        room = maxdeg - deg - tail[k]
        for nxt in mids[k]:
            for g, dg in b.basis(cur, nxt, room):
                D = b.d_element(g, cur, nxt)
                for e in (range(0, room - dg + 1, 2) if k else [0]):
                    for p in A.monomials(e):
                        X = D.lmul(p) if e else D
                        Y = X if el is None else X * el
                        if not Y.is_zero():
                            grow(k + 1, nxt, Y, deg + dg + e)

    grow(0, source, None, 0)
    return {d: ech[d].rank for d in range(maxdeg + 1)}


# ---------------------------------------------------------------- unflavored comparison
#
# On a tree every edge flavor is a coboundary, so shifting each vertex's strands
# by eta_i with eta_tail - eta_head = beta_e puts all ghosts on their corporeals.
# The unflavored side only sees the resulting cyclic word of labelled strands and
# counts minimal diagrams with KLR weights: -2 for equal labels, +1 per edge
# joining the labels, +1 for a red of the same label.

def tree_gauge(sd: StrandData, lift: Mapping) -> dict:
    q = sd.quiver
    if any(e.tail == e.head for e in q.edges) or len(q.edges) != len(q.vertices) - 1:
        raise BimoduleError("gauge to the unflavored algebra needs a tree quiver")
    eta = {q.vertices[0]: Fraction(0)}
    pending = list(q.edges)
    while pending:
        rest = []
        for e in pending:
            b = _frac(lift[e.id])
            if e.tail in eta:
                eta[e.head] = eta[e.tail] - b
            elif e.head in eta:
                eta[e.tail] = eta[e.head] + b
            else:
                rest.append(e)
        if len(rest) == len(pending):
            raise BimoduleError("gauge to the unflavored algebra needs a connected quiver")
        pending = rest
    return eta


def unflavored_word(alg: KLRW, chamber: str) -> tuple:
    """Cyclic word of ('black', i) / ('red', i) tokens read left to right in [0, 1)."""
    sd = alg.sd
    eta = tree_gauge(sd, alg.lift)
    pts = [(_frac(x) - eta[i], ("black", i)) for x, i in zip(alg.state(chamber).point, sd.labels)]
    pts += [(alg.lift[k] - eta[k[0]], ("red", k[0])) for k in sd.flavoring.cb.framing_edges]
    # ties only occur between strands that do not interact, so any order will do
    pts = [(x - floor(x), tok) for x, tok in pts]
    return tuple(tok for _, tok in sorted(pts))


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _place(word: Sequence) -> list[Fraction]:
    # reds sit at fixed points; blacks are spread evenly inside the gaps between them
    W = sum(t[0] == "red" for t in word)
    gaps: list[list[int]] = [[] for _ in range(W + 1)]
    pos: list = [None] * len(word)
    g = 0
    for r, t in enumerate(word):
        if t[0] == "red":
            g += 1
            pos[r] = Fraction(g, W + 1)
        else:
            gaps[g].append(r)
    for g, rs in enumerate(gaps):
        for i, r in enumerate(rs):
            pos[r] = Fraction(g, W + 1) + Fraction(i + 1, (len(rs) + 1) * (W + 1))
    return pos


def unflavored_hom_dims(quiver, w0: Sequence, w1: Sequence, maxdeg: int,
                        max_winding: int = 12) -> dict[int, int]:
    """Graded dimension of e(w0) U e(w1) in degrees 0..maxdeg, for the unflavored
    cylindrical algebra on cyclic words."""
    if sorted(w0) != sorted(w1):
        return {d: 0 for d in range(maxdeg + 1)}
    if [t for t in w0 if t[0] == "red"] != [t for t in w1 if t[0] == "red"]:
        raise BimoduleError("words carry different red strands")
    pos0, pos1 = _place(w0), _place(w1)
    blacks0 = [r for r, t in enumerate(w0) if t[0] == "black"]
    blacks1 = [r for r, t in enumerate(w1) if t[0] == "black"]
    reds = [(pos0[r], t[1]) for r, t in enumerate(w0) if t[0] == "red"]
    labels = [w0[r][1] for r in blacks0]
    joins: dict = {}
    for e in quiver.edges:
        for pair in ((e.tail, e.head), (e.head, e.tail)):
            joins[pair] = joins.get(pair, 0) + 1
    n = len(blacks0)

    def crossings(p0, p1, q0, q1):
        return abs(floor(p0 - p1) - floor(q0 - q1))

    matchings = [m for m in permutations(blacks1)
                 if all(w1[t][1] == lab for t, lab in zip(m, labels))]

    def degree(m, wind):
        start = [pos0[r] for r in blacks0]
        end = [pos1[t] + k for t, k in zip(m, wind)]
        deg = 0
        for a in range(n):
            for b in range(a + 1, n):
                c = crossings(start[a], start[b], end[a], end[b])
                if labels[a] == labels[b]:
                    deg -= 2 * c
                else:
                    deg += joins.get((labels[a], labels[b]), 0) * c
            for rho, lab in reds:
                if lab == labels[a]:
                    deg += abs(floor(start[a] - rho) - floor(end[a] - rho))
        return deg

    out = {d: 0 for d in range(maxdeg + 1)}
    clear = 0
    for R in range(max_winding + 1):
        low = None
        for wind in product(range(-R, R + 1), repeat=n):
            if n and max(abs(k) for k in wind) != R:
                continue
            for m in matchings:
                dg = degree(m, wind)
                low = dg if low is None else min(low, dg)
                for d in range(max(dg, 0), maxdeg + 1):
                    if (d - dg) % 2 == 0:
                        out[d] += comb((d - dg) // 2 + n - 1, n - 1) if n else int(d == dg)
        if n == 0:
            return out
        clear = clear + 1 if low is None or low > maxdeg else 0
        if clear == 2:
            return out
    raise BimoduleError("unflavored hom space did not stabilise; it may be infinite")
