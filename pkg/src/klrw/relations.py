"""Randomized verification of the local relations in the polynomial representation.

Every relation is stated in the wall form used by the algebra: a crossing
is named by the strands whose coordinates meet (strand a's partner at
level n against strand b, a red, or a ghost), so the two sides of a
relation are operator words on one polynomial ring.  Each word carries a
degree, and both sides must be homogeneous of the same degree.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .polyrep import (Poly, Ring, SkewElement, ghost_factor, op_root_crossing, red_factor,
                      reflection, translation)

DOT, ROOT, MATTER = 2, -2, 1


@dataclass
class Word:
    """A sum of operator products; each product has a degree."""

    terms: list = field(default_factory=list)  # (coeff, [(SkewElement, degree)])

    @staticmethod
    def of(*ops) -> "Word":
        return Word([(1, list(ops))])

    def __add__(self, other: "Word") -> "Word":
        return Word(self.terms + other.terms)

    def __sub__(self, other: "Word") -> "Word":
        return Word(self.terms + [(-c, ops) for c, ops in other.terms])

    def degrees(self) -> set:
        return {sum(d for _, d in ops) for _, ops in self.terms}

    def value(self, ring: Ring) -> SkewElement:
        total = SkewElement(ring, {})
        for c, ops in self.terms:
            prod = SkewElement.identity(ring)
            for op, _ in reversed(ops):  # rightmost acts first
                prod = op * prod
            total = total + prod.scale(c)
        return total


@dataclass
class FamilyResult:
    family: str
    passed: int = 0
    failed: int = 0
    inhomogeneous: int = 0
    first_failure: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.inhomogeneous == 0 and self.passed > 0


@dataclass
class Report:
    mode: str
    results: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


class _Setup:
    """Random ring with spectator strands and formal flavor parameters."""

    def __init__(self, rng: random.Random, quantum: bool, ghost_sign: int = 1):
        self.rng = rng
        self.quantum = quantum
        self.n = rng.randint(3, 5)
        self.ghost_sign = ghost_sign
        params = ["b_e", "b_r", "b_r2"] if quantum else []
        self.ring = Ring.make(self.n, params, quantum=quantum)
        self.strands = rng.sample(range(self.n), 3)

    def level(self) -> int:
        return self.rng.randint(-3, 3)

    def b(self, name):
        return self.ring.var(name) if self.quantum else None

    # operators with degrees
    def dot(self, k):
        return (SkewElement.mult(self.ring.z(k)), DOT)

    def mult(self, p: Poly, deg: int):
        return (SkewElement.mult(p), deg)

    def root(self, a, b, n, direction=1):
        return (op_root_crossing(self.ring, a, b, n, direction), ROOT)

    def red(self, a, n, ne=True, matched=True, name="b_r"):
        if ne and matched:
            return (SkewElement.mult(red_factor(self.ring, a, n, self.b(name))), MATTER)
        return (SkewElement.identity(self.ring), MATTER if matched else 0)

    def ghost(self, a, c, n, ne=True, matched=True):
        if ne and matched:
            f = ghost_factor(self.ring, a, c, n, self.b("b_e"), self.ghost_sign)
            return (SkewElement.mult(f), MATTER)
        return (SkewElement.identity(self.ring), MATTER if matched else 0)

    def refl(self, a, b, n):
        return (SkewElement.group(self.ring, reflection(self.n, a, b, n)), 0)

    def ident(self):
        return (SkewElement.identity(self.ring), 0)


def _s_image(S: _Setup, a: int, b: int, n: int, k: int) -> Poly:
    """The reflection image of z_k for the wall x_a - x_b = n."""
    h = S.ring.hpoly()
    if k == a:
        return S.ring.z(b) + h.scale(n)
    if k == b:
        return S.ring.z(a) - h.scale(n)
    return S.ring.z(k)


# ---------------------------------------------------------------- families

def first_qh(S: _Setup):
    a, b, _ = S.strands
    X = S.ident()  # unlike or non-equivalent partners: no interaction in the representation
    k = S.rng.choice([a, b])
    return Word.of(X, S.dot(k)), Word.of(S.dot(k), X), {"a": a, "b": b, "dot": k}


def third_qh(S: _Setup):
    a, c, _ = S.strands
    n = S.level()
    ne = S.rng.random() < 0.5
    G = S.ghost(a, c, n, ne=ne)
    k = S.rng.choice([a, c])
    return Word.of(G, S.dot(k)), Word.of(S.dot(k), G), {"a": a, "c": c, "n": n, "ne": ne}


def psi2(S: _Setup):
    a, b, _ = S.strands
    n = S.level()
    lhs = Word.of(S.root(a, b, n, -1), S.root(a, b, n, 1))
    return lhs, Word([]), {"a": a, "b": b, "n": n}


def nilhecke_1(S: _Setup):
    """D z_a - (s z_a) D = 1."""
    a, b, _ = S.strands
    n = S.level()
    D = S.root(a, b, n)
    lhs = Word.of(D, S.dot(a)) - Word.of(S.mult(_s_image(S, a, b, n, a), DOT), D)
    return lhs, Word.of(S.ident()), {"a": a, "b": b, "n": n}


def nilhecke_2(S: _Setup):
    """D z_b - (s z_b) D = -1."""
    a, b, _ = S.strands
    n = S.level()
    D = S.root(a, b, n)
    lhs = Word.of(D, S.dot(b)) - Word.of(S.mult(_s_image(S, a, b, n, b), DOT), D)
    return lhs, Word([(-1, [S.ident()])]), {"a": a, "b": b, "n": n}


def q_nilhecke_1(S: _Setup):
    """D z_a - z_a D = [s]."""
    a, b, _ = S.strands
    n = S.level()
    D = S.root(a, b, n)
    lhs = Word.of(D, S.dot(a)) - Word.of(S.dot(a), D)
    return lhs, Word.of(S.refl(a, b, n)), {"a": a, "b": b, "n": n}


def q_nilhecke_2(S: _Setup):
    """D z_b - z_b D = -[s]."""
    a, b, _ = S.strands
    n = S.level()
    D = S.root(a, b, n)
    lhs = Word.of(D, S.dot(b)) - Word.of(S.dot(b), D)
    return lhs, Word([(-1, [S.refl(a, b, n)])]), {"a": a, "b": b, "n": n}


def braid(S: _Setup):
    """Walls x_a-x_b=n1, x_b-x_c=n3, x_a-x_c=n1+n3 crossed in opposite orders."""
    a, b, c = S.strands
    n1, n3 = S.level(), S.level()
    lhs = Word.of(S.root(a, b, n1), S.root(a, c, n1 + n3), S.root(b, c, n3))
    rhs = Word.of(S.root(b, c, n3), S.root(a, c, n1 + n3), S.root(a, b, n1))
    return lhs, rhs, {"a": a, "b": b, "c": c, "n1": n1, "n3": n3}


def _bigon(S: _Setup, kind: str, first_ne: bool, matched: bool):
    a, c, _ = S.strands
    n = S.level()
    if kind == "red":
        A, B = S.red(a, n, first_ne, matched), S.red(a, n, not first_ne, matched)
        factor = red_factor(S.ring, a, n, S.b("b_r"))
    else:
        A, B = S.ghost(a, c, n, first_ne, matched), S.ghost(a, c, n, not first_ne, matched)
        factor = ghost_factor(S.ring, a, c, n, S.b("b_e"), S.ghost_sign)
    lhs = Word.of(B, A)
    rhs = Word.of(S.mult(factor, 2 * MATTER)) if matched else Word.of(S.ident())
    return lhs, rhs, {"a": a, "c": c, "n": n, "matched": matched}


def cost_1(S: _Setup):
    return _bigon(S, "red", True, S.rng.random() < 0.8)


def cost_2(S: _Setup):
    return _bigon(S, "red", False, S.rng.random() < 0.8)


def black_bigon1(S: _Setup):
    return _bigon(S, "ghost", True, S.rng.random() < 0.8)


def black_bigon2(S: _Setup):
    return _bigon(S, "ghost", False, S.rng.random() < 0.8)


def red_triple(S: _Setup):
    """Two like corporeals meeting at a red: (D after R_a) - (R_a after D) = [s]."""
    a, b, _ = S.strands
    na, nb = S.level(), S.level()
    n = nb - na
    D = S.root(a, b, n)
    Ra = S.red(a, na)
    Rb = S.red(b, nb, ne=False)
    lhs = Word.of(Rb, D, Ra) - Word.of(Ra, D, Rb)
    return lhs, Word.of(S.refl(a, b, n)), {"a": a, "b": b, "na": na, "nb": nb}


def triple_ghosts(S: _Setup):
    """Two like ghost owners and one corporeal: correction +sign[s]."""
    c1, c2, a = S.strands
    n1, n2 = S.level(), S.level()
    n = n1 - n2  # wall x_c1 - x_c2 = n through the triple point
    D = S.root(c1, c2, n, -1)
    G1 = S.ghost(a, c1, n1)
    G2 = S.ghost(a, c2, n2, ne=False)
    lhs = Word.of(G2, D, G1) - Word.of(G1, D, G2)
    corr = (SkewElement.group(S.ring, reflection(S.n, c1, c2, n)).scale(-S.ghost_sign), 0)
    return lhs, Word.of(corr), {"a": a, "c1": c1, "c2": c2}


def triple_corporeals(S: _Setup):
    """Two like corporeals and one ghost: correction -sign[s]."""
    a, b, c = S.strands
    na, nb = S.level(), S.level()
    n = nb - na
    D = S.root(a, b, n)
    Ga = S.ghost(a, c, na)
    Gb = S.ghost(b, c, nb, ne=False)
    lhs = Word.of(Gb, D, Ga) - Word.of(Ga, D, Gb)
    corr = (SkewElement.group(S.ring, reflection(S.n, a, b, n)).scale(-S.ghost_sign), 0)
    return lhs, Word.of(corr), {"a": a, "b": b, "c": c}


def triple_plain(S: _Setup):
    """Triple points without a like pair on both sides: the two resolutions agree."""
    a, b, c = S.strands
    n = S.level()
    D = S.root(a, b, n)
    sym = S.ring.z(a) + S.ring.z(b)
    if S.rng.random() < 0.5:
        X = S.red(c, S.level())
    else:
        X = S.ghost(c, S.rng.choice([a, b]), S.level(), matched=False)
    lhs = Word.of(D, X, S.mult(sym, DOT))
    rhs = Word.of(X, S.mult(sym, DOT), D)
    return lhs, rhs, {"a": a, "b": b, "c": c, "n": n}


def dot_slide(S: _Setup):
    """Seam rule: [tau_a] z_a [tau_a]^-1 = z_a - h."""
    a = S.strands[0]
    t = translation(S.n, a, 1)
    ti = translation(S.n, a, -1)
    lhs = Word.of((SkewElement.group(S.ring, t), 0), S.dot(a), (SkewElement.group(S.ring, ti), 0))
    rhs = Word.of(S.mult(S.ring.z(a) - S.ring.hpoly(), DOT))
    return lhs, rhs, {"a": a}


CLASSICAL: dict[str, Callable] = {
    "c-first-QH": first_qh,
    "c-third-QH": third_qh,
    "c-psi2": psi2,
    "c-nilHecke-1": nilhecke_1,
    "c-nilHecke-2": nilhecke_2,
    "c-braid": braid,
    "w-cost-1": cost_1,
    "w-cost-2": cost_2,
    "w-black-bigon1": black_bigon1,
    "w-black-bigon2": black_bigon2,
    "red-triple-correction": red_triple,
    "w-triple-point": triple_ghosts,
    "w-triple-point2": triple_corporeals,
    "w-triple-unmatched": triple_plain,
}

QUANTUM: dict[str, Callable] = {
    "b-first-QH": first_qh,
    "b-third-QH": third_qh,
    "b-psi2": psi2,
    "b-nilHecke-1": q_nilhecke_1,
    "b-nilHecke-2": q_nilhecke_2,
    "b-braid": braid,
    "x-cost-1": cost_1,
    "x-cost-2": cost_2,
    "b-black-bigon1": black_bigon1,
    "b-black-bigon2": black_bigon2,
    "b-red-triple": red_triple,
    "b-triple-smart": triple_ghosts,
    "b-triple-smart2": triple_corporeals,
    "b-triple-plain": triple_plain,
    "a-dot-slide": dot_slide,
}


def check_instance(family: str, build: Callable, rng: random.Random, quantum: bool,
                   ghost_sign: int = 1, mutate: bool = False) -> tuple[bool, bool, dict]:
    S = _Setup(rng, quantum, ghost_sign)
    lhs, rhs, info = build(S)
    if mutate:
        rhs = Word([(-c, ops) for c, ops in rhs.terms]) if rhs.terms else Word.of(S.ident())
    degs = lhs.degrees() | rhs.degrees()
    homogeneous = len(degs) <= 1
    ok = lhs.value(S.ring) == rhs.value(S.ring)
    info = dict(info, n=S.n)
    return ok, homogeneous, info


def verify_relations(seed: int = 0, h_mode: str = "zero", instances: int = 100,
                     families: list[str] | None = None, ghost_sign: int = 1,
                     mutate: str | None = None) -> Report:
    if h_mode not in ("zero", "formal"):
        raise ValueError("h_mode must be 'zero' or 'formal'")
    quantum = h_mode == "formal"
    table = QUANTUM if quantum else CLASSICAL
    unknown = set(families or ()) - set(table)
    if unknown:
        raise ValueError(f"unknown relation families for h_mode {h_mode!r}: {sorted(unknown)}")
    rng = random.Random(seed)
    results = []
    for fam, build in table.items():
        if families and fam not in families:
            continue
        res = FamilyResult(fam)
        for k in range(instances):
            ok, hom, info = check_instance(fam, build, rng, quantum, ghost_sign, mutate == fam)
            if ok and hom:
                res.passed += 1
                continue
            if not ok:
                res.failed += 1
            if not hom:
                res.inhomogeneous += 1
            if res.first_failure is None:
                res.first_failure = dict(info, instance=k, homogeneous=hom, equal=ok)
        results.append(res)
    return Report(h_mode, results)
