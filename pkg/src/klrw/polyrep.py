"""Polynomial representation: sparse polynomials, root-localized rational
functions, the extended affine Weyl group and its twisted group ring.

Conventions.  A Weyl element g = (perm, shift) acts on positions by
(g x)_j = x_{perm^-1(j)} + shift_j and on polynomials by
(g f)(z) = f(g^-1 z) with translations scaled by h, so that a unit
translation of strand k substitutes z_k -> z_k - h (dot migration).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence


class PolyError(ArithmeticError):
    pass


# ---------------------------------------------------------------- rings

@dataclass(frozen=True)
class Ring:
    names: tuple[str, ...]
    nz: int  # the first nz variables are the dot variables z
    h: int | None = None  # index of h, or None when h = 0
    p: int | None = None  # characteristic; None means Q

    @staticmethod
    def make(nz: int, params: Sequence[str] = (), quantum: bool = False, p: int | None = None,
             znames: Sequence[str] | None = None) -> "Ring":
        names = tuple(znames or [f"z{k}" for k in range(nz)])
        extra = (("h",) if quantum else ()) + tuple(params)
        return Ring(names + extra, nz, nz if quantum else None, p)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def coerce(self, c):
        if self.p is not None:
            if isinstance(c, Fraction):
                return (c.numerator * pow(c.denominator, -1, self.p)) % self.p
            return int(c) % self.p
        if isinstance(c, Fraction):
            return c.numerator if c.denominator == 1 else c
        return c

    def inv(self, c):
        if self.p is not None:
            return pow(int(c), -1, self.p)
        return Fraction(1) / c

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = self.coerce(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, k: int | str) -> "Poly":
        if isinstance(k, str):
            k = self.index(k)
        e = [0] * self.nvars
        e[k] = 1
        return Poly(self, {tuple(e): 1})

    def z(self, k: int) -> "Poly":
        return self.var(k)

    def hpoly(self) -> "Poly":
        return self.zero() if self.h is None else self.var(self.h)

    def param(self, name: str, default=0) -> "Poly":
        if name in self.names:
            return self.var(name)
        return self.const(default)


class Poly:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple, object]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    # -- basics
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def key(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise PolyError("mixed rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        p = self.ring.p
        for m, c in other.terms.items():
            s = t.get(m, 0) + c
            if p is not None:
                s %= p
            if s:
                t[m] = self.ring.coerce(s) if p is None else s
            else:
                t.pop(m, None)
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Poly(self.ring, {m: (-c) % p if p else -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Poly":
        c = self.ring.coerce(c)
        if not c:
            return self.ring.zero()
        p = self.ring.p
        return Poly(self.ring, {m: (v * c) % p if p else self.ring.coerce(v * c)
                                for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._lift(other)
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        p = self.ring.p
        t: dict = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        if p is not None:
            t = {m: c % p for m, c in t.items()}
        else:
            t = {m: self.ring.coerce(c) for m, c in t.items()}
        return Poly(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def degree(self, weights: Sequence[int] | None = None) -> int:
        if not self.terms:
            return -1
        w = weights or [1] * self.ring.nvars
        return max(sum(a * b for a, b in zip(m, w)) for m in self.terms)

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        degs = {sum(a * b for a, b in zip(m, weights)) for m in self.terms}
        return len(degs) <= 1

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    # -- substitution
    def permute(self, perm: Sequence[int]) -> "Poly":
        """Variable j is renamed to perm[j] (z-variables only)."""
        nz = self.ring.nz
        t = {}
        for m, c in self.terms.items():
            e = list(m)
            for j in range(nz):
                e[perm[j]] = m[j]
            t[tuple(e)] = c
        return Poly(self.ring, t)

    def substitute(self, images: Mapping[int, "Poly"]) -> "Poly":
        """Simultaneous substitution x_j -> images[j] for the given variables."""
        ring = self.ring
        idx = sorted(images)
        cache: dict = {}

        def power(j, k):
            if (j, k) not in cache:
                cache[(j, k)] = images[j] ** k
            return cache[(j, k)]

        out: dict = {}
        res = ring.zero()
        for m, c in self.terms.items():
            rest = list(m)
            for j in idx:
                rest[j] = 0
            key = tuple(m[j] for j in idx)
            out.setdefault(key, []).append((tuple(rest), c))
        for key, terms in out.items():
            factor = ring.one()
            for j, k in zip(idx, key):
                if k:
                    factor = factor * power(j, k)
            res = res + factor * Poly(ring, dict(terms))
        return res

    def specialize(self, values: Mapping[str, object], ring: Ring) -> "Poly":
        """Map into ``ring`` setting the named variables to constants."""
        out = ring.zero()
        for m, c in self.terms.items():
            term = ring.const(c)
            for j, k in enumerate(m):
                if not k:
                    continue
                nm = self.ring.names[j]
                if nm in values:
                    term = term * ring.const(values[nm]) ** k
                else:
                    term = term * ring.var(nm) ** k
            out = out + term
        return out

    # -- division
    def div_linear(self, L: "Poly") -> tuple["Poly", "Poly"]:
        """Quotient and remainder of division by a linear form."""
        ring = self.ring
        lin = [(m, c) for m, c in L.terms.items() if any(m)]
        if not lin:
            raise PolyError("division by a constant form")
        # pivot variable: the last variable present in L
        j = max(m.index(1) for m, _ in lin)
        cj = next(c for m, c in lin if m[j] == 1)
        inv = ring.inv(cj)
        r = Poly(ring, dict(self.terms))
        q = ring.zero()
        while True:
            top = [(m, c) for m, c in r.terms.items() if m[j] > 0]
            if not top:
                break
            d = max(m[j] for m, _ in top)
            qt = {}
            for m, c in top:
                if m[j] == d:
                    e = list(m)
                    e[j] -= 1
                    qt[tuple(e)] = ring.coerce(c * inv) if ring.p is None else (c * inv) % ring.p
            qp = Poly(ring, qt)
            q = q + qp
            r = r - qp * L
        return q, r

    def exact_div(self, M: "Poly") -> "Poly":
        """Exact quotient self / M by lex-leading-term division."""
        ring = self.ring
        if not M:
            raise PolyError("division by zero")
        lm = max(M.terms)
        inv = ring.inv(M.terms[lm])
        r = Poly(ring, dict(self.terms))
        q = ring.zero()
        while r:
            top = max(r.terms)
            e = tuple(a - b for a, b in zip(top, lm))
            if e and min(e) < 0:
                raise PolyError("non-exact division")
            c = r.terms[top] * inv
            t = Poly(ring, {e: ring.coerce(c) if ring.p is None else c % ring.p})
            q = q + t
            r = r - t * M
        return q

    def exact_div_linear(self, L: "Poly") -> "Poly":
        q, r = self.div_linear(L)
        if r:
            raise PolyError("non-exact division by a root factor")
        return q

    # -- display
    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, m) if k)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


def linear_form(ring: Ring, coeffs: Mapping[int, object], const=0) -> Poly:
    out = ring.const(const)
    for j, c in coeffs.items():
        out = out + ring.var(j).scale(c)
    return out


# ---------------------------------------------------------------- Weyl group

Weyl = tuple  # (perm: tuple[int,...], shift: tuple[int,...])


def weyl_identity(n: int) -> Weyl:
    return (tuple(range(n)), (0,) * n)


def weyl_mul(g1: Weyl, g2: Weyl) -> Weyl:
    """g1 g2, acting on positions as x -> g1(g2 x)."""
    p1, t1 = g1
    p2, t2 = g2
    n = len(p1)
    # (g x)_j = x_{p^-1 j} + t_j, with p given as the image map j -> p[j]
    perm = tuple(p1[p2[j]] for j in range(n))
    inv1 = [0] * n
    for j in range(n):
        inv1[p1[j]] = j
    shift = tuple(t1[j] + t2[inv1[j]] for j in range(n))
    return (perm, shift)


def weyl_inv(g: Weyl) -> Weyl:
    p, t = g
    n = len(p)
    inv = [0] * n
    for j in range(n):
        inv[p[j]] = j
    # g^-1 x: y_k = x_{p(k)} - t_{p(k)};  as (perm', shift'): perm' = inv, shift'_k = -t_{p(k)}
    return (tuple(inv), tuple(-t[p[k]] for k in range(n)))


def weyl_act_point(g: Weyl, x: Sequence) -> tuple:
    p, t = g
    n = len(p)
    out = [None] * n
    for j in range(n):
        out[p[j]] = x[j] + t[p[j]]
    return tuple(out)


def translation(n: int, k: int, amount: int = 1) -> Weyl:
    t = [0] * n
    t[k] = amount
    return (tuple(range(n)), tuple(t))


def reflection(n: int, a: int, b: int, level: int) -> Weyl:
    """Affine reflection in x_a - x_b = level: x_a -> x_b + level, x_b -> x_a - level."""
    p = list(range(n))
    p[a], p[b] = b, a
    t = [0] * n
    t[b] = -level  # new x_b = x_a - level
    t[a] = level  # new x_a = x_b + level
    return (tuple(p), tuple(t))


def weyl_act_poly(g: Weyl, f: Poly) -> Poly:
    """(g f)(z) = f(g^-1 z): substitution z_k -> z_{p(k)} - h t_{p(k)}."""
    p, t = g
    ring = f.ring
    if all(x == 0 for x in t) or ring.h is None:
        return f.permute(p)
    h = ring.hpoly()
    images = {k: ring.z(p[k]) - h.scale(t[p[k]]) for k in range(ring.nz)}
    return f.substitute(images)


def weyl_length_key(g: Weyl):
    p, t = g
    inv = sum(1 for a in range(len(p)) for b in range(a + 1, len(p)) if p[a] > p[b])
    return (sum(abs(x) for x in t) + inv, p, t)


# ---------------------------------------------------------------- rational functions

def _normalize_linear(L: Poly) -> tuple[Poly, object]:
    """Scale L so that its lowest-index variable has coefficient 1; returns (L', c) with L = c L'."""
    ring = L.ring
    lin = sorted(((m.index(1), c) for m, c in L.terms.items() if any(m)))
    if not lin:
        raise PolyError("constant denominator factor")
    c = lin[0][1]
    return L.scale(ring.inv(c)), c


class RationalFn:
    """num / prod(den factors); every factor is a normalized linear form."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Mapping | None = None, reduce: bool = True):
        self.num = num
        self.den: dict = dict(den or {})  # key -> (Poly, multiplicity)
        if reduce:
            self._reduce()

    @staticmethod
    def const(ring: Ring, c) -> "RationalFn":
        return RationalFn(ring.const(c), {}, reduce=False)

    @staticmethod
    def poly(p: Poly) -> "RationalFn":
        return RationalFn(p, {}, reduce=False)

    @staticmethod
    def inverse_linear(L: Poly) -> "RationalFn":
        Ln, c = _normalize_linear(L)
        ring = L.ring
        return RationalFn(ring.const(ring.inv(c)), {Ln.key(): (Ln, 1)}, reduce=False)

    @property
    def ring(self) -> Ring:
        return self.num.ring

    def _reduce(self):
        if not self.num:
            self.den = {}
            return
        for k in list(self.den):
            L, mult = self.den[k]
            while mult:
                q, r = self.num.div_linear(L)
                if r:
                    break
                self.num = q
                mult -= 1
            if mult:
                self.den[k] = (L, mult)
            else:
                del self.den[k]

    def is_zero(self) -> bool:
        return not self.num

    def is_poly(self) -> bool:
        return not self.den

    def as_poly(self) -> Poly:
        if self.den:
            raise PolyError(f"not a polynomial: {self}")
        return self.num

    def den_poly(self) -> Poly:
        out = self.ring.one()
        for L, m in self.den.values():
            out = out * L ** m
        return out

    def __mul__(self, other):
        if isinstance(other, Poly):
            return RationalFn(self.num * other, self.den)
        if not isinstance(other, RationalFn):
            return RationalFn(self.num.scale(other), self.den, reduce=False)
        den = dict(self.den)
        for k, (L, m) in other.den.items():
            den[k] = (L, den[k][1] + m) if k in den else (L, m)
        return RationalFn(self.num * other.num, den)

    def __add__(self, other):
        if isinstance(other, Poly):
            other = RationalFn.poly(other)
        if not other.num:
            return self
        if not self.num:
            return other
        lcm = dict(self.den)
        for k, (L, m) in other.den.items():
            if k not in lcm or lcm[k][1] < m:
                lcm[k] = (L, m)

        def lift(rf):
            n = rf.num
            for k, (L, m) in lcm.items():
                have = rf.den.get(k, (L, 0))[1]
                if m > have:
                    n = n * L ** (m - have)
            return n

        return RationalFn(lift(self) + lift(other), lcm)

    def __neg__(self):
        return RationalFn(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other if isinstance(other, RationalFn) else RationalFn.poly(-other))

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = RationalFn.poly(other)
        return (self - other).is_zero()

    def weyl(self, g: Weyl) -> "RationalFn":
        num = weyl_act_poly(g, self.num)
        den = {}
        for L, m in self.den.values():
            Lg = weyl_act_poly(g, L)
            Ln, c = _normalize_linear(Lg)
            num = num.scale(self.ring.inv(c) ** m if self.ring.p is None else pow(int(self.ring.inv(c)), m, self.ring.p))
            k = Ln.key()
            den[k] = (Ln, den[k][1] + m) if k in den else (Ln, m)
        return RationalFn(num, den, reduce=False)

    def __str__(self):
        if not self.den:
            return str(self.num)
        d = " * ".join(f"({L})" + (f"^{m}" if m > 1 else "") for L, m in self.den.values())
        return f"({self.num}) / ({d})"

    __repr__ = __str__


# ---------------------------------------------------------------- twisted group ring

class SkewElement:
    """Finite sum Σ f_w [w] with f_w rational functions; source/target chambers optional."""

    __slots__ = ("ring", "n", "terms", "source", "target")

    def __init__(self, ring: Ring, terms: Mapping[Weyl, RationalFn] | None = None,
                 source=None, target=None, n: int | None = None):
        self.ring = ring
        self.n = ring.nz if n is None else n
        self.terms = {w: f for w, f in (terms or {}).items() if not f.is_zero()}
        self.source = source
        self.target = target

    @staticmethod
    def identity(ring: Ring, source=None, target=None) -> "SkewElement":
        return SkewElement(ring, {weyl_identity(ring.nz): RationalFn.const(ring, 1)}, source,
                           target if target is not None else source)

    @staticmethod
    def group(ring: Ring, g: Weyl, source=None, target=None) -> "SkewElement":
        return SkewElement(ring, {g: RationalFn.const(ring, 1)}, source, target)

    @staticmethod
    def mult(p: Poly | RationalFn, source=None, target=None) -> "SkewElement":
        f = p if isinstance(p, RationalFn) else RationalFn.poly(p)
        ring = f.ring
        return SkewElement(ring, {weyl_identity(ring.nz): f}, source,
                           target if target is not None else source)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SkewElement") -> "SkewElement":
        t = dict(self.terms)
        for w, f in other.terms.items():
            t[w] = t[w] + f if w in t else f
        return SkewElement(self.ring, t, self.source or other.source, self.target or other.target)

    def __neg__(self):
        return SkewElement(self.ring, {w: -f for w, f in self.terms.items()}, self.source, self.target)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SkewElement":
        if isinstance(c, (Poly, RationalFn)):
            return SkewElement.mult(c, self.target, self.target) * self
        return SkewElement(self.ring, {w: f * c for w, f in self.terms.items()}, self.source, self.target)

    def __mul__(self, other: "SkewElement") -> "SkewElement":
        """Composition: (self * other) applies other first."""
        if not isinstance(other, SkewElement):
            return self.scale(other)
        t: dict = {}
        for w, f in self.terms.items():
            for v, g in other.terms.items():
                wv = weyl_mul(w, v)
                term = f * g.weyl(w)
                t[wv] = t[wv] + term if wv in t else term
        return SkewElement(self.ring, t, other.source, self.target)

    def __eq__(self, other):
        return isinstance(other, SkewElement) and (self - other).is_zero()

    def apply(self, p: Poly) -> Poly:
        total = RationalFn.poly(self.ring.zero())
        for w, f in self.terms.items():
            total = total + f * weyl_act_poly(w, p)
        if total.den:
            raise PolyError("application left the polynomial ring")
        return total.num

    def support(self) -> list:
        return sorted(self.terms, key=weyl_length_key)

    def dump(self) -> list[tuple[str, str]]:
        out = []
        for w in self.support():
            out.append((weyl_word(w), str(self.terms[w])))
        return out

    def __repr__(self):
        return "SkewElement(" + ", ".join(f"{w}: {f}" for w, f in self.dump()) + ")"


def weyl_word(g: Weyl) -> str:
    p, t = g
    return f"perm={list(p)} shift={list(t)}"


# ---------------------------------------------------------------- operators

def divided_difference(p: Poly, a: int, b: int, level: int = 0) -> Poly:
    """(p - s p) / (z_a - z_b - level h) for the affine reflection s."""
    ring = p.ring
    s = reflection(ring.nz, a, b, level)
    alpha = ring.z(a) - ring.z(b) - ring.hpoly().scale(level)
    return (p - weyl_act_poly(s, p)).exact_div_linear(alpha)


def root_form(ring: Ring, a: int, b: int, level: int) -> Poly:
    return ring.z(a) - ring.z(b) - ring.hpoly().scale(level)


def op_dot(ring: Ring, k: int) -> SkewElement:
    return SkewElement.mult(ring.z(k))


def op_root_crossing(ring: Ring, a: int, b: int, level: int = 0, direction: int = 1) -> SkewElement:
    """Strand a passes strand b's level-n partner; direction -1 reverses it."""
    alpha = root_form(ring, a, b, level)
    inv = RationalFn.inverse_linear(alpha)
    s = reflection(ring.nz, a, b, level)
    terms = {weyl_identity(ring.nz): inv * direction, s: inv * (-direction)}
    return SkewElement(ring, terms)


def op_unlike_crossing(ring: Ring) -> SkewElement:
    return SkewElement.identity(ring)


def red_factor(ring: Ring, a: int, level: int = 0, b: Poly | None = None) -> Poly:
    """z_a + h (b + level) for the level-n partner of strand a meeting a red strand."""
    h = ring.hpoly()
    bb = b if b is not None else ring.zero()
    return ring.z(a) + h * (bb + level)


def ghost_factor(ring: Ring, a: int, c: int, level: int = 0, b: Poly | None = None,
                 sign: int = 1) -> Poly:
    """sign * (z_c - z_a + h (b_e - n)) for strand a's level-n partner meeting the ghost of c."""
    h = ring.hpoly()
    bb = b if b is not None else ring.zero()
    return (ring.z(c) - ring.z(a) + h * (bb - level)).scale(sign)


def op_matter_crossing(ring: Ring, factor: Poly, northeast: bool, matched: bool = True) -> SkewElement:
    if matched and northeast:
        return SkewElement.mult(factor)
    return SkewElement.identity(ring)


def weyl_act(g: Weyl, f: Poly) -> Poly:
    """Dot-migration action: relabelling a strand by a translation of n sends z to z + n h.

    This is the action through g^-1 of the convention used by the twisted
    product (``weyl_act_poly``), so weyl_act(g1 g2, f) = weyl_act(g2, weyl_act(g1, f)).
    """
    return weyl_act_poly(weyl_inv(g), f)
