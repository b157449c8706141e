"""Annular tangle evaluation for sl2 (Gamma = A1), at most two red strands.

Everything is computed in a degree-truncated model of the algebra: Hom
spaces are spanned by p * D_g, products are reduced to normal form, and
modules, quotients and resolutions are plain exact linear algebra.

Bigrading of the output: a class in resolution index i and internal degree
D contributes to homological degree h = D - i and quantum degree q = m - D
after the cap shift by m (m = 1 for A1).  The shift is invisible in h.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import KLRW, Element
from .bimodules import BimoduleElement, WallCrossing
from .chambers import StrandData
from .linalg import Span, complement, kernel
from .quiver_flavor import FlavorGroup, Flavoring, Quiver, build_cb_graph


class TangleError(ValueError):
    pass


# ---------------------------------------------------------------- graded spaces

@dataclass
class GradedVectorSpace:
    dims: dict = field(default_factory=dict)  # (h, q) -> dim

    def __post_init__(self):
        self.dims = {k: v for k, v in self.dims.items() if v}

    def __add__(self, other):
        out = dict(self.dims)
        for k, v in other.dims.items():
            out[k] = out.get(k, 0) + v
        return GradedVectorSpace(out)

    def tensor(self, other: "GradedVectorSpace") -> "GradedVectorSpace":
        out: dict = {}
        for (h1, q1), a in self.dims.items():
            for (h2, q2), b in other.dims.items():
                out[(h1 + h2, q1 + q2)] = out.get((h1 + h2, q1 + q2), 0) + a * b
        return GradedVectorSpace(out)

    def total(self) -> int:
        return sum(self.dims.values())

    def rows(self) -> list[tuple[int, int, int]]:
        return [(h, q, d) for (h, q), d in sorted(self.dims.items())]

    def poincare(self) -> str:
        """Poincare polynomial in t (homological) and q, highest q first."""
        if not self.dims:
            return "0"
        terms = []
        for (h, q), d in sorted(self.dims.items(), key=lambda kv: (-kv[0][1], kv[0][0])):
            mono = []
            if h:
                mono.append("t" if h == 1 else f"t^{h}")
            if q:
                mono.append("q" if q == 1 else f"q^{q}")
            body = "*".join(mono)
            if not body:
                terms.append(str(d))
            else:
                terms.append(body if d == 1 else f"{d}*{body}")
        return " + ".join(terms)


# ---------------------------------------------------------------- complexes

@dataclass
class ChainComplex:
    """Complex of graded vector spaces with d_i : C_i -> C_{i-1}.

    spaces[i][D] lists basis labels of C_i in internal degree D;
    diff[i][D] maps a label of C_i to a sparse vector over labels of C_{i-1}.
    """
    spaces: dict
    diff: dict

    def check(self) -> None:
        for i, per in self.diff.items():
            nxt = self.diff.get(i - 1, {})
            for D, cols in per.items():
                for col, img in cols.items():
                    out: dict = {}
                    for r, c in img.items():
                        for r2, c2 in nxt.get(D, {}).get(r, {}).items():
                            out[r2] = out.get(r2, 0) + c * c2
                    if any(out.values()):
                        raise TangleError(f"d^2 != 0 at index {i}, degree {D}")

    def _rank(self, i: int, D: int) -> int:
        cols = self.diff.get(i, {}).get(D, {})
        s = Span()
        for v in cols.values():
            s.add(v)
        return s.dim

    def homology(self) -> dict:
        out = {}
        for i, per in self.spaces.items():
            for D, basis in per.items():
                dim = len(basis) - self._rank(i, D) - self._rank(i + 1, D)
                if dim:
                    out[(i, D)] = dim
        return out

    def simplified(self) -> "ChainComplex":
        """Gaussian elimination of every invertible matrix entry."""
        spaces = {i: {D: list(b) for D, b in per.items()} for i, per in self.spaces.items()}
        diff = {i: {D: {c: dict(v) for c, v in cols.items()} for D, cols in per.items()}
                for i, per in self.diff.items()}
        changed = True
        while changed:
            changed = False
            for i in sorted(diff):
                for D in sorted(diff[i]):
                    cols = diff[i][D]
                    pick = next(((c, r, x) for c, v in cols.items() for r, x in v.items() if x), None)
                    if pick is None:
                        continue
                    col, row, a = pick
                    delta = cols.pop(col)
                    for c2, v2 in cols.items():
                        g = v2.pop(row, 0)
                        if g:
                            for r, x in delta.items():
                                if r == row:
                                    continue
                                nv = v2.get(r, 0) - g * x / a
                                if nv:
                                    v2[r] = nv
                                else:
                                    v2.pop(r, None)
                    spaces[i][D].remove(col)
                    spaces[i - 1][D].remove(row)
                    for c2, v2 in diff.get(i + 1, {}).get(D, {}).items():
                        v2.pop(col, None)
                    diff.get(i - 1, {}).get(D, {}).pop(row, None)
                    changed = True
                    break
                if changed:
                    break
        return ChainComplex(spaces, diff)


# ---------------------------------------------------------------- truncated algebra

class TruncatedAlgebra:
    """Graded pieces e_b R_d e_a (d <= N) with bases p * D_g and structure constants."""

    def __init__(self, alg: KLRW, N: int):
        self.alg = alg
        self.N = N
        self.ids = [c.id for c in alg.chambers]
        self.keys: dict = {}  # (a, b, d) -> list of keys
        self.elems: dict = {}  # (a, b, key) -> Element
        for a in self.ids:
            for b in self.ids:
                B = alg.basis(a, b, N)
                for g, dg, _ in B.elements:
                    if dg < 0:
                        raise TangleError("algebra is not non-negatively graded")
                    D = alg.d_element(g, a, b)
                    for d in range(dg, N + 1):
                        for mono in alg.monomials(d - dg):
                            (exp,) = mono.terms
                            key = (g, exp)
                            self.keys.setdefault((a, b, d), []).append(key)
                            self.elems[(a, b, key)] = D.lmul(mono) if d > dg else D
        for a in self.ids:
            for b in self.ids:
                n0 = len(self.keys.get((a, b, 0), []))
                if n0 != (1 if a == b else 0):
                    raise TangleError("degree-zero part is not spanned by the idempotents")
        self._mult: dict = {}

    def basis(self, a: str, b: str, d: int) -> list:
        return self.keys.get((a, b, d), [])

    def coords(self, el: Element) -> dict:
        nf = self.alg.normal_form(el)
        return {(g, m): Fraction(c) for g, p in nf.items() for m, c in p.terms.items()}

    def mult(self, b: str, c: str, ykey, a: str, xkey) -> dict:
        """(y : b -> c) * (x : a -> b) in coordinates of Hom(a -> c)."""
        k = (a, b, c, ykey, xkey)
        hit = self._mult.get(k)
        if hit is None:
            hit = self.coords(self.elems[(b, c, ykey)] * self.elems[(a, b, xkey)])
            self._mult[k] = hit
        return hit


# ---------------------------------------------------------------- free modules

@dataclass
class FreeModule:
    """Direct sum of projectives P_c<s> = R e_c with generator in degree s."""
    gens: list  # (chamber, shift)

    def basis(self, T: TruncatedAlgebra, b: str, d: int) -> list:
        return [(j, key) for j, (c, s) in enumerate(self.gens) for key in T.basis(c, b, d - s)]


def _act(T: TruncatedAlgebra, F: FreeModule, b: str, bp: str, ukey, vec: Mapping) -> dict:
    """u * vec for u : b -> bp and vec in F at chamber b."""
    out: dict = {}
    for (j, key), c in vec.items():
        cj = F.gens[j][0]
        for k2, x in T.mult(b, bp, ukey, cj, key).items():
            out[(j, k2)] = out.get((j, k2), 0) + c * x
    return {k: v for k, v in out.items() if v}


def _apply(T: TruncatedAlgebra, F1: FreeModule, images: list, F0: FreeModule, b: str,
           vec: Mapping) -> dict:
    """phi(vec) for phi : F1 -> F0 given by generator images."""
    out: dict = {}
    for (j, key), c in vec.items():
        cj = F1.gens[j][0]
        for (l, k2), x in images[j].items():
            cl = F0.gens[l][0]
            for k3, y in T.mult(cj, b, key, cl, k2).items():
                out[(l, k3)] = out.get((l, k3), 0) + c * x * y
    return {k: v for k, v in out.items() if v}


@dataclass
class Resolution:
    terms: list  # FreeModule per index
    maps: list  # maps[i] : generator images of terms[i+1] in terms[i]

    @property
    def length(self) -> int:
        return len(self.terms) - 1


def _generators(T: TruncatedAlgebra, F: FreeModule, K: dict) -> list:
    """Minimal generators (chamber, degree, vector) of the submodule with pieces K."""
    gens = []
    for d in range(T.N + 1):
        for b in T.ids:
            piece = K.get((b, d), [])
            if not piece:
                continue
            rad = Span()
            for k in range(1, d + 1):
                for bp in T.ids:
                    for kappa in K.get((bp, d - k), []):
                        for u in T.basis(bp, b, k):
                            rad.add(_act(T, F, bp, b, u, kappa))
            for v in complement(piece, rad):
                gens.append((b, d, v))
    return gens


def minimal_resolution(T: TruncatedAlgebra, F0: FreeModule, K0: dict,
                       max_length: int = 16) -> Resolution:
    """Minimal projective resolution of F0 / K0 (K0 a submodule given degree-wise)."""
    terms, maps = [F0], []
    F, K = F0, K0
    while any(K.values()):
        if len(terms) > max_length:
            raise TangleError(f"resolution longer than {max_length}")
        gens = _generators(T, F, K)
        F1 = FreeModule([(b, d) for b, d, _ in gens])
        images = [v for _, _, v in gens]
        Knext: dict = {}
        for d in range(T.N + 1):
            for b in T.ids:
                cols = [(lab, _apply(T, F1, images, F, b, {lab: 1})) for lab in F1.basis(T, b, d)]
                ker = kernel(cols)
                if ker:
                    Knext[(b, d)] = ker
        terms.append(F1)
        maps.append(images)
        F, K = F1, Knext
    return Resolution(terms, maps)


# ---------------------------------------------------------------- quotients

class Quotient:
    """R / R e_Z R for a set Z of chambers, degree-wise."""

    def __init__(self, T: TruncatedAlgebra, Z: Iterable[str]):
        self.T = T
        self.Z = set(Z)
        self.ideal: dict = {}
        for a in T.ids:
            for b in T.ids:
                for d in range(T.N + 1):
                    s = Span()
                    for z in self.Z:
                        for k in range(d + 1):
                            for x in T.basis(a, z, k):
                                for y in T.basis(z, b, d - k):
                                    s.add(T.mult(z, b, y, a, x))
                    self.ideal[(a, b, d)] = s

    def dim(self, a: str, b: str, d: int) -> int:
        return len(self.T.basis(a, b, d)) - self.ideal[(a, b, d)].dim

    def left_module(self, chambers: Iterable[str]) -> tuple[FreeModule, dict]:
        """Presentation of the left module R^(z) e_C as F0 / K0."""
        cs = [c for c in chambers if self.dim(c, c, 0)]
        F0 = FreeModule([(c, 0) for c in cs])
        K0: dict = {}
        for b in self.T.ids:
            for d in range(self.T.N + 1):
                vecs = []
                for j, c in enumerate(cs):
                    for v in self.ideal[(c, b, d)].basis():
                        vecs.append({(j, k): x for k, x in v.items()})
                if vecs:
                    K0[(b, d)] = vecs
        return F0, K0


def tor_complex(Q: Quotient, pinch: Iterable[str], res: Resolution) -> ChainComplex:
    """e_pinch R^(z) (right module) tensored with a resolution."""
    T = Q.T
    pinch = list(pinch)
    spaces: dict = {}
    diff: dict = {}
    qbasis: dict = {}

    def qb(a, p, e):
        key = (a, p, e)
        if key not in qbasis:
            full = [{k: 1} for k in T.basis(a, p, e)]
            qbasis[key] = [next(iter(v)) for v in complement(full, Q.ideal[(a, p, e)])] \
                if e >= 0 else []
        return qbasis[key]

    for i, F in enumerate(res.terms):
        spaces[i] = {}
        for D in range(T.N + 1):
            labels = [(j, p, key) for j, (c, s) in enumerate(F.gens) for p in pinch
                      for key in qb(c, p, D - s)]
            spaces[i][D] = labels
    for i in range(1, len(res.terms)):
        F1, F0, images = res.terms[i], res.terms[i - 1], res.maps[i - 1]
        diff[i] = {}
        for D in range(T.N + 1):
            cols = {}
            for (j, p, key) in spaces[i][D]:
                cj, sj = F1.gens[j]
                img: dict = {}
                for (l, k2), x in images[j].items():
                    cl = F0.gens[l][0]
                    prod = T.mult(cj, p, key, cl, k2)
                    for k3, y in prod.items():
                        img[(l, p, k3)] = img.get((l, p, k3), 0) + x * y
                cols[(j, p, key)] = _reduce_quotient(Q, F0, img, D, spaces[i - 1][D])
            diff[i][D] = cols
    return ChainComplex(spaces, diff)


def _reduce_quotient(Q: Quotient, F0: FreeModule, img: dict, D: int, labels: list) -> dict:
    """Coordinates of img modulo the ideal, on the quotient basis labels."""
    groups: dict = {}
    for (l, p, k), x in img.items():
        groups.setdefault((l, p), {})[k] = x
    out = {}
    allowed = set(labels)
    for (l, p), vec in groups.items():
        c, s = F0.gens[l]
        r = Q.ideal[(c, p, D - s)].reduce(vec)
        # r is supported on non-pivot keys; rewrite over the chosen quotient basis
        for k, x in _express(Q, c, p, D - s, r).items():
            lab = (l, p, k)
            if lab in allowed and x:
                out[lab] = out.get(lab, 0) + x
    return out


def _express(Q: Quotient, a: str, p: str, e: int, vec: dict) -> dict:
    """Coefficients c_k with vec = sum c_k [k] modulo the ideal, over the quotient basis."""
    I = Q.ideal[(a, p, e)]
    full = [{k: 1} for k in Q.T.basis(a, p, e)]
    qkeys = [next(iter(v)) for v in complement(full, I)]
    cols = [(("q", k), {k: 1}) for k in qkeys] + \
           [(("i", n), r) for n, r in enumerate(I.rows.values())] + [(("v", 0), vec)]
    for comb in kernel(cols):
        if ("v", 0) in comb:
            c0 = comb[("v", 0)]
            return {k: -x / c0 for (tag, k), x in comb.items() if tag == "q"}
    raise TangleError("vector lies outside the truncated Hom space")


# ---------------------------------------------------------------- sl2 setup

def sl2_lift(w: int) -> dict:
    """Evenly spaced red parameters (2m - 1) / 2w."""
    return {("1", m): Fraction(2 * m - 1, 2 * w) for m in range(1, w + 1)}


def sl2_strands(w: int, v: int, lift: Mapping | None = None) -> StrandData:
    q = Quiver(("1",))
    cb = build_cb_graph(q, {"1": w})
    beta = {k: Fraction(x) % 1 for k, x in (lift or sl2_lift(w)).items()}
    f = Flavoring.make(cb, FlavorGroup.rational(), beta)
    return StrandData.make(f, {"1": v})


def sl2_algebra(w: int, v: int, lift: Mapping | None = None) -> KLRW:
    """The A1 cylindrical algebra with w reds (evenly spaced by default) and v blacks."""
    lift = {k: Fraction(x) for k, x in (lift or sl2_lift(w)).items()}
    return KLRW(sl2_strands(w, v, lift), lift)


def red_order(lift: Mapping) -> list:
    """Red keys in increasing order of their real lifts."""
    return sorted(lift, key=lambda k: Fraction(lift[k]))


def braid_lift(lift: Mapping, i: int) -> dict:
    """Endpoint of the linear path swapping the i-th and (i+1)-st reds."""
    keys = red_order(lift)
    if not 0 <= i < len(keys) - 1:
        raise TangleError(f"braid index {i} out of range for {len(keys)} red strands")
    out = {k: Fraction(x) for k, x in lift.items()}
    a, b = keys[i], keys[i + 1]
    out[a], out[b] = out[b], out[a]
    return out


def rotate_lift(lift: Mapping, sign: int) -> dict:
    """Endpoint of the path moving every red one click (1/w) around the cylinder."""
    if sign not in (1, -1):
        raise TangleError("rotation sign must be +1 or -1")
    w = len(lift)
    return {k: Fraction(x) + Fraction(sign, w) for k, x in lift.items()}


def braid_bimodule(i: int, sign: int = 1, w: int = 2, v: int = 1,
                   lift: Mapping | None = None) -> WallCrossing:
    """Wall-crossing bimodule of the linear swap of reds i and i+1 (positive crossings only).

    A negative crossing is the inverse derived equivalence, which is not the
    bimodule of any real flavor path; it is rejected.
    """
    if sign != 1:
        raise TangleError("negative crossings are not available as path bimodules")
    lift = {k: Fraction(x) for k, x in (lift or sl2_lift(w)).items()}
    end = braid_lift(lift, i)
    return WallCrossing(sl2_strands(w, v, lift), lift, end)


def rotate_bimodule(sign: int, w: int = 2, v: int = 1,
                    lift: Mapping | None = None) -> WallCrossing:
    lift = {k: Fraction(x) for k, x in (lift or sl2_lift(w)).items()}
    return WallCrossing(sl2_strands(w, v, lift), lift, rotate_lift(lift, sign))


def _arc_count(alg: KLRW, chamber: str, k: int) -> int:
    """Black strands of the chamber representative inside the arc closed by cup/cap k."""
    keys = red_order(alg.lift)
    w = len(keys)
    lo = alg.lift[keys[k]]
    hi = alg.lift[keys[k + 1]] if k + 1 < w else alg.lift[keys[0]] + 1
    return sum(1 for x in alg.state(chamber).point if lo < (x - lo) % 1 + lo < hi)


@dataclass
class CupData:
    alg: KLRW
    trunc: TruncatedAlgebra
    quotient: Quotient
    pinch: list
    outside: list
    k: int

    def dims(self, chamber: str) -> list[int]:
        """Graded dims of B_cup e for the idempotent of ``chamber`` (pinched rows only)."""
        T = self.trunc
        return [sum(self.quotient.dim(chamber, p, d) for p in self.pinch) for d in range(T.N + 1)]

    def module_dims(self, chamber: str) -> list[int]:
        """Graded dims of e_chamber R^(z) e_pinch, the module a cup produces."""
        return [sum(self.quotient.dim(p, chamber, d) for p in self.pinch)
                for d in range(self.trunc.N + 1)]

    def annihilated(self) -> bool:
        return all(self.quotient.dim(p, z, d) == 0 for z in self.outside for p in self.pinch
                   for d in range(self.trunc.N + 1))

    def morita_dims(self) -> list[int]:
        return [sum(self.quotient.dim(a, b, d) for a in self.pinch for b in self.pinch)
                for d in range(self.trunc.N + 1)]


_CONTEXTS: dict = {}


def _lift_key(lift: Mapping) -> tuple:
    return tuple(sorted((str(k), Fraction(v)) for k, v in lift.items()))


def cup_bimodule(k: int, truncation: int = 8, lift: Mapping | None = None) -> CupData:
    """B_cup from the empty configuration to two reds with one black (A1).

    Position k is the arc from the k-th red (in order of lifts) to the next one.
    """
    if k not in (0, 1):
        raise TangleError("cup position must be 0 or 1 for two red strands")
    lift = {kk: Fraction(x) for kk, x in (lift or sl2_lift(2)).items()}
    key = (k, truncation, _lift_key(lift))
    if key in _CONTEXTS:
        return _CONTEXTS[key]
    base = ("trunc", truncation, _lift_key(lift))
    if base not in _CONTEXTS:
        _CONTEXTS[base] = TruncatedAlgebra(sl2_algebra(2, 1, lift), truncation)
    T = _CONTEXTS[base]
    alg = T.alg
    pinch = [c for c in T.ids if _arc_count(alg, c, k) == 1]
    outside = [c for c in T.ids if c not in pinch]
    Q = Quotient(T, outside)
    data = CupData(alg, T, Q, pinch, outside, k)
    _CONTEXTS[key] = data
    return data


def cup_resolution(cup: CupData, max_length: int = 16) -> Resolution:
    key = ("res", id(cup), max_length)
    if key not in _CONTEXTS:
        F0, K0 = cup.quotient.left_module(cup.pinch)
        _CONTEXTS[key] = minimal_resolution(cup.trunc, F0, K0, max_length)
    return _CONTEXTS[key]


def cap_functor(k: int, cup: CupData | None, max_length: int = 16,
                truncation: int = 8) -> GradedVectorSpace:
    """Cap at position k applied to the module produced by ``cup`` (None = zero module)."""
    if cup is None:
        return GradedVectorSpace({})
    target = cup_bimodule(k, truncation, cup.alg.lift)
    if target.trunc.N != cup.trunc.N:
        raise TangleError("cup and cap truncations differ")
    T = cup.trunc
    res = cup_resolution(cup, max_length)
    cap_q = target.quotient if target.trunc is T else Quotient(T, target.outside)
    cx = tor_complex(cap_q, target.pinch, res)
    cx.check()
    m = 1
    dims = {}
    for (i, D), d in cx.homology().items():
        dims[(D - i, m - D)] = d
    return GradedVectorSpace(dims)


def cup_map(cup: CupData, f: Mapping[int, tuple]) -> dict:
    """The cup functor on a graded linear map of R^empty-modules (vector spaces).

    ``f[b] = (rows, cols, entries)`` is the map in degree b, entries a list of
    rows.  The result sends (chamber, degree) to (rows, cols, entries) of
    id_N (x) f on (N (x) V)_degree.
    """
    out = {}
    for x in cup.trunc.ids:
        n = cup.module_dims(x)
        for D in range(cup.trunc.N + 1):
            blocks = [(n[a], f[D - a]) for a in range(D + 1) if n[a] and D - a in f]
            R = sum(c * h for c, (h, _, _) in blocks)
            C = sum(c * w for c, (_, w, _) in blocks)
            mat = [[0] * C for _ in range(R)]
            r0 = c0 = 0
            for c, (h, w, m) in blocks:
                for t in range(c):
                    for i in range(h):
                        for j in range(w):
                            mat[r0 + t * h + i][c0 + t * w + j] = m[i][j]
                r0, c0 = r0 + c * h, c0 + c * w
            out[(x, D)] = (R, C, mat)
    return out


def ext_dims(cup: CupData, target: CupData, max_length: int = 16) -> dict:
    """dim Ext^i(R^(z) e_pinch of cup, module of target) at (i, D), D the degree of maps.

    Computed from the Hom complex of the minimal resolution of cup's module,
    independently of the quotient bimodule used by cap.
    """
    T = cup.trunc
    if target.trunc is not T:
        raise TangleError("modules live over different truncated algebras")
    Q, pinch = target.quotient, target.pinch
    res = cup_resolution(cup, max_length)

    def xbasis(c: str, e: int) -> list:
        # quotient basis of e_c X_e, X = R^(z) e_pinch of target
        if e < 0 or e > T.N:
            return []
        out = []
        for p in pinch:
            full = [{k: 1} for k in T.basis(p, c, e)]
            out += [(p, next(iter(v))) for v in complement(full, Q.ideal[(p, c, e)])]
        return out

    spaces = {}
    for i, F in enumerate(res.terms):
        spaces[i] = {D: [(j, p, k) for j, (c, s) in enumerate(F.gens) for p, k in xbasis(c, s + D)]
                     for D in range(-T.N, T.N + 1)}
    rank: dict = {}
    for i in range(len(res.terms) - 1):
        F0, F1, images = res.terms[i], res.terms[i + 1], res.maps[i]
        for D in range(-T.N, T.N + 1):
            sp = Span()
            for (l, p, k) in spaces[i][D]:
                cl, sl = F0.gens[l]
                col: dict = {}
                for j, (cj, sj) in enumerate(F1.gens):
                    for (l2, k2), coef in images[j].items():
                        if l2 != l:
                            continue
                        e = sj + D
                        if e > T.N:
                            continue
                        img = T.mult(cl, cj, k2, p, k)
                        r = Q.ideal[(p, cj, e)].reduce(img)
                        for kk, x in _express(Q, p, cj, e, r).items():
                            col[(j, p, kk)] = col.get((j, p, kk), 0) + coef * x
                sp.add({kk: v for kk, v in col.items() if v})
            rank[(i, D)] = sp.dim
    out = {}
    for i, per in spaces.items():
        for D, labels in per.items():
            d = len(labels) - rank.get((i, D), 0) - rank.get((i - 1, D), 0)
            if d:
                out[(i, D)] = d
    return out


# ---------------------------------------------------------------- bimodules on cup modules

def bimodule_tor(B: WallCrossing, cup: CupData, max_length: int = 16) -> dict:
    """dim Tor_i(B, R^(z) e_pinch) at (i, chamber of B's target, internal degree)."""
    T = cup.trunc
    if B.alg0 is not cup.alg:
        raise TangleError("bimodule and cup module live over different algebras")
    lows = [d for a in T.ids for c in B.alg1.chambers for _, d in B.basis(a, c.id, T.N)]
    if min(lows, default=0) < 0:
        raise TangleError("bimodule has negative degrees; truncation is not reliable")
    res = cup_resolution(cup, max_length)
    xs = [c.id for c in B.alg1.chambers]
    A = B.alg0
    elems: dict = {}

    def bkeys(c: str, x: str, e: int) -> list:
        out = []
        for g, dg in B.basis(c, x, e):
            for mono in A.monomials(e - dg):
                (exp,) = mono.terms
                out.append((g, exp))
                elems[(c, x, (g, exp))] = B.d_element(g, c, x).lmul(mono) \
                    if e > dg else B.d_element(g, c, x)
        return out

    spaces: dict = {}
    for i, F in enumerate(res.terms):
        spaces[i] = {D: [(j, x, key) for j, (c, s) in enumerate(F.gens) for x in xs
                         for key in (bkeys(c, x, D - s) if D >= s else [])]
                     for D in range(T.N + 1)}
    diff: dict = {}
    for i in range(1, len(res.terms)):
        F1, F0, images = res.terms[i], res.terms[i - 1], res.maps[i - 1]
        diff[i] = {}
        for D in range(T.N + 1):
            cols = {}
            for (j, x, key) in spaces[i][D]:
                cj = F1.gens[j][0]
                b = elems[(cj, x, key)]
                img: dict = {}
                for (l, k2), coef in images[j].items():
                    cl = F0.gens[l][0]
                    r = T.elems[(cl, cj, k2)]
                    prod = b * BimoduleElement(r.skew, r.source, r.target, r.degree, {})
                    if prod.is_zero():
                        continue
                    for g, pg in B.normal_form(prod).items():
                        for m, y in pg.terms.items():
                            lab = (l, x, (g, m))
                            img[lab] = img.get(lab, 0) + coef * Fraction(y)
                cols[(j, x, key)] = {k: v for k, v in img.items() if v}
            diff[i][D] = cols
    cx = ChainComplex(spaces, diff)
    cx.check()
    out: dict = {}
    for i, per in spaces.items():
        for D in per:
            for x in xs:
                sub = {lab for lab in per[D] if lab[1] == x}
                rk_out = _restricted_rank(diff.get(i, {}).get(D, {}), sub)
                rk_in = _restricted_rank(diff.get(i + 1, {}).get(D, {}),
                                         {lab for lab in spaces.get(i + 1, {}).get(D, [])
                                          if lab[1] == x})
                dim = len(sub) - rk_out - rk_in
                if dim:
                    out[(i, x, D)] = dim
    return out


def _restricted_rank(cols: Mapping, labels: set) -> int:
    s = Span()
    for lab, v in cols.items():
        if lab in labels:
            s.add(v)
    return s.dim


def match_cup(tor: Mapping, target: CupData, reliable: int) -> tuple[int, int]:
    """(homological index, internal shift) identifying tor with a shifted cup module.

    Tor must sit in a single index and agree with target's module dims shifted
    by s in every chamber and every degree <= reliable.
    """
    idx = {i for i, _, _ in tor}
    if len(idx) != 1:
        raise TangleError(f"tensor product is spread over indices {sorted(idx)}")
    (i,) = idx
    for s in range(-reliable, reliable + 1):
        ok = True
        for x in target.trunc.ids:
            want = target.module_dims(x)
            for D in range(max(0, s), reliable + 1):
                w = want[D - s] if 0 <= D - s < len(want) else 0
                if tor.get((i, x, D), 0) != w:
                    ok = False
                    break
            if not ok:
                break
        if ok and any(tor.get((i, x, D), 0) for x in target.trunc.ids
                      for D in range(reliable + 1)):
            return i, s
    raise TangleError("tensor product does not match a shifted cup module")


# ---------------------------------------------------------------- words

@dataclass(frozen=True)
class Generator:
    kind: str  # cup | cap | braid | rot
    index: int = 0
    sign: int = 1


@dataclass
class TangleWord:
    """Generators in order, with the boundary data they pass through.

    For A1 (Cartan matrix (2)) the black count moves by v' = v + (w' - w) / 2.
    """
    gens: list

    def boundaries(self) -> list[tuple[tuple, int]]:
        """(red labels, black count) before the first and after each generator."""
        reds, v = 0, Fraction(0)
        out = [((), 0)]
        for gen in self.gens:
            dw = 0
            if gen.kind == "cup":
                # the index names the arc between the new reds that closes up
                if not 0 <= gen.index < reds + 2:
                    raise TangleError(f"cup position {gen.index} out of range")
                dw = 2
            elif gen.kind == "cap":
                if reds < 2 or not 0 <= gen.index < reds:
                    raise TangleError(f"cap position {gen.index} has no adjacent red pair")
                dw = -2
            elif gen.kind == "braid" and not 0 <= gen.index < reds - 1:
                raise TangleError(f"braid index {gen.index} out of range for {reds} reds")
            reds += dw
            v += Fraction(dw, 2)
            if v.denominator != 1:
                raise TangleError("black count is not integral")
            out.append((("1",) * reds, int(v)))
        return out

    def closes(self) -> bool:
        return self.boundaries()[-1] == ((), 0)


def parse_tangle(text: str) -> list[Generator]:
    out = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] in ("cup", "cap") and len(parts) == 2:
                out.append(Generator(parts[0], int(parts[1])))
            elif parts[0] == "braid" and len(parts) == 3 and parts[2] in "+-":
                out.append(Generator("braid", int(parts[1]), 1 if parts[2] == "+" else -1))
            elif parts[0] == "rot" and len(parts) == 2 and parts[1] in "+-":
                out.append(Generator("rot", 0, 1 if parts[1] == "+" else -1))
            else:
                raise ValueError
        except ValueError:
            raise TangleError(f"line {ln}: cannot parse {raw!r}") from None
    return out


def _transport(pending: CupData, lift1: Mapping, truncation: int,
               max_length: int) -> tuple[CupData, int, int]:
    """Apply the wall-crossing bimodule to lift1 to a cup module.

    The result is identified, by graded dims, with a cup module at lift1
    shifted by (index, internal degree).
    """
    alg = pending.alg
    cands = [cup_bimodule(k, truncation, lift1) for k in (0, 1)]
    B = WallCrossing(alg.sd, alg.lift, lift1, alg, cands[0].alg)
    tor = bimodule_tor(B, pending, max_length)
    hits = []
    for cand in cands:
        try:
            hits.append((cand, *match_cup(tor, cand, truncation - 2)))
        except TangleError:
            continue
    if len(hits) != 1:
        raise TangleError("generator does not send this cup to a shifted cup")
    return hits[0]


def _shift(V: GradedVectorSpace, index: int, internal: int) -> GradedVectorSpace:
    """Shift by resolution index and internal degree (h = D - i, q = m - D)."""
    return GradedVectorSpace({(h + internal - index, q - internal): d
                              for (h, q), d in V.dims.items()})


def evaluate_annular_link(word: list[Generator], truncation: int = 8,
                          max_length: int = 16) -> GradedVectorSpace:
    """Bigraded homology of a closed word, applied to the base field over R^empty.

    Rotations and positive crossings acting on a pending cup are computed as
    derived tensor products with their bimodules and matched to a shifted cup.
    """
    if isinstance(word, TangleWord):
        word = word.gens
    for labels, _ in TangleWord(list(word)).boundaries():
        if len(labels) > 2:
            raise TangleError("more than two red strands is outside the supported scope")
    acc = GradedVectorSpace({(0, 0): 1})
    reds = 0
    pending: CupData | None = None
    index = internal = 0
    for gen in word:
        if gen.kind == "cup":
            if reds:
                raise TangleError("more than two red strands is outside the supported scope")
            pending = cup_bimodule(gen.index, truncation)
            index = internal = 0
            reds = 2
        elif gen.kind == "cap":
            if reds != 2:
                raise TangleError("cap without a matching pair of red strands")
            cap = cap_functor(gen.index, pending, max_length, truncation)
            acc = acc.tensor(_shift(cap, index, internal))
            pending = None
            reds = 0
        elif gen.kind == "rot":
            if reds:
                lift1 = rotate_lift(pending.alg.lift, gen.sign)
                pending, i, s = _transport(pending, lift1, truncation, max_length)
                index, internal = index + i, internal + s
        elif gen.kind == "braid":
            if reds != 2:
                raise TangleError("braid needs two red strands")
            if gen.sign != 1:
                raise TangleError("negative crossings are not supported by the evaluator")
            lift1 = braid_lift(pending.alg.lift, gen.index)
            pending, i, s = _transport(pending, lift1, truncation, max_length)
            index, internal = index + i, internal + s
        else:
            raise TangleError(f"unknown generator {gen.kind!r}")
    if reds:
        raise TangleError("word does not close")
    return acc
