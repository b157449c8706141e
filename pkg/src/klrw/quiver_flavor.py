"""Quivers, Crawley-Boevey framings, flavor groups and circuit genericity."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

INFTY = "∞"


class FlavorError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise FlavorError("duplicate vertex names")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise FlavorError("duplicate edge ids")
        for e in self.edges:
            for end in (e.tail, e.head):
                if end not in self.vertices:
                    raise FlavorError(f"edge {e.id!r} references unknown vertex {end!r}")

    def order(self, vertex: str) -> int:
        return self.vertices.index(vertex)

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)


def framing_key(vertex: str, k: int) -> tuple[str, int]:
    return (vertex, k)


@dataclass(frozen=True)
class CrawleyBoeveyGraph:
    base: Quiver
    w: tuple[tuple[str, int], ...]

    @property
    def framing_edges(self) -> tuple[tuple[str, int], ...]:
        return tuple((i, k) for i, wi in self.w for k in range(1, wi + 1))

    def w_of(self, vertex: str) -> int:
        return dict(self.w)[vertex]

    def edge_keys(self) -> tuple:
        return tuple(e.id for e in self.base.edges) + self.framing_edges


def build_cb_graph(q: Quiver, w: Mapping[str, int]) -> CrawleyBoeveyGraph:
    missing = [i for i in q.vertices if i not in w]
    if missing:
        raise FlavorError(f"w undefined on {missing}")
    if any(w[i] < 0 for i in q.vertices):
        raise FlavorError("negative framing")
    return CrawleyBoeveyGraph(q, tuple((i, int(w[i])) for i in q.vertices))


@dataclass(frozen=True)
class FlavorGroup:
    kind: str  # "Q/Z" or "Fp"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Q/Z", "Fp"):
            raise FlavorError(f"unknown flavor group {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
                raise FlavorError(f"p={self.p} is not prime")

    @staticmethod
    def rational() -> "FlavorGroup":
        return FlavorGroup("Q/Z")

    @staticmethod
    def prime(p: int) -> "FlavorGroup":
        return FlavorGroup("Fp", p)

    def element(self, x) -> Fraction | int:
        if self.kind == "Q/Z":
            x = Fraction(x)
            return x - (x.numerator // x.denominator)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise FlavorError("F_p values must be integers")
            x = x.numerator
        return int(x) % self.p

    def unit(self, x) -> Fraction:
        """Representative in [0,1) of the circle embedding."""
        if self.kind == "Q/Z":
            return self.element(x)
        return Fraction(self.element(x), self.p)

    def add(self, a, b):
        return self.element(Fraction(a) + Fraction(b)) if self.kind == "Q/Z" else (a + b) % self.p

    def is_zero(self, x) -> bool:
        return self.element(x) == 0


def cyclic_compare(group: FlavorGroup, a, b, c) -> bool:
    ua, ub, uc = group.unit(a), group.unit(b), group.unit(c)
    if ua == ub or ub == uc or ua == uc:
        return False
    return (ua < ub < uc) or (ub < uc < ua) or (uc < ua < ub)


@dataclass(frozen=True)
class Circuit:
    """Signed edge path between two framing edges, or a cycle when ``ends`` is None."""

    ends: tuple[tuple[str, int], tuple[str, int]] | None
    path: tuple[tuple[str, int], ...]  # (edge id, ±1)

    def coefficients(self) -> dict:
        coeff: dict = {}
        if self.ends is not None:
            start, end = self.ends
            coeff[start] = coeff.get(start, 0) - 1
            coeff[end] = coeff.get(end, 0) + 1
        for eid, sign in self.path:
            coeff[eid] = coeff.get(eid, 0) + sign
        return {k: v for k, v in coeff.items() if v}

    def evaluate(self, values: Mapping) -> Fraction:
        return sum((Fraction(values[k]) * c for k, c in self.coefficients().items()), Fraction(0))

    def label(self) -> str:
        terms = []
        for k, c in sorted(self.coefficients().items(), key=lambda kv: str(kv[0])):
            name = f"b[{k[0]}:{k[1]}]" if isinstance(k, tuple) else f"b[{k}]"
            terms.append(("+" if c > 0 else "-") + (f"{abs(c)}" if abs(c) != 1 else "") + name)
        s = "".join(terms) or "0"
        return s[1:] if s.startswith("+") else s


def _simple_paths(q: Quiver, start: str, goal: str):
    """Simple paths in the underlying undirected multigraph, as (edge id, sign) lists."""
    out = []

    def dfs(v, seen, acc):
        if v == goal:
            out.append(tuple(acc))
            return
        for e in q.edges:
            if e.tail == e.head:
                continue
            for a, b, s in ((e.tail, e.head, 1), (e.head, e.tail, -1)):
                if a == v and b not in seen:
                    dfs(b, seen | {b}, acc + [(e.id, s)])

    if start != goal:
        dfs(start, {start}, [])
    return out


def _simple_cycles(q: Quiver):
    order = {v: n for n, v in enumerate(q.vertices)}
    idx = {e.id: n for n, e in enumerate(q.edges)}
    found = []
    for e in q.edges:
        if e.tail == e.head:
            found.append(((e.id, 1),))
    for s in q.vertices:
        def dfs(v, seen, acc):
            for e in q.edges:
                if e.tail == e.head:
                    continue
                for a, b, sg in ((e.tail, e.head, 1), (e.head, e.tail, -1)):
                    if a != v or (acc and acc[-1][0] == e.id):
                        continue
                    if b == s and len(acc) >= 1:
                        cyc = acc + [(e.id, sg)]
                        if idx[cyc[0][0]] < idx[cyc[-1][0]]:
                            found.append(tuple(cyc))
                    elif b not in seen and order[b] > order[s]:
                        dfs(b, seen | {b}, acc + [(e.id, sg)])
        dfs(s, {s}, [])
    return found


def enumerate_circuits(cb: CrawleyBoeveyGraph) -> list[Circuit]:
    q = cb.base
    fr = list(cb.framing_edges)
    out: list[Circuit] = []
    for a in range(len(fr)):
        for b in range(a + 1, len(fr)):
            i, j = fr[a][0], fr[b][0]
            if i == j:
                out.append(Circuit((fr[a], fr[b]), ()))
            else:
                for path in _simple_paths(q, i, j):
                    out.append(Circuit((fr[a], fr[b]), path))
    for cyc in _simple_cycles(q):
        out.append(Circuit(None, cyc))
    return out


def circuit_set(circuits: Iterable[Circuit]) -> frozenset:
    """Orientation-free identification of circuits, for order-independence checks."""
    keys = set()
    for c in circuits:
        co = tuple(sorted((str(k), v) for k, v in c.coefficients().items()))
        neg = tuple(sorted((str(k), -v) for k, v in c.coefficients().items()))
        keys.add(min(co, neg))
    return frozenset(keys)


@dataclass(frozen=True)
class Flavoring:
    cb: CrawleyBoeveyGraph
    group: FlavorGroup
    beta: tuple  # sorted (key, value) pairs

    @staticmethod
    def make(cb: CrawleyBoeveyGraph, group: FlavorGroup, beta: Mapping) -> "Flavoring":
        keys = cb.edge_keys()
        missing = [k for k in keys if k not in beta]
        if missing:
            raise FlavorError(f"flavoring missing values for {missing}")
        extra = [k for k in beta if k not in keys]
        if extra:
            raise FlavorError(f"flavoring names unknown edges {extra}")
        return Flavoring(cb, group, tuple((k, group.element(beta[k])) for k in keys))

    def __getitem__(self, key):
        for k, v in self.beta:
            if k == key:
                return v
        raise KeyError(key)

    def as_dict(self) -> dict:
        return dict(self.beta)

    def default_lift(self) -> dict:
        return {k: self.group.unit(v) for k, v in self.beta}

    def with_beta(self, beta: Mapping) -> "Flavoring":
        return Flavoring.make(self.cb, self.group, beta)


@dataclass
class GenericityReport:
    generic: bool
    values: list = field(default_factory=list)  # (circuit, value)

    @property
    def violated(self) -> list[Circuit]:
        return [c for c, val in self.values if val == 0]


def is_generic(f: Flavoring) -> GenericityReport:
    values = []
    d = f.as_dict()
    for c in enumerate_circuits(f.cb):
        if f.group.kind == "Q/Z":
            val = f.group.element(c.evaluate(d))
        else:
            val = int(sum(d[k] * co for k, co in c.coefficients().items())) % f.group.p
        values.append((c, val))
    return GenericityReport(all(v != 0 for _, v in values), values)


def coboundary_shift(f: Flavoring, eta: Mapping[str, object]) -> Flavoring:
    """beta'_e = beta_e - eta_h(e) + eta_t(e), beta'_{i,k} = beta_{i,k} + eta_i."""
    new = {}
    for k, v in f.beta:
        if isinstance(k, tuple):
            new[k] = Fraction(v) + Fraction(eta[k[0]])
        else:
            e = f.cb.base.edge(k)
            new[k] = Fraction(v) - Fraction(eta[e.head]) + Fraction(eta[e.tail])
    return f.with_beta(new)
