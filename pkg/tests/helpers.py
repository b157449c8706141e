"""Builders shared by the test modules."""
from __future__ import annotations

from fractions import Fraction as F
from itertools import combinations

from klrw.chambers import StrandData
from klrw.quiver_flavor import Edge, FlavorGroup, Flavoring, Quiver, build_cb_graph, INFTY


def a1(w: int, v: int, reds=None, group=None) -> StrandData:
    q = Quiver(("1",))
    cb = build_cb_graph(q, {"1": w})
    group = group or FlavorGroup.rational()
    if reds is None:
        reds = [F(2 * m - 1, 2 * w) for m in range(1, w + 1)]
    f = Flavoring.make(cb, group, {("1", m + 1): r for m, r in enumerate(reds)})
    return StrandData.make(f, {"1": v})


def a2(beta=(F(1, 4), F(1, 2), F(1, 3)), v=(1, 1)) -> StrandData:
    """1 -> 2 with one red at each vertex; beta = (b_e, b_{1,1}, b_{2,1})."""
    q = Quiver(("1", "2"), (Edge("e", "1", "2"),))
    cb = build_cb_graph(q, {"1": 1, "2": 1})
    f = Flavoring.make(cb, FlavorGroup.rational(),
                       {"e": beta[0], ("1", 1): beta[1], ("2", 1): beta[2]})
    return StrandData.make(f, {"1": v[0], "2": v[1]})


def cb_cycles(cb):
    """Brute-force oracle: every edge subset of the CB multigraph forming one simple
    cycle, returned as the orientation-free coefficient sets used by circuit_set."""
    edges = [(e.id, e.tail, e.head) for e in cb.base.edges if e.tail != e.head]
    edges += [(k, k[0], INFTY) for k in cb.framing_edges]
    loops = [e.id for e in cb.base.edges if e.tail == e.head]
    out = set()
    for lid in loops:
        out.add(min(((lid, 1),), ((lid, -1),)))
    for r in range(2, len(edges) + 1):
        for sub in combinations(range(len(edges)), r):
            deg = {}
            for j in sub:
                _, a, b = edges[j]
                deg[a] = deg.get(a, 0) + 1
                deg[b] = deg.get(b, 0) + 1
            if any(d != 2 for d in deg.values()):
                continue
            # walk the cycle to orient it and check connectivity
            rest = list(sub)
            j0 = rest.pop(0)
            eid, a, b = edges[j0]
            signed = {eid: 1}
            cur = b
            while rest:
                nxt = next((j for j in rest if cur in edges[j][1:]), None)
                if nxt is None:
                    break
                rest.remove(nxt)
                eid, t, h = edges[nxt]
                if t == cur:
                    signed[eid], cur = 1, h
                else:
                    signed[eid], cur = -1, t
            if rest:
                continue
            coeff = _as_circuit_coeffs(signed)
            co = tuple(sorted((str(k), v) for k, v in coeff.items()))
            neg = tuple(sorted((str(k), -v) for k, v in coeff.items()))
            out.add(min(co, neg))
    return frozenset(out)


def _as_circuit_coeffs(signed):
    # a framing edge (i,k) oriented i -> inf enters the circuit functional with the
    # sign of its traversal; circuits are compared up to global sign
    return dict(signed)


# ---------------------------------------------------------------- chamber oracles

def interacting_walls(sd):
    """Wall functions (coefficient vector, offset) derived straight from the quiver:
    strand a meets each red of its label and each ghost x_c + beta_e with
    head(e) = label(c), tail(e) = label(a)."""
    labels = sd.labels
    f = sd.flavoring
    out = []
    for a, la in enumerate(labels):
        for key in f.cb.framing_edges:
            if key[0] == la:
                out.append(((a, None), key))
        for e in sd.quiver.edges:
            for c, lc in enumerate(labels):
                if c != a and e.tail == la and e.head == lc:
                    out.append(((a, c), e.id))
    return out


def wall_value(w, x, lift):
    (a, c), key = w
    v = x[a] - F(lift[key])
    return v if c is None else v - x[c]


def flood_chambers(sd, lift, N):
    """Grid flood fill on the torus, components identified under label symmetry.

    Returns a list of (cell count, sample point) per chamber.
    """
    import math
    from itertools import permutations, product
    n = sd.n
    walls = interacting_walls(sd)
    pts = list(product(range(N), repeat=n))
    index = {p: j for j, p in enumerate(pts)}
    parent = list(range(len(pts)))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    def coords(p):
        return [F(2 * i + 1, 2 * N) for i in p]

    for p in pts:
        x = coords(p)
        for k in range(n):
            q = list(p)
            q[k] = (p[k] + 1) % N
            y = list(x)
            y[k] = x[k] + F(1, N)  # continue across the seam without wrapping
            if all(math.floor(wall_value(w, x, lift)) == math.floor(wall_value(w, y, lift)) for w in walls):
                ru, rv = find(index[p]), find(index[tuple(q)])
                if ru != rv:
                    parent[ru] = rv
    comps = {}
    for p in pts:
        comps.setdefault(find(index[p]), []).append(p)
    # label-preserving coordinate permutations
    labels = sd.labels
    sigmas = [s for s in permutations(range(n)) if all(labels[s[a]] == labels[a] for a in range(n))]
    root_of = {p: find(index[p]) for p in pts}
    seen, out = set(), []
    for r, members in comps.items():
        if r in seen:
            continue
        orbit = {root_of[tuple(m[s[a]] for a in range(n))] for s in sigmas for m in members[:1]}
        seen |= orbit
        size = sum(len(comps[o]) for o in orbit)
        out.append((size, coords(members[0])))
    return out


def brute_equivalent(sd, x, y, lift, box=2):
    """Points are equivalent iff some label-preserving relabelling and integer
    translation of y reproduces every wall floor of x."""
    import math
    from itertools import permutations, product
    n = sd.n
    walls = interacting_walls(sd)
    fx = [math.floor(wall_value(w, x, lift)) for w in walls]
    labels = sd.labels
    for s in permutations(range(n)):
        if any(labels[s[a]] != labels[a] for a in range(n)):
            continue
        for shift in product(range(-box, box + 1), repeat=n):
            z = [F(y[s[a]]) + shift[a] for a in range(n)]
            if [math.floor(wall_value(w, z, lift)) for w in walls] == fx:
                return True
    return False


def affine_dim_oracle(A, b):
    """Affine dimension of {x : A x <= b} in 2 or fewer variables by brute-force
    vertex enumeration (bounded, nonempty polytopes only)."""
    from itertools import combinations
    n = len(A[0])
    verts = set()
    for rows in combinations(range(len(A)), n):
        M = [list(A[r]) for r in rows]
        rhs = [b[r] for r in rows]
        sol = _solve_small(M, rhs)
        if sol is None:
            continue
        if all(sum(A[r][k] * sol[k] for k in range(n)) <= b[r] for r in range(len(A))):
            verts.add(tuple(sol))
    verts = list(verts)
    if not verts:
        return -1
    diffs = [[v[k] - verts[0][k] for k in range(n)] for v in verts[1:]]
    return _rank(diffs)


def _solve_small(M, rhs):
    n = len(M)
    M = [row[:] + [r] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                c = F(M[r][col]) / M[col][col]
                M[r] = [a - c * b for a, b in zip(M[r], M[col])]
    return [F(M[k][n]) / M[k][k] for k in range(n)]


def _rank(rows):
    rows = [[F(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncol = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncol:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                c = rows[r][col] / rows[rank][col]
                rows[r] = [a - c * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------- path algebra oracle

class PathAlgebra:
    """Graded path algebra of a quiver modulo a two-sided ideal generated by
    homogeneous relations; arrows have degree 1.  Dimensions come from exact
    ranks of the ideal's spanning set in each (source, target, length)."""

    def __init__(self, nodes, arrows, relations):
        self.nodes = list(nodes)
        self.arrows = dict(arrows)  # name -> (tail, head)
        self.relations = relations  # list of {path tuple: coefficient}

    def paths(self, length, src=None, dst=None):
        out = [((), v, v) for v in self.nodes] if length == 0 else []
        if length > 0:
            stack = [((a,), t, h) for a, (t, h) in self.arrows.items()]
            for _ in range(length - 1):
                stack = [(p + (a,), s, h2) for p, s, h in stack
                         for a, (t2, h2) in self.arrows.items() if t2 == h]
            out = stack
        return [(p, s, t) for p, s, t in out if (src is None or s == src) and (dst is None or t == dst)]

    def dim(self, src, dst, length):
        basis = [p for p, _, _ in self.paths(length, src, dst)]
        if not basis:
            return 0
        index = {p: j for j, p in enumerate(basis)}
        gens = []
        for rel in self.relations:
            rlen = len(next(iter(rel)))
            rs, rt = self.arrows[next(iter(rel))[0]][0], self.arrows[next(iter(rel))[-1]][1]
            for a in range(0, length - rlen + 1):
                b = length - rlen - a
                for p, ps, pt in self.paths(a, src, rs):
                    for q, qs, qt in self.paths(b, rt, dst):
                        vec = [0] * len(basis)
                        for path, c in rel.items():
                            vec[index[p + path + q]] += c
                        gens.append(vec)
        return len(basis) - (_rank(gens) if gens else 0)


def cyclic_quiver_algebra(ell):
    """Nodes 0..ell-1 on a cycle with r_i: i -> i+1, l_i: i+1 -> i, and at each node the
    two length-two loops equal."""
    nodes = list(range(ell))
    arrows = {}
    for i in nodes:
        arrows[f"r{i}"] = (i, (i + 1) % ell)
        arrows[f"l{i}"] = ((i + 1) % ell, i)
    rels = []
    for i in nodes:
        j = (i - 1) % ell
        rels.append({(f"r{i}", f"l{i}"): 1, (f"l{j}", f"r{j}"): -1})
    return PathAlgebra(nodes, arrows, rels)


def tp1_algebra():
    """T*P^1: x, y: out -> in, xs, ys: in -> out with x xs = y ys and xs x = ys y
    (composition written left to right along paths)."""
    arrows = {"x": ("out", "in"), "y": ("out", "in"), "xs": ("in", "out"), "ys": ("in", "out")}
    rels = [{("xs", "x"): 1, ("ys", "y"): -1}, {("x", "xs"): 1, ("y", "ys"): -1}]
    return PathAlgebra(["out", "in"], arrows, rels)


def arc_index(sd, chamber):
    """Index of the arc between consecutive reds that holds the single black strand."""
    x = chamber.representative[0]
    reds = sorted(sd.flavoring.default_lift()[k] for k in sd.flavoring.cb.framing_edges)
    return sum(1 for r in reds if r < x) % len(reds)
