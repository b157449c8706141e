"""Command-line front end: ``klrw <group> <command> ...``.

Spec documents are JSON objects::

    {"vertices": ["1", "2"],
     "edges": [{"id": "e", "tail": "1", "head": "2"}],
     "w": {"1": 1, "2": 1},
     "v": {"1": 1, "2": 1},
     "flavor": {"group": "Q/Z", "beta": {"e": "1/4", "1:1": "1/2", "2:1": "1/3"}},
     "lift": {"e": "1/4", "1:1": "1/2", "2:1": "-2/3"}}

Framing edges are written ``vertex:k``.  ``lift`` is optional.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .algebra import KLRW, AlgebraError, DiagramWord, evaluate, lift_word
from .bimodules import BimoduleError, morita_check
from .chambers import (ChamberError, StrandData, Wall, central_charge, enumerate_chambers,
                       locking_codimension, normalized_volume, torsion_counts)
from .polyrep import PolyError
from .quiver_flavor import (Edge, FlavorError, FlavorGroup, Flavoring, Quiver, build_cb_graph,
                            enumerate_circuits, is_generic)
from .relations import verify_relations
from .tangle import TangleError, evaluate_annular_link, parse_tangle

SCHEMA_VERSION = 1
DOMAIN_ERRORS = (FlavorError, ChamberError, AlgebraError, BimoduleError, TangleError,
                 PolyError, ArithmeticError)


class SpecError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)


# ---------------------------------------------------------------- spec documents

def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def _locate(text: str, token: str) -> tuple[int | None, int | None]:
    pos = text.find(f'"{token}"')
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _key_from_str(s: str):
    if ":" in s:
        v, k = s.rsplit(":", 1)
        return (v, int(k))
    return s


def _key_to_str(k) -> str:
    return f"{k[0]}:{k[1]}" if isinstance(k, tuple) else k


def _frac(v) -> Fraction:
    return Fraction(v) if not isinstance(v, str) else Fraction(v.strip())


@dataclass
class SpecDocument:
    quiver: Quiver
    w: dict
    v: dict
    flavoring: Flavoring
    lift: dict | None = None
    raw: dict = field(default_factory=dict, repr=False)

    def strand_data(self) -> StrandData:
        return StrandData.make(self.flavoring, self.v)

    def serialize(self) -> str:
        g = self.flavoring.group
        flavor = {"group": g.kind, "beta": {_key_to_str(k): _fmt(val) for k, val in self.flavoring.beta}}
        if g.kind == "Fp":
            flavor["p"] = g.p
        doc = {"vertices": list(self.quiver.vertices),
               "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.quiver.edges],
               "w": dict(self.w), "v": dict(self.v), "flavor": flavor}
        if self.lift is not None:
            doc["lift"] = {_key_to_str(k): _fmt(val) for k, val in self.lift.items()}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def parse_spec(text: str) -> SpecDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise SpecError("spec must be a JSON object", 1, 1)
    for key in ("vertices", "flavor"):
        if key not in doc:
            raise SpecError(f"missing field {key!r}", 1, 1)
    verts = [str(x) for x in doc["vertices"]]
    edges = []
    for e in doc.get("edges", []):
        for end in ("tail", "head"):
            if e.get(end) not in verts:
                raise SpecError(f"edge {e.get('id')!r} references undeclared vertex {e.get(end)!r}",
                                *_locate(text, str(e.get(end))))
        edges.append(Edge(str(e["id"]), str(e["tail"]), str(e["head"])))
    for fieldname in ("w", "v"):
        for name in doc.get(fieldname, {}):
            if name not in verts:
                raise SpecError(f"{fieldname} references undeclared vertex {name!r}", *_locate(text, name))
    try:
        q = Quiver(tuple(verts), tuple(edges))
        w = {i: int(doc.get("w", {}).get(i, 0)) for i in verts}
        v = {i: int(doc.get("v", {}).get(i, 0)) for i in verts}
        fl = doc["flavor"]
        kind = fl.get("group", "Q/Z")
        group = FlavorGroup.rational() if kind == "Q/Z" else FlavorGroup.prime(int(fl["p"]))
        cb = build_cb_graph(q, w)
        beta = {}
        for k, val in fl.get("beta", {}).items():
            key = _key_from_str(k)
            if isinstance(key, tuple) and key[0] not in verts:
                raise SpecError(f"flavor references undeclared vertex {key[0]!r}", *_locate(text, k))
            beta[key] = _frac(val) if kind == "Q/Z" else int(val)
        f = Flavoring.make(cb, group, beta)
        lift = None
        if "lift" in doc:
            lift = {_key_from_str(k): _frac(val) for k, val in doc["lift"].items()}
    except SpecError:
        raise
    except (FlavorError, KeyError, ValueError, ZeroDivisionError) as exc:
        raise SpecError(str(exc)) from None
    return SpecDocument(q, w, v, f, lift, doc)


def read_lift(path: str) -> dict:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(exc.msg, exc.lineno, exc.colno) from None
    return {_key_from_str(k): _frac(v) for k, v in doc.items()}


# ---------------------------------------------------------------- cache

class Cache:
    def __init__(self, root: str | None, enabled: bool = True):
        self.root = Path(root or os.environ.get("KLRW_CACHE", ".klrw-cache"))
        self.enabled = enabled
        self._lock = threading.Lock()

    def key(self, *parts) -> str:
        blob = json.dumps([SCHEMA_VERSION, *parts], sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()

    def get(self, key: str):
        if not self.enabled:
            return None
        p = self.root / f"{key}.json"
        if not p.exists():
            return None
        try:
            data = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError):
            return None
        if data.get("schema") != SCHEMA_VERSION or data.get("key") != key:
            return None
        return data["value"]

    def put(self, key: str, value) -> None:
        if not self.enabled:
            return
        with self._lock:
            self.root.mkdir(parents=True, exist_ok=True)
            tmp = self.root / f"{key}.tmp{os.getpid()}"
            tmp.write_text(json.dumps({"schema": SCHEMA_VERSION, "key": key, "value": value}))
            os.replace(tmp, self.root / f"{key}.json")

    def memo(self, key: str, compute: Callable):
        hit = self.get(key)
        if hit is not None:
            return hit
        value = compute()
        self.put(key, value)
        return value


# ---------------------------------------------------------------- output

def emit(rows: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if not rows:
        return
    cols = list(rows[0])
    cells = [[_fmt(r.get(c, "")) for c in cols] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(cols)
        wr.writerows(cells)
        out.write(buf.getvalue())
    elif fmt == "json-lines":
        for r in rows:
            out.write(json.dumps({c: _fmt(r.get(c, "")) if isinstance(r.get(c), Fraction) else r.get(c)
                                  for c in cols}) + "\n")
    else:
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        out.write("  ".join(c.ljust(wd) for c, wd in zip(cols, widths)).rstrip() + "\n")
        for row in cells:
            out.write("  ".join(x.ljust(wd) for x, wd in zip(row, widths)).rstrip() + "\n")


def progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def threads() -> int:
    try:
        return max(1, int(os.environ.get("KLRW_THREADS", "1")))
    except ValueError:
        return 1


def _load(path: str) -> SpecDocument:
    return parse_spec(Path(path).read_text())


def _algebra(doc: SpecDocument, quantum: bool = False) -> KLRW:
    return KLRW(doc.strand_data(), doc.lift, quantum=quantum)


# ---------------------------------------------------------------- commands

def cmd_quiver_validate(a, cache) -> int:
    doc = _load(a.spec)
    rep = is_generic(doc.flavoring)
    rows = [{"circuit": c.label(), "value": val, "status": "ok" if val != 0 else "VIOLATED"}
            for c, val in rep.values]
    if rows:
        emit(rows, a.format)
    print(f"generic: {'yes' if rep.generic else 'no'}")
    return 0 if rep.generic else 1


def cmd_chambers_enumerate(a, cache) -> int:
    doc = _load(a.spec)
    sd = doc.strand_data()

    def compute():
        chs = enumerate_chambers(sd, doc.lift)
        rows = []
        for c in chs:
            r = {"id": c.id, "word": c.word(sd),
                 "representative": "(" + ", ".join(_fmt(x) for x in c.representative) + ")"}
            if c.volume is not None:
                r["volume"] = _fmt(normalized_volume(c, sd, a.normalization))
            else:
                r["count"] = c.count
            rows.append(r)
        return rows

    rows = cache.memo(cache.key(doc.serialize(), "chambers.enumerate", a.normalization), compute)
    emit(rows, a.format)
    return 0


def cmd_chambers_charge(a, cache) -> int:
    doc = _load(a.spec)
    sd = doc.strand_data()
    dims = {k: int(v) for k, v in json.loads(Path(a.dims).read_text()).items()}
    chs = enumerate_chambers(sd, doc.lift)
    z = central_charge(dims, chs, sd, a.normalization)
    emit([{"charge": _fmt(z)}], a.format)
    return 0


def cmd_chambers_torsion(a, cache) -> int:
    doc = _load(a.spec)
    sd = doc.strand_data()
    chs = enumerate_chambers(sd, doc.lift)
    counts = torsion_counts(sd, a.p, doc.lift)
    n = sd.n
    rows = []
    for c in chs:
        cnt = counts.get(c.key, 0)
        r = {"id": c.id, "count": cnt, "ratio": _fmt(Fraction(cnt, a.p ** n))}
        if c.volume is not None:
            r["volume"] = _fmt(c.volume)
        rows.append(r)
    emit(rows, a.format)
    return 0


def _parse_wall(doc: SpecDocument, text: str) -> Wall:
    try:
        circ, m = text.rsplit(",", 1)
        m = int(m)
    except ValueError:
        raise SpecError(f"wall must be '<circuit>,<m>', got {text!r}") from None
    circuits = enumerate_circuits(doc.flavoring.cb)
    circ = circ.strip()
    if circ.isdigit():
        idx = int(circ)
        if idx >= len(circuits):
            raise SpecError(f"circuit index {idx} out of range ({len(circuits)} circuits)")
        return Wall(circuits[idx], m)
    for c in circuits:
        if c.label() == circ:
            return Wall(c, m)
    raise SpecError(f"unknown circuit {circ!r}; known: {', '.join(c.label() for c in circuits)}")


def cmd_chambers_wall(a, cache) -> int:
    doc = _load(a.spec)
    sd = doc.strand_data()
    wall = _parse_wall(doc, a.wall)
    rows = [{"id": c.id, "codimension": locking_codimension(sd, c, wall, doc.lift)}
            for c in enumerate_chambers(sd, doc.lift)]
    emit(rows, a.format)
    return 0


def _dims_rows(src, tgt, dims: dict) -> list[dict]:
    return [{"from": src, "to": tgt, "degree": d, "dim": n} for d, n in sorted(dims.items())]


def cmd_algebra_homdim(a, cache) -> int:
    doc = _load(a.spec)
    alg = _algebra(doc)
    ids = [c.id for c in alg.chambers]
    srcs = [a.source] if a.source else ids
    tgts = [a.target] if a.target else ids
    for s in srcs + tgts:
        if s not in alg.states:
            raise AlgebraError(f"unknown chamber {s!r}; chambers: {', '.join(ids)}")
    pairs = [(s, t) for s in srcs for t in tgts]

    def one(pair):
        s, t = pair
        key = cache.key(doc.serialize(), "algebra.homdim", s, t, a.maxdeg, a.radius, a.route)

        def compute():
            if a.route == "spanning":
                d = alg.hom_dims_spanning(s, t, a.maxdeg, a.radius, seed=a.seed, mindeg=0)
            else:
                d = alg.hom_dims(s, t, a.maxdeg, a.radius)
            return {str(k): v for k, v in d.items()}

        return {int(k): v for k, v in cache.memo(key, compute).items()}

    progress(f"homdim: {len(pairs)} chamber pair(s), maxdeg {a.maxdeg}")
    with ThreadPoolExecutor(max_workers=threads()) as ex:
        results = list(ex.map(one, pairs))
    rows = []
    for (s, t), dims in zip(pairs, results):
        rows.extend(_dims_rows(s, t, dims))
    emit(rows, a.format)
    return 0


def cmd_algebra_relcheck(a, cache) -> int:
    if a.spec:
        _load(a.spec)
    mode = "formal" if a.quantum else "zero"
    rep = verify_relations(seed=a.seed, h_mode=mode, instances=a.instances)
    rows = [{"status": "PASS" if r.ok else "FAIL", "family": r.family, "passed": r.passed,
             "failed": r.failed, "inhomogeneous": r.inhomogeneous} for r in rep.results]
    emit(rows, a.format)
    for r in rep.results:
        if not r.ok:
            print(f"first failure in {r.family}: {r.first_failure}", file=sys.stderr)
    return 0 if rep.ok else 1


def cmd_algebra_coulomb(a, cache) -> int:
    doc = _load(a.spec)
    alg = _algebra(doc)
    val = _frac(a.a)
    key = cache.key(doc.serialize(), "algebra.coulomb", str(val), a.maxdeg, a.radius)

    def compute():
        idem = alg.make_idempotent("Ea", val)
        return {str(k): v for k, v in alg.corner_dims(idem.element, a.maxdeg, a.radius).items()}

    progress(f"coulomb: a = {_fmt(val)}, maxdeg {a.maxdeg}")
    dims = {int(k): v for k, v in cache.memo(key, compute).items()}
    emit([{"degree": d, "dim": n} for d, n in sorted(dims.items()) if d >= 0], a.format)
    return 0


def cmd_algebra_reduce(a, cache) -> int:
    text = Path(a.word).read_text()
    spec_path = a.spec
    lines = []
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip()
        if body.startswith("spec "):
            spec_path = spec_path or str(Path(a.word).parent / body[5:].strip())
        else:
            lines.append(raw)
    if not spec_path:
        raise SpecError("no spec given: pass --spec or add a 'spec <file>' line to the word file")
    doc = _load(spec_path)
    alg = _algebra(doc, quantum=a.quantum)
    word = DiagramWord.parse("\n".join(lines))
    L = lift_word(alg, word)
    el = evaluate(alg, word)
    nf = alg.normal_form(el)
    print(f"bottom: {word.bottom}  top: {L.top}  degree: {el.degree}  closing: {L.closing}")
    rows = [{"weyl": f"perm={list(g[0])} shift={list(g[1])}", "coefficient": str(p)}
            for g, p in sorted(nf.items())]
    if rows:
        emit(rows, a.format)
    else:
        print("zero")
    return 0


def cmd_bimodule_morita(a, cache) -> int:
    doc = _load(a.spec)
    sd = doc.strand_data()
    l0, l1 = read_lift(a.src), read_lift(a.dst)
    progress(f"morita: maxdeg {a.maxdeg}, radius {a.radius}")
    rep = morita_check(sd, l0, l1, a.maxdeg, a.radius)
    rows = []
    for direction, hit, missed in (("forward", rep.hit, rep.missed),
                                   ("reverse", rep.reverse_hit, rep.reverse_missed)):
        for c in sorted(hit | missed):
            rows.append({"direction": direction, "idempotent": c,
                         "hit": "yes" if c in hit else "no"})
    emit(rows, a.format)
    print(f"surjective in degree 0: forward {'yes' if rep.surjective0 else 'no'}, "
          f"reverse {'yes' if rep.reverse_surjective0 else 'no'}")
    return 0


def cmd_tangle_eval(a, cache) -> int:
    word = parse_tangle(Path(a.word).read_text())
    progress(f"tangle: {len(word)} generator(s), truncation {a.truncation}")
    V = evaluate_annular_link(word, a.truncation, a.max_length)
    rows = [{"homological": h, "q": q, "dim": d} for h, q, d in V.rows()]
    if rows:
        emit(rows, a.format)
    print(f"Poincare polynomial: {V.poincare()}")
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json-lines"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--no-cache", action="store_true", help="bypass the result cache")

    p = argparse.ArgumentParser(prog="klrw", description="Cylindrical KLRW algebra toolkit.")
    p.add_argument("--version", action="version", version=f"klrw {__version__}")
    groups = p.add_subparsers(dest="group", required=True)

    def sub(group, name, fn, help_):
        sp = group.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    g = groups.add_parser("quiver", help="quiver and flavoring checks").add_subparsers(dest="cmd", required=True)
    sp = sub(g, "validate", cmd_quiver_validate, "genericity report")
    sp.add_argument("spec")

    g = groups.add_parser("chambers", help="chamber geometry").add_subparsers(dest="cmd", required=True)
    sp = sub(g, "enumerate", cmd_chambers_enumerate, "list chambers with volumes")
    sp.add_argument("spec")
    sp.add_argument("--normalization", choices=("haar", "symmetric"), default="haar")
    sp = sub(g, "charge", cmd_chambers_charge, "central charge of a dimension vector")
    sp.add_argument("spec")
    sp.add_argument("dims", help="JSON map chamber id -> dimension")
    sp.add_argument("--normalization", choices=("haar", "symmetric"), default="haar")
    sp = sub(g, "torsion", cmd_chambers_torsion, "p-torsion point counts per chamber")
    sp.add_argument("spec")
    sp.add_argument("-p", type=int, required=True)
    sp = sub(g, "wall", cmd_chambers_wall, "locking codimension per chamber at a wall")
    sp.add_argument("spec")
    sp.add_argument("--wall", required=True, help="'<circuit label or index>,<m>'")

    g = groups.add_parser("algebra", help="KLRW algebra computations").add_subparsers(dest="cmd", required=True)
    sp = sub(g, "homdim", cmd_algebra_homdim, "graded Hom dimensions")
    sp.add_argument("spec")
    sp.add_argument("--from", dest="source")
    sp.add_argument("--to", dest="target")
    sp.add_argument("--maxdeg", type=int, required=True)
    sp.add_argument("--radius", type=int, default=None)
    sp.add_argument("--route", choices=("basis", "spanning"), default="basis")
    sp = sub(g, "relcheck", cmd_algebra_relcheck, "local relation suite")
    sp.add_argument("spec", nargs="?")
    sp.add_argument("--quantum", action="store_true")
    sp.add_argument("--instances", type=int, default=100)
    sp = sub(g, "coulomb", cmd_algebra_coulomb, "graded dims of e(a) R e(a)")
    sp.add_argument("spec")
    sp.add_argument("-a", required=True)
    sp.add_argument("--maxdeg", type=int, required=True)
    sp.add_argument("--radius", type=int, default=None)
    sp = sub(g, "reduce", cmd_algebra_reduce, "evaluate a diagram word to normal form")
    sp.add_argument("word")
    sp.add_argument("--spec")
    sp.add_argument("--quantum", action="store_true")

    g = groups.add_parser("bimodule", help="wall-crossing bimodules").add_subparsers(dest="cmd", required=True)
    sp = sub(g, "morita", cmd_bimodule_morita, "degree-0 surjectivity test")
    sp.add_argument("spec")
    sp.add_argument("--from", dest="src", required=True)
    sp.add_argument("--to", dest="dst", required=True)
    sp.add_argument("--maxdeg", type=int, default=2)
    sp.add_argument("--radius", type=int, default=1)

    g = groups.add_parser("tangle", help="annular tangle invariants").add_subparsers(dest="cmd", required=True)
    sp = sub(g, "eval", cmd_tangle_eval, "homology of a closed annular word")
    sp.add_argument("word")
    sp.add_argument("--truncation", type=int, default=8)
    sp.add_argument("--max-length", type=int, default=16)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cache = Cache(None, enabled=not args.no_cache)
    try:
        return args.func(args, cache)
    except (SpecError, *DOMAIN_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
