import json
from pathlib import Path

import pytest

from klrw.cli import Cache, SpecError, parse_spec, run

SPECS = Path(__file__).resolve().parents[1] / "scripts" / "specs"

F19_SPEC = """{
  "vertices": ["i", "j", "k"],
  "edges": [{"id": "e", "tail": "j", "head": "i"}, {"id": "f", "tail": "k", "head": "j"}],
  "w": {"i": 1, "j": 0, "k": 1},
  "v": {"i": 1, "j": 1, "k": 1},
  "flavor": {"group": "Fp", "p": 19, "beta": {"e": 10, "f": 14, "i:1": 2, "k:1": 12}}
}
"""


@pytest.fixture(autouse=True)
def _cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("KLRW_CACHE", str(tmp_path / "cache"))
    monkeypatch.setenv("KLRW_THREADS", "2")


def spec(name):
    return str(SPECS / name)


def test_validate_generic_spec(capsys):
    assert run(["quiver", "validate", spec("tp1.json")]) == 0
    assert "generic: yes" in capsys.readouterr().out


def test_validate_f19(tmp_path, capsys):
    p = tmp_path / "f19.json"
    p.write_text(F19_SPEC)
    assert run(["quiver", "validate", str(p)]) == 0


def test_f19_round_trip():
    doc = parse_spec(F19_SPEC)
    again = parse_spec(doc.serialize())
    assert again.serialize() == doc.serialize()
    assert again.flavoring.beta == doc.flavoring.beta
    assert again.v == doc.v


def test_undeclared_vertex_reports_location(capsys):
    assert run(["quiver", "validate", spec("bad_vertex.json")]) == 1
    err = capsys.readouterr().err
    assert "line 3" in err and "undeclared vertex" in err
    with pytest.raises(SpecError) as exc:
        parse_spec('{"vertices": ["1"],\n "w": {"1": 1}, "v": {"1": 1},\n "flavor": {"group": }}')
    assert exc.value.line == 3


def test_usage_errors_exit_two():
    assert run([]) == 2
    assert run(["chambers", "bogus"]) == 2
    assert run(["algebra", "homdim", spec("tp1.json")]) == 2  # --maxdeg missing


def test_missing_file_is_domain_error():
    assert run(["quiver", "validate", "/nonexistent/spec.json"]) == 1


def test_output_formats(capsys):
    assert run(["chambers", "enumerate", spec("tp1.json"), "--format", "csv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "id,word,representative,volume"
    assert len(out) == 3
    assert run(["chambers", "enumerate", spec("tp1.json"), "--format", "json-lines"]) == 0
    rows = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert sorted(r["volume"] for r in rows) == ["1/2", "1/2"]


def test_homdim_cache_and_determinism(tmp_path, capsys):
    args = ["algebra", "homdim", spec("tp1.json"), "--maxdeg", "4", "--format", "json-lines"]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert any((tmp_path / "cache").rglob("*.json"))
    assert run(args) == 0
    assert capsys.readouterr().out == first
    assert run(args + ["--no-cache"]) == 0
    assert capsys.readouterr().out == first
    rows = [json.loads(x) for x in first.splitlines()]
    ends = {(r["from"], r["to"], r["degree"]): r["dim"] for r in rows}
    assert [ends[("c0", "c0", d)] for d in range(5)] == [1, 0, 3, 0, 5]


def test_cache_rejects_schema_mismatch(tmp_path):
    c = Cache(str(tmp_path / "c"))
    k = c.key("x", 1)
    c.put(k, {"a": 1})
    assert c.get(k) == {"a": 1}
    path = next((tmp_path / "c").rglob("*.json"))
    blob = json.loads(path.read_text())
    blob["schema"] = 999
    path.write_text(json.dumps(blob))
    assert c.get(k) is None
    assert c.key("x", 1) != c.key("x", 2)


def test_tangle_eval(capsys):
    assert run(["tangle", "eval", spec("unknot.tangle")]) == 0
    out = capsys.readouterr().out
    assert "Poincare polynomial: q + q^-1" in out


def test_tangle_eval_kink_and_negative_crossing(tmp_path, capsys):
    assert run(["tangle", "eval", spec("kinked_unknot.tangle")]) == 0
    rows = [ln.split() for ln in capsys.readouterr().out.splitlines() if ln[:1].isdigit()]
    assert sum(int(r[2]) for r in rows) == 2
    p = tmp_path / "neg.tangle"
    p.write_text("cup 0\nbraid 0 -\ncap 0\n")
    assert run(["tangle", "eval", str(p)]) != 0


def test_tangle_eval_empty(tmp_path, capsys):
    p = tmp_path / "empty.tangle"
    p.write_text("# nothing\n")
    assert run(["tangle", "eval", str(p)]) == 0
    assert "Poincare polynomial: 1" in capsys.readouterr().out


def test_relcheck(capsys):
    assert run(["algebra", "relcheck", "--seed", "7", "--instances", "3"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_reduce_word(capsys):
    assert run(["algebra", "reduce", spec("cross_twice.word")]) == 0
    assert "z_11" in capsys.readouterr().out


def test_coulomb_and_morita(capsys):
    assert run(["algebra", "coulomb", spec("tp1.json"), "-a", "1/10", "--maxdeg", "4",
                "--format", "json-lines"]) == 0
    rows = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert [r["dim"] for r in rows if r["degree"] % 2 == 0] == [1, 3, 5]
    assert run(["bimodule", "morita", spec("tp1.json"), "--from", spec("lift_a.json"),
                "--to", spec("lift_b.json")]) == 0
    assert "forward yes, reverse yes" in capsys.readouterr().out


def test_chamber_commands(capsys):
    assert run(["chambers", "torsion", spec("tp1.json"), "-p", "101"]) == 0
    assert run(["chambers", "wall", spec("tp1.json"), "--wall", "0,1"]) == 0
    capsys.readouterr()
    assert run(["quiver", "validate", spec("a1_p7.json")]) == 0
