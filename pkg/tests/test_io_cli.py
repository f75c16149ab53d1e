import io
import json
from pathlib import Path

import pytest

from repcomp import cli
from repcomp.catalog import a2, a2_modules, truncated_poly, uniserial
from repcomp.errors import RepcompError
from repcomp.field import FieldSpec
from repcomp.io import algebra_from_json, algebra_to_json, load_json, rep_from_json, rep_to_json

DATA = Path(__file__).parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def d(name):
    return str(DATA / name)


def test_algebra_roundtrip():
    for alg in (truncated_poly(FieldSpec.prime(5)), a2(FieldSpec.rational())):
        again = algebra_from_json(json.loads(json.dumps(algebra_to_json(alg))))
        assert again == alg


def test_rep_roundtrip():
    alg = a2(FieldSpec.prime(3))
    t = a2_modules(alg)["T"]
    assert rep_from_json(alg, json.loads(json.dumps(rep_to_json(t)))) == t


def test_bad_inputs(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"dim\": 2,,}")
    with pytest.raises(RepcompError, match="line 1"):
        load_json(bad)
    alg = truncated_poly(FieldSpec.prime(5))
    with pytest.raises(RepcompError):
        rep_from_json(alg, {"dim": 2, "mats": {"X": [["1"]]}})
    with pytest.raises(RepcompError):
        rep_from_json(alg, {"dim": 1, "mats": {"Z": [["0"]]}})


def test_cli_grass_count():
    code, out, _ = run("grass", "count", "--algebra", d("kx4.json"), "--module", d("tau2.json"), "--dim", 1)
    assert code == 0 and json.loads(out) == {"count": 1}


def test_cli_validate_reports_violation():
    code, out, _ = run("validate", "--algebra", d("kx4.json"), "--rep", d("identity.json"))
    assert code == 1
    assert json.loads(out)["violations"][0]["index"] == 0


def test_cli_field_override():
    code, out, _ = run("grass", "count", "--algebra", d("kx4.json"), "--module", d("s1s3.json"), "--dim", 2,
                       "--q", 3)
    assert code == 0 and json.loads(out)["count"] == 4


def test_cli_jets():
    code, out, _ = run("jets", "lift", "--model", d("stu.json"), "--xi", "0,0,1", "--r", 3)
    assert code == 0 and json.loads(out)["member"] is False
    code, out, _ = run("jets", "lift", "--model", d("stu.json"), "--xi", "1,0,1", "--r", 8, "--budget", 10)
    assert code == 2 and json.loads(out)["status"] == "unknown"
    code, out, _ = run("jets", "probe", "--algebra", d("kx4.json"), "--module", d("s1s3.json"), "--dim", 2,
                       "--r", 3, "--q", 2)
    res = json.loads(out)
    assert code == 0 and res["summary"] == "generically_nonreduced"
    assert [p["lifting_count"] for p in res["points"]] == [2, 2, 2]


def test_cli_grass_enum_csv():
    code, out, _ = run("grass", "enum", "--algebra", d("kx4.json"), "--module", d("s1s3.json"), "--dim", 2,
                       "--q", 2, "--probe-r", 3, "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "point_index,stratum,tangent_dim,nonreduced_flag"
    assert len(lines) == 4
    assert sorted(l.split(",")[1] for l in lines[1:]) == ["1^2", "2", "2"]


def test_cli_homological_commands():
    code, out, _ = run("ext", "--algebra", d("kx4.json"), "--rep", d("tau2.json"), "--rep2", d("tau2.json"))
    assert json.loads(out) == {"de": 4, "der": 4, "ext": 2, "hom": 2}
    code, out, _ = run("cert", "orbit", "--algebra", d("a2.json"), "--rep", d("a2_T.json"))
    assert json.loads(out)["verdict"] == "certified"
    code, out, _ = run("iso", "--algebra", d("a2.json"), "--rep", d("a2_T.json"), "--rep2", d("a2_T.json"))
    assert json.loads(out)["isomorphic"] is True
    code, out, _ = run("decompose", "--algebra", d("kx4.json"), "--rep", d("s1s3.json"))
    assert sorted(s["dim"] for s in json.loads(out)["summands"]) == [1, 3]


def test_cli_detsum_and_table():
    code, out, _ = run("detsum", "verify", "--trials", 30, "--q", 7, "--format", "table")
    assert code == 0 and "failures" in out and "0" in out


def test_cli_errors():
    code, _, err = run("grass", "count", "--algebra", d("kx4.json"), "--module", d("missing.json"), "--dim", 1)
    assert code == 1 and err.startswith("error:")
    code, _, _ = run("hom", "--algebra", d("kx4.json"))
    assert code == 1
    code, _, _ = run("nonsense")
    assert code == 1


def test_cli_env_budget(monkeypatch):
    monkeypatch.setenv("REPCOMP_BUDGET", "10")
    code, out, _ = run("jets", "lift", "--model", d("stu.json"), "--xi", "1,0,1", "--r", 8)
    assert code == 2
    monkeypatch.setenv("REPCOMP_BUDGET", "lots")
    code, _, err = run("jets", "lift", "--model", d("stu.json"), "--xi", "1,0,1", "--r", 3)
    assert code == 1 and "REPCOMP_BUDGET" in err
