import json
import subprocess
import sys

import jsonschema
import pytest

from elliott.cli import main
from elliott.report import REPORT_SCHEMA, SCHEMA_VERSION

SPEC = """\
space: torus
dimension: 3
exponents: [{m}, {n}]
theta:
  label: {label}
  interval: ["{lo}", "{hi}"]
"""

SPHERE = """\
space: sphere_circle
dimension: {d}
theta:
  label: theta
  interval: ["0.5624", "0.5626"]
"""


def torus_file(tmp_path, m, n, label="theta", lo="0.5624", hi="0.5626"):
    p = tmp_path / f"t3_{m}_{n}_{label}_{lo}.yaml"
    p.write_text(SPEC.format(m=m, n=n, label=label, lo=lo, hi=hi), encoding="utf-8")
    return str(p)


def sphere_file(tmp_path, d):
    p = tmp_path / f"s{d}.yaml"
    p.write_text(SPHERE.format(d=d), encoding="utf-8")
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["schema_version"] == SCHEMA_VERSION
    return code, doc


def test_invariant_text(tmp_path, capsys):
    code, out, _ = run(capsys, "invariant", torus_file(tmp_path, 2, 3))
    assert code == 0
    assert "K0 = Z^4 + Z/6" in out
    assert "nu1: theta" in out.splitlines()[out.splitlines().index("K0 generators (trace):") + 3].strip()
    assert "dense range: yes" in out
    assert "positive cone: x >= 0 iff x = 0 or r1 + theta*r3 > 0" in out


def test_invariant_no_torsion(tmp_path, capsys):
    code, out, _ = run(capsys, "invariant", torus_file(tmp_path, 1, 1))
    assert code == 0
    assert "K0 = Z^4\n" in out
    assert "order" not in out


def test_invariant_json(tmp_path, capsys):
    code, doc = run_json(capsys, "invariant", torus_file(tmp_path, 2, 3))
    inv = doc["invariant"]
    assert code == 0
    assert inv["k0"] == {"text": "Z^4 + Z/6", "rank": 4, "invariant_factors": [6]}
    assert [g["trace"]["text"] for g in inv["generators"]] == ["1", "0", "theta", "0", "0"]
    assert inv["spec"]["theta"]["interval"] == ["0.5624", "0.5626"]


@pytest.mark.parametrize("lo,hi,needle", [
    ("0.7", "0.6", "lo < hi"),
    ("0", "0.5", "lo > 0"),
    ("0.5", "1", "hi < 1"),
])
def test_bad_interval_exit_2(tmp_path, capsys, lo, hi, needle):
    code, out, err = run(capsys, "invariant", torus_file(tmp_path, 2, 3, lo=lo, hi=hi))
    assert code == 2
    assert needle in err and out == ""


@pytest.mark.parametrize("text", [
    "space: torus\ndimension: 3\nexponents: [2, 3]\ncolour: red\ntheta: {label: theta, interval: ['0.5', '0.6']}\n",
    "space: torus\ndimension: 3\nexponents: [2, 3]\ntheta: {label: theta, interval: [0.5, 0.6]}\n",
    "space: torus\ndimension: 3\nexponents: [2]\ntheta: {label: theta, interval: ['0.5', '0.6']}\n",
    "space: torus\ndimension: 3\nexponents: [2, 3]\ntheta: {label: theta, interval: ['0.5', '0.6'], extra: 1}\n",
    "space: torus\ndimension: 3\nexponents: [2, 3]\ntheta: {label: theta, interval: ['x', '0.6']}\n",
    "space: sphere_circle\ndimension: 2\nexponents: [1]\ntheta: {label: theta, interval: ['0.5', '0.6']}\n",
    "[not, a, mapping]\n",
    "space: torus\n  bad: [indent\n",
])
def test_schema_violations_exit_2(tmp_path, capsys, text):
    p = tmp_path / "bad.yaml"
    p.write_text(text, encoding="utf-8")
    code, _, err = run(capsys, "invariant", str(p))
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize("text", [
    "space: klein_bottle\ndimension: 2\ntheta: {label: theta, interval: ['0.5', '0.6']}\n",
    "space: sphere_circle\ndimension: 4\ntheta: {label: theta, interval: ['0.5', '0.6']}\n",
    "space: torus\ndimension: 3\nexponents: [0, 3]\ntheta: {label: theta, interval: ['0.5', '0.6']}\n",
    "space: torus\ndimension: 1\nexponents: []\ntheta: {label: theta, interval: ['0.5', '0.6']}\n",
])
def test_unsupported_exit_3(tmp_path, capsys, text):
    p = tmp_path / "u.yaml"
    p.write_text(text, encoding="utf-8")
    code, _, err = run(capsys, "invariant", str(p))
    assert code == 3 and err.startswith("unsupported:")


def test_missing_file_exit_2(capsys):
    assert run(capsys, "invariant", "/nonexistent/spec.yaml")[0] == 2


def test_json_spec_file_accepted(tmp_path, capsys):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"space": "torus", "dimension": 3, "exponents": [2, 3],
                             "theta": {"label": "theta", "interval": ["0.5624", "0.5626"]}}))
    assert run(capsys, "invariant", str(p))[0] == 0


def test_compare_ex2a(tmp_path, capsys):
    a, b = torus_file(tmp_path, 2, 3), torus_file(tmp_path, 3, 2)
    code, out, _ = run(capsys, "compare", a, b)
    assert code == 0
    assert out.startswith("Elliott: ISOMORPHIC; Flip-conjugacy: DISTINCT (ladder 2 vs 3)")
    assert "K0 witness" in out
    assert "Headline: isomorphic C*-algebras, not flip conjugate" in out
    code, doc = run_json(capsys, "compare", a, b)
    assert doc["comparison"]["elliott"]["verdict"] == "ISOMORPHIC"
    assert doc["comparison"]["flip"]["separations"][0] == {"invariant": "ladder", "value": 2, "other": 3}


def test_compare_ex3_and_spheres(tmp_path, capsys):
    code, out, _ = run(capsys, "compare", torus_file(tmp_path, 1, 1), sphere_file(tmp_path, 2))
    assert code == 0 and out.startswith("Elliott: ISOMORPHIC")
    code, out, _ = run(capsys, "compare", sphere_file(tmp_path, 3), sphere_file(tmp_path, 5))
    assert code == 0 and out.startswith("Elliott: ISOMORPHIC")
    assert "dimensions differ" in out and "not computed" in out


def test_compare_label_mismatch(tmp_path, capsys):
    code, out, _ = run(capsys, "compare", torus_file(tmp_path, 2, 3), torus_file(tmp_path, 3, 2, label="phi"))
    assert code == 0
    assert "Elliott verdict: UNDECIDED (theta labels differ" in out


def test_search_bound_flag(tmp_path, capsys):
    a, b = torus_file(tmp_path, 1, 1), torus_file(tmp_path, -1, 1)
    _, doc = run_json(capsys, "compare", a, b, "--search-bound", "0")
    assert doc["comparison"]["flip"]["verdict"] == "UNKNOWN"
    _, doc = run_json(capsys, "--search-bound", "2", "compare", a, b)
    assert doc["comparison"]["flip"]["verdict"] == "POSSIBLY_CONJUGATE"
    assert run(capsys, "compare", a, b, "--search-bound", "-1")[0] == 2


def test_family(capsys):
    code, doc = run_json(capsys, "family", "2", "3", "5")
    assert code == 0
    assert len(doc["members"]) == 4 and len(doc["pairs"]) == 6
    assert all(p["elliott"] == "ISOMORPHIC" and p["flip"] == "DISTINCT" for p in doc["pairs"])
    assert {m["k0"] for m in doc["members"]} == {"Z^4 + Z/30"}
    code, doc = run_json(capsys, "family", "2")
    assert code == 0 and len(doc["pairs"]) == 1 and doc["all_ok"]
    code, out, _ = run(capsys, "family", "2", "3", "5")
    assert "6 pairs; all ISOMORPHIC / DISTINCT: yes" in out


@pytest.mark.parametrize("args", [["2", "2"], ["4"], ["1", "3"]])
def test_family_bad_primes(capsys, args):
    assert run(capsys, "family", *args)[0] == 2


def test_rouhani(capsys):
    code, doc = run_json(capsys, "rouhani", "--depth", "3")
    assert code == 0
    assert doc["nu"] == [1, 4, 21]
    assert doc["theta_partial"]["exact"] == "1179649/2097152"
    assert doc["beta_bound_ok"]
    code, doc = run_json(capsys, "rouhani", "--depth", "4")
    assert code == 0 and doc["theta_partial"]["exact"] is None
    assert run(capsys, "rouhani", "--depth", "9")[0] == 2
    assert run(capsys, "rouhani")[0] == 2


def test_paper_examples(capsys):
    code, doc = run_json(capsys, "--paper-examples")
    assert code == 0 and doc["all_pass"]
    assert len(doc["checks"]) == 5
    code, out, _ = run(capsys, "--paper-examples")
    assert out.count("[PASS]") == 5


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "--paper-examples", "family", "2")[0] == 2


def test_subprocess_byte_identical(tmp_path):
    a, b = torus_file(tmp_path, 2, 3), torus_file(tmp_path, 3, 2)
    for argv in (["compare", a, b, "--json"], ["invariant", a, "--json"], ["family", "2", "3", "--json"]):
        cmd = [sys.executable, "-m", "elliott", *argv]
        first = subprocess.run(cmd, capture_output=True, check=True).stdout
        second = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert first == second
        jsonschema.validate(json.loads(first), REPORT_SCHEMA)
