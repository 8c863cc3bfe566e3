import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from tribounds.cli import fmt_hi, fmt_lo, main
from tribounds.problem import ProblemError, ProblemFile, parse_csv, parse_json

from conftest import FIXTURES, general_instance, separated_instance

EXAMPLE = str(FIXTURES / "example7.json")
SCHEMA = json.loads(resources.files("tribounds").joinpath("bounds_schema.json").read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_text_matches_fixture(capsys):
    code, out, _ = run(capsys, "bounds", EXAMPLE, "--deterministic")
    assert code == 0
    assert out == (FIXTURES / "example7.expected.txt").read_text()


def test_bounds_json_matches_fixture_and_schema(capsys):
    code, out, _ = run(capsys, "bounds", EXAMPLE, "--deterministic", "--json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert set(doc) == {"status", "intervals", "witnesses", "verdict", "timings"}
    assert doc == json.loads((FIXTURES / "example7.expected.json").read_text())
    assert json.dumps(doc, indent=2) == out.rstrip("\n")


def test_json_timings_present_without_deterministic(capsys):
    _, out, _ = run(capsys, "bounds", EXAMPLE, "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["timings"]["total_s"] >= 0


def test_deterministic_runs_are_byte_identical(capsys):
    outs = [run(capsys, "bounds", EXAMPLE, "--deterministic", "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(capsys, "verify", EXAMPLE, "--deterministic", "--seed", "3")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_outward_formatting():
    assert fmt_lo(842.9250969) == "842.9250"
    assert fmt_hi(967.1082369) == "967.1083"
    assert fmt_lo(-0.00001) == "-0.0001"
    assert fmt_hi(2.0) == "2.0000"


def test_extremal_on_point_matrix(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"n": 3, "a": [[1, 1], [2, 2], [3, 3]], "b": [[0.5, 0.5], [0.1, 0.1]]}))
    code, out, _ = run(capsys, "extremal", f, "--json", "--deterministic")
    e = json.loads(out)["extremal"]
    assert code == 0
    assert e["upper_first"] == e["lower_first"] and e["upper_last"] == e["lower_last"]


def test_check_invariance_strict(tmp_path, capsys):
    f = tmp_path / "z.json"
    f.write_text(json.dumps({"a": [[0, 1], [5, 6]], "b": [[0, 1]]}))
    assert run(capsys, "check-invariance", f)[0] == 0
    code, out, _ = run(capsys, "check-invariance", f, "--strict")
    assert code == 1 and "Unknown" in out
    code, out, _ = run(capsys, "check-invariance", EXAMPLE, "--strict", "--json")
    assert code == 0 and json.loads(out)["verdict"]["status"] == "Invariant"


def test_not_invariant_witness_output(tmp_path, capsys):
    f = tmp_path / "path.json"
    f.write_text(json.dumps({"a": [[0, 0]] * 3, "b": [[1, 1]] * 2}))
    code, out, _ = run(capsys, "check-invariance", f, "--json")
    v = json.loads(out)["verdict"]
    assert v["status"] == "NotInvariant" and v["witness"]["zeros"] == [2]


def test_properties(capsys):
    code, out, _ = run(capsys, "properties", EXAMPLE, "--json")
    p = json.loads(out)["properties"]
    assert p["positive_definite"] == "yes" and p["hurwitz_stable"] == "no"


def test_refine_flag(capsys):
    code, out, _ = run(capsys, "bounds", EXAMPLE, "--eps", "1", "--json", "--deterministic")
    assert code == 0 and json.loads(out)["status"] == "Exact"


def test_verify_example(capsys):
    code, out, _ = run(capsys, "verify", EXAMPLE)
    assert code == 0
    assert "FAIL" not in out and out.count("PASS") >= 6


def test_csv_input(tmp_path, capsys):
    f = tmp_path / "m.csv"
    f.write_text("a_lo,a_hi,b_lo,b_hi\n2975,3025,-2015,-1985\n4965,5035,-3020,-2980\n"
                 "6955,7045,-4025,-3975\n8945,9055\n")
    code, out, _ = run(capsys, "bounds", f, "--json", "--deterministic")
    csv_doc = json.loads(out)
    _, out2, _ = run(capsys, "bounds", EXAMPLE, "--json", "--deterministic")
    assert code == 0 and csv_doc == json.loads(out2)
    g = tmp_path / "m.txt"
    g.write_text(f.read_text())
    assert run(capsys, "bounds", g, "--csv", "--json")[0] == 0


@pytest.mark.parametrize("text,line,msg", [
    ('{\n "a": [[0, 1],\n   [2, 1]],\n "b": [[1, 1]]\n}', 3, "a[2] is empty"),
    ('{\n "n": 3,\n "a": [[0, 1], [0, 1]],\n "b": [[1, 1]]\n}', 3, "expected 3 diagonal"),
    ('{\n "a": [[0, 1], [0, 1]],\n "b": [[1, 1],\n  [2, 2]]\n}', 4, "expected 1 off-diagonal"),
    ('{\n "a": [[0, 1]],\n "b": []\n', 4, "invalid JSON"),
    ('{\n "a": [[0, "x"]],\n "b": []\n}', 2, "must be numbers"),
    ('{"a": [[0, 1]]}', 1, "missing key 'b'"),
])
def test_json_errors_are_line_precise(text, line, msg):
    with pytest.raises(ProblemError) as e:
        parse_json(text, "f.json")
    assert e.value.line == line and msg in e.value.message
    assert str(e.value).startswith(f"f.json:{line}:")


@pytest.mark.parametrize("text,line,msg", [
    ("0,1,1,1\n0,1,1\n0,1\n", 2, "expected 4 columns"),
    ("0,1,1,1\n0,1\n0,1\n", 2, "expected 4 columns"),
    ("h1,h2,h3,h4\n0,1,1,1\n1,0\n", 3, "is empty"),
    ("0,1,1,1\n0,x\n", 2, "non-numeric"),
    ("a_lo\n", 1, "no data rows"),
])
def test_csv_errors_are_line_precise(text, line, msg):
    with pytest.raises(ProblemError) as e:
        parse_csv(text, "f.csv")
    assert e.value.line == line and msg in e.value.message


def test_cli_input_error_exit_code(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{\n "a": [[0, 1],\n   [2, 1]],\n "b": [[1, 1]]\n}')
    code, _, err = run(capsys, "bounds", f)
    assert code == 2 and f"{f}:3:" in err
    code, _, err = run(capsys, "bounds", tmp_path / "missing.json")
    assert code == 2 and "cannot read" in err


def test_cli_bad_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["bounds", EXAMPLE, "--tol", "-1"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate", EXAMPLE])
    assert e.value.code == 2


def test_problem_file_roundtrip():
    p = parse_json((FIXTURES / "example7.json").read_text())
    q = parse_json(p.to_json())
    assert p.matrix() == q.matrix() and q.name == "example7"
    assert ProblemFile.from_matrix(p.matrix()).matrix() == p.matrix()


def test_large_n_output_is_truncated(tmp_path, capsys):
    n = 300
    f = tmp_path / "big.json"
    f.write_text(json.dumps({"a": [[10 * i, 10 * i + 0.1] for i in range(n)], "b": [[0.5, 0.6]] * (n - 1)}))
    code, out, _ = run(capsys, "bounds", f, "--deterministic")
    assert code == 0 and "witnesses omitted" in out and "..." in out
    code, out, _ = run(capsys, "bounds", f, "--deterministic", "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert "a" not in doc["witnesses"]["upper"][0] and len(doc["intervals"]) == n


def test_verify_on_seeded_random_instances(tmp_path, capsys):
    rng = np.random.default_rng(2020)
    for i in range(20):
        m = general_instance(rng, 5) if i % 2 else separated_instance(rng, 5)
        f = tmp_path / f"r{i}.json"
        f.write_text(ProblemFile.from_matrix(m, name=f"r{i}").to_json())
        code, out, _ = run(capsys, "verify", f, "--seed", i, "--deterministic")
        assert code == 0, out
        assert "FAIL" not in out
