import json

import numpy as np
import pytest

from markovpade import catalog, measures
from markovpade.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_moments_csv(capsys):
    code, out, _ = run(capsys, "moments", "--example", "ex0", "--L", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[:3] == ["# d=3", "# R=1", "l,k,m,coefficient"]
    assert len(lines) > 3


def test_moments_json(capsys):
    code, out, _ = run(capsys, "moments", "--example", "polar-positive", "--L", "3", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["d"] == 2 and obj["L"] == 3
    assert {r["l"] for r in obj["rows"]} == {0, 1, 2, 3}


def test_hankel(capsys):
    code, out, _ = run(capsys, "hankel", "--example", "polar-positive", "--n", "3", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["verdict"] == "positive" and not obj["failures"]
    code, out, _ = run(capsys, "hankel", "--example", "ex1-degenerate", "--n", "3")
    assert code == 0 and out.startswith("# verdict=not-positive")


def test_pade_determinant_flags_degenerate(capsys):
    code, out, _ = run(capsys, "pade", "--example", "ex1-degenerate", "--n", "2",
                       "--method", "determinant", "--format", "json")
    obj = json.loads(out)
    assert code == 0
    first = obj["pairs"][0]
    assert np.allclose(first["theta"], [1.0, 0.0]) and first["status"] == "degenerate"


def test_pade_from_directional_csv(tmp_path, capsys):
    path = tmp_path / "f.csv"
    path.write_text("l,value\n0,2\n1,0\n2,0.66666666666666663\n3,0\n")
    code, out, _ = run(capsys, "pade", "--input", str(path), "--n", "2", "--format", "json")
    pair = json.loads(out)["pairs"][0]
    assert code == 0 and pair["theta"] is None
    assert np.allclose(pair["P"], [-1 / 3, 0.0, 1.0])
    code, out, _ = run(capsys, "pade", "--input", str(path), "--n", "2")
    assert out.splitlines()[0] == "j,status,hankel,p_0,p_1,p_2,q_0,q_1,rem_1,rem_2"


def test_rationality_roundtrip_through_table_csv(tmp_path, capsys):
    table = tmp_path / "table.csv"
    code, _, _ = run(capsys, "moments", "--example", "rotation-invariant", "--L", "12", "--out", str(table))
    assert code == 0
    code, out, _ = run(capsys, "rationality", "--input", str(table), "--n", "6")
    obj = json.loads(out)
    assert code == 0 and obj["rational"] and obj["detected_degree"] == 4
    code, out, _ = run(capsys, "rationality", "--example", "polar-positive", "--n", "5", "--format", "csv")
    assert "# rational=false" in out


def test_cubature(tmp_path, capsys):
    out_file = tmp_path / "rule.csv"
    code, _, _ = run(capsys, "cubature", "--example", "polar-positive", "--n", "2", "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().splitlines()
    head = lines.index("x1,x2,weight")
    data = np.loadtxt(lines[head + 1:], delimiter=",")
    assert data.shape[1] == 3 and np.all(data[:, 2] > 0)
    assert data[:, 2].sum() == pytest.approx(np.pi, rel=1e-12)
    code, out, _ = run(capsys, "cubature", "--example", "polar-positive", "--n", "2", "--format", "json")
    obj = json.loads(out)
    assert obj["passed"] and obj["rule"]["n"] == 2


def test_cubature_failure_exit_code(capsys):
    code, _, err = run(capsys, "cubature", "--example", "ex1-degenerate", "--n", "2")
    assert code == 1 and "Hankel-positive" in err


def test_cubature_from_json_measure(tmp_path, capsys):
    path = tmp_path / "mu.json"
    path.write_text(measures.emit_measure(catalog.polar_positive()))
    code, _, _ = run(capsys, "cubature", "--input", str(path), "--n", "2")
    assert code == 0


@pytest.mark.parametrize("name", list(catalog.EXAMPLES))
def test_reproduce(name, capsys):
    code, out, _ = run(capsys, "reproduce", name)
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines())


@pytest.mark.parametrize("argv", [
    ["moments", "--example", "ex0", "--L", "5"],
    ["pade", "--example", "polar-positive", "--n", "3", "--format", "json"],
    ["cubature", "--example", "polar-positive", "--n", "2"],
])
def test_repeated_runs_identical(argv, capsys):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "moments")[0] == 2
    assert run(capsys, "moments", "--example", "ex0", "--input", "x.json")[0] == 2
    assert run(capsys, "moments", "--example", "nope")[0] == 2
    assert run(capsys, "moments", "--input", str(tmp_path / "missing.json"))[0] == 2
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert run(capsys, "moments", "--input", str(empty))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"d": 2, "R": 1.0, "variant": "blob"}))
    code, _, err = run(capsys, "moments", "--input", str(bad))
    assert code == 2 and "variant" in err
    odd = tmp_path / "odd.csv"
    odd.write_text("a,b\n1,2\n")
    assert run(capsys, "moments", "--input", str(odd))[0] == 2
    short = tmp_path / "short.csv"
    short.write_text("l,value\n0,1\n")
    assert run(capsys, "pade", "--input", str(short), "--n", "2")[0] == 2


def test_argparse_rejections(capsys):
    for argv in (["reproduce", "unknown"], ["moments", "--n", "0"], ["frobnicate"]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2
    capsys.readouterr()
