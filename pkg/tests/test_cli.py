import json
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest

from degflag.characters import DominantWeight
from degflag.cli import EXIT_CAPACITY, EXIT_CHECK, EXIT_OK, EXIT_USAGE, run
from degflag.pbw_oracle import graded_character


def schema(name):
    return json.loads(resources.files("degflag").joinpath(f"schemas/{name}.schema.json").read_text())


def ok(argv, schema_name=None):
    out, err, code = run(argv)
    assert code == EXIT_OK, err
    data = json.loads(out)
    if schema_name:
        jsonschema.validate(data, schema(schema_name))
    return data


def test_cells_n2():
    d = ok(["cells", "--n", "2"], "cells")
    assert d["count"] == 2 and len(d["rows"]) == 2
    assert d["poincare"] == [1, 1]


def test_cells_n4():
    d = ok(["cells", "--n", "4"], "cells")
    assert len(d["rows"]) == 64
    assert d["poincare"] == [1, 6, 15, 20, 15, 6, 1]
    assert sum(r["relative_dimension"] for r in d["rows"]) >= 0


def test_cells_shape():
    d = ok(["cells", "--n", "3", "--shape", "1"], "cells")
    # P_(1) = {(1,1), (1,2)}; S_12 has the two candidates for any S_11
    assert d["slots"] == 2 and d["count"] == 4
    assert all(sorted(r["collection"]) == ["1,1", "1,2"] for r in d["rows"])
    assert all(r["relative_dimension"] is None for r in d["rows"])
    assert d["poincare"] == [1, 2, 1]


def test_cells_counts_only_and_guards():
    d = ok(["cells", "--n", "7", "--counts-only"], "cells")
    assert "rows" not in d and sum(d["poincare"]) == 2 ** 21
    assert run(["cells", "--n", "7"])[2] == EXIT_CAPACITY
    assert run(["cells", "--n", "9", "--counts-only"])[2] == EXIT_CAPACITY


def test_cells_formats():
    out, _, code = run(["cells", "--n", "3", "--format", "csv"])
    lines = out.splitlines()
    assert code == EXIT_OK and lines[0] == "collection,dimension,relative_dimension,diagonal"
    assert len(lines) == 9
    out, _, code = run(["cells", "--n", "3", "--format", "text"])
    assert "Poincare polynomial: 1 + 3t + 3t^2 + t^3" in out


def test_character_n2():
    d = ok(["character", "--n", "2", "--lambda", "3"], "character")
    assert d["character"] == [{"z": [3 - 2 * k], "q": k, "coeff": "1/1"} for k in range(4)]
    assert d["graded_dimensions"] == [1, 1, 1, 1]


def test_character_oracle_check():
    d = ok(["character", "--n", "3", "--lambda", "1,1", "--oracle-check"], "character")
    assert d["equal"] is True and d["dimension"] == 8
    assert d["oracle"] == d["character"]


def test_character_eval_n5():
    d = ok(["character", "--n", "5", "--lambda", "1,0,0,0", "--eval", "2,3,5,7", "11", "--oracle-check"],
           "character")
    point = [2, 3, 5, 7, 11]
    ref = graded_character(5, DominantWeight((1, 0, 0, 0))).to_polynomial().evaluate(point)
    assert Fraction(d["value"]) == ref and d["equal"] is True
    assert d["point"] == ["2/1", "3/1", "5/1", "7/1", "11/1"]


def test_character_text_and_csv():
    out, _, _ = run(["character", "--n", "2", "--lambda", "1", "--format", "text"])
    assert out.splitlines()[1:3] == ["z1", "z1^-1*q"]
    out, _, _ = run(["character", "--n", "2", "--lambda", "1", "--format", "csv"])
    assert out.splitlines() == ["z1,q,coeff", "1,0,1/1", "-1,1,1/1"]


def test_character_errors():
    assert run(["character", "--n", "6", "--lambda", "1,0,0,0,0"])[2] == EXIT_CAPACITY
    out, err, code = run(["character", "--n", "2", "--lambda", "1", "--eval", "1", "1"])
    assert code == EXIT_USAGE and "resample" in err
    assert run(["character", "--n", "3", "--lambda", "1"])[2] == EXIT_USAGE
    assert run(["character", "--n", "3", "--lambda", "a,b"])[2] == EXIT_USAGE
    assert run(["character", "--n", "3", "--lambda", "1,0", "--eval", "2", "3"])[2] == EXIT_USAGE
    assert run(["character", "--n", "3", "--lambda", "-1,0"])[2] == EXIT_USAGE
    assert run(["character", "--n", "4", "--lambda", "2,2,2", "--oracle-check", "--oracle-cap", "10"])[2] \
        == EXIT_CAPACITY


def test_usage_errors():
    assert run([])[2] == EXIT_USAGE
    assert run(["cells"])[2] == EXIT_USAGE
    assert run(["cells", "--n", "1"])[2] == EXIT_USAGE
    assert run(["bogus", "--n", "3"])[2] == EXIT_USAGE
    assert run(["verify", "--n", "3", "--trials", "-1"])[2] == EXIT_USAGE
    assert run(["--help"])[2] == EXIT_OK


def test_semismall_n4():
    d = ok(["semismall", "--n", "4"], "semismall")
    assert d["verdict"] == "small" and "elapsed_seconds" in d


def test_semismall_deterministic_across_threads(monkeypatch):
    outs = set()
    for t in ("1", "2", "4"):
        outs.add(run(["semismall", "--n", "6", "--threads", t, "--no-timing"])[0])
    monkeypatch.setenv("DEGFLAG_THREADS", "3")
    outs.add(run(["semismall", "--n", "6", "--no-timing"])[0])
    assert len(outs) == 1
    d = json.loads(outs.pop())
    jsonschema.validate(d, schema("semismall"))
    assert d["verdict"] == "semismall" and len(d["witnesses"]) == 1


def test_semismall_formats():
    out, _, code = run(["semismall", "--n", "6", "--format", "csv", "--no-timing"])
    assert code == EXIT_OK and out.splitlines()[0] == "label,base_dim,fiber_dim,excess"
    out, _, _ = run(["semismall", "--n", "3", "--format", "text", "--no-timing"])
    assert out.startswith("n=3 verdict=small")


def test_verify_n2():
    d = ok(["verify", "--n", "2"], "verify")
    assert d["passed"]
    assert any(s["notes"] for s in d["suites"])


def test_verify_n3_and_determinism():
    a = run(["verify", "--n", "3", "--trials", "100", "--seed", "4"])
    b = run(["verify", "--n", "3", "--trials", "100", "--seed", "4"])
    assert a == b and a[2] == EXIT_OK
    d = json.loads(a[0])
    jsonschema.validate(d, schema("verify"))
    assert all(s["passed"] for s in d["suites"])


def test_verify_n5_quiver_report():
    d = ok(["verify", "--n", "5", "--trials", "10"], "verify")
    quiver = next(s for s in d["suites"] if s["name"] == "quiver")
    assert quiver["passed"]
    assert "dim Q_5 = 10 + 30 = 40" in " ".join(quiver["notes"])


@pytest.mark.parametrize("cmd", ["cells", "semismall", "verify"])
def test_text_format_runs(cmd):
    out, _, code = run([cmd, "--n", "3", "--format", "text"])
    assert code == EXIT_OK and out.startswith("n=3")


def test_check_failure_exit_code(monkeypatch):
    import degflag.cli as cli

    monkeypatch.setattr(cli, "run_verify", lambda n, trials, seed: {
        "n": n, "trials": trials, "seed": seed, "passed": False,
        "suites": [{"name": "x", "passed": False, "checked": 1, "notes": [], "failures": ["boom"]}]})
    assert run(["verify", "--n", "3"])[2] == EXIT_CHECK
