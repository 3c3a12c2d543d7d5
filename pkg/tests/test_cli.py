import json
import subprocess
import sys

import jsonschema
import pytest

from cosine_sine.cli import EXIT_BUDGET, EXIT_CERTS, EXIT_INVALID, EXIT_OK, EXIT_PARSE, main
from cosine_sine.report import load_schema


@pytest.fixture(scope="module")
def schema():
    return load_schema()


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _write(tmp_path, obj, name="s.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_validate_ok(tmp_path, capsys, schema):
    path = _write(tmp_path, {"order": 2, "table": [[0, 1], [1, 0]]})
    code, out, err = _run(capsys, "validate", path)
    assert code == EXIT_OK
    rep = json.loads(out)
    jsonschema.validate(rep, schema)
    assert rep["results"][0]["is_group"] and "valid" in err


def test_validate_non_associative(tmp_path, capsys, schema):
    path = _write(tmp_path, {"order": 2, "table": [[1, 0], [0, 0]]})
    code, out, err = _run(capsys, "validate", path)
    assert code == EXIT_INVALID
    rep = json.loads(out)
    jsonschema.validate(rep, schema)
    assert rep["results"][0]["witnesses"]


def test_validate_bad_sigma(tmp_path, capsys):
    # [1, 2, 0] is an automorphism of z3 but not an involution
    path = _write(tmp_path, {"order": 3, "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
                             "sigma": [1, 2, 0]})
    assert _run(capsys, "validate", path)[0] == EXIT_INVALID


@pytest.mark.parametrize("text", ["{not json", "[1, 2]", '{"order": 1}',
                                  '{"table": [[0.5]]}', '{"table": [[0]], "labels": [1]}'])
def test_validate_parse_errors(tmp_path, capsys, text):
    assert _run(capsys, "validate", _write(tmp_path, text))[0] == EXIT_PARSE


def test_order_mismatch_is_invalid(tmp_path, capsys):
    path = _write(tmp_path, {"order": 3, "table": [[0, 1], [1, 0]]})
    assert _run(capsys, "validate", path)[0] == EXIT_INVALID


def test_usage_errors_exit_3(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == EXIT_PARSE
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == EXIT_PARSE
    assert _run(capsys, "solve", "z2", "--field", "gf:4")[0] == EXIT_PARSE
    assert _run(capsys, "solve", "no-such-thing")[0] == EXIT_PARSE
    assert _run(capsys, "solve", "z2", "--field", "complex:1e-9")[0] == EXIT_PARSE


def test_solve_clean(capsys, schema):
    code, out, _ = _run(capsys, "solve", "z2", "--field", "gf:3")
    assert code == EXIT_OK
    rep = json.loads(out)
    jsonschema.validate(rep, schema)
    assert [r["solution_count"] for r in rep["results"]] == [33]
    assert rep["results"][0]["histogram"] == {"T41A": 9, "T42B": 18, "T43D": 6}


def test_solve_certificates_exit_1(capsys, schema):
    code, out, _ = _run(capsys, "solve", "z3", "--field", "gf:3", "--sigma-index", "0")
    assert code == EXIT_CERTS
    rep = json.loads(out)
    jsonschema.validate(rep, schema)
    assert rep["summary"]["certificates"] == 12


def test_solve_budget(capsys):
    code, _, err = _run(capsys, "solve", "z4", "--field", "gf:5", "--budget", "100")
    assert code == EXIT_BUDGET and "budget" in err


def test_solve_bad_sigma_index(capsys):
    assert _run(capsys, "solve", "z2", "--sigma-index", "5")[0] == EXIT_INVALID


def test_solve_file_with_sigma(tmp_path, capsys):
    path = _write(tmp_path, {"order": 3, "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
                             "sigma": [0, 2, 1]})
    code, out, _ = _run(capsys, "solve", path, "--field", "gf:3")
    rep = json.loads(out)
    assert code == EXIT_OK and len(rep["results"]) == 1
    assert rep["results"][0]["sigma"] == [0, 2, 1] and rep["results"][0]["solution_count"] == 39


def test_families_report(capsys, schema):
    code, out, _ = _run(capsys, "families", "--field", "gf:5^2", "--samples", "3",
                        "--catalog", "z2", "null2", "--verify")
    assert code == EXIT_OK
    rep = json.loads(out)
    jsonschema.validate(rep, schema)
    rows = {r["family"]: r for r in rep["results"]}
    assert rows["T42A_i"]["t42a_variants"] == {"lam/(2D)": 6}
    assert rows["T41B"]["zero_residual"] == 3
    assert [u["semigroup"] for u in rows["T41B"]["unrealizable"]] == ["z2"]


def test_families_deterministic(tmp_path, capsys):
    args = ["families", "--field", "complex:1e-9", "--samples", "4", "--seed", "3",
            "--catalog", "z4", "klein4", "--no-timings"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["-o", str(a)]) == EXIT_OK
    assert main(args + ["-o", str(b)]) == EXIT_OK
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    assert "timings" not in a.read_text()


def test_families_seed_matters(capsys):
    base = ["families", "--field", "gf:5^2", "--samples", "2", "--catalog", "z4", "--no-timings"]
    _, a, _ = _run(capsys, *base, "--seed", "1")
    _, b, _ = _run(capsys, *base, "--seed", "2")
    assert a != b


def test_lemmas_report(capsys, schema):
    code, out, err = _run(capsys, "lemmas", "--catalog", "z2", "null2", "--field", "gf:3")
    assert code == EXIT_OK
    rep = json.loads(out)
    jsonschema.validate(rep, schema)
    for r in rep["results"]:
        assert r["prop31_certificates"] == []
        for run in r["runs"]:
            assert all(v["failed"] == 0 for v in run["lemma33"].values())


def test_export_validate_round_trip(tmp_path, capsys):
    out = tmp_path / "k4.json"
    assert main(["export", "klein4", "--sigma-index", "1", "-o", str(out)]) == EXIT_OK
    code, rep, _ = _run(capsys, "validate", str(out))
    rep = json.loads(rep)
    assert code == EXIT_OK
    assert rep["results"][0]["sigma"] == json.loads(out.read_text())["sigma"]
    assert rep["results"][0]["order"] == 4


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cosine_sine", "export", "z2"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["table"] == [[0, 1], [1, 0]]
