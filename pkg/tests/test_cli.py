import json
import os
import subprocess
import sys

import pytest

from hecurve import cli


def invoke(capsys, *argv):
    status = cli.main(list(argv))
    return status, capsys.readouterr().out


def invoke_json(capsys, *argv):
    status, out = invoke(capsys, *argv)
    return status, json.loads(out)


def test_fixtures_listed(capsys):
    status, out = invoke(capsys, "fixtures")
    names = out.split()
    assert status == 0
    assert {"squid_2222", "algebra_kronecker", "curve_trigyro", "skew_cyclic3"} <= set(names)


def test_order_from_flags(capsys):
    status, rep = invoke_json(capsys, "order", "--weights", "1,1", "--N", "2")
    assert status == 0 and rep["passed"]
    assert rep["schema"] == "hecurve/1" and rep["dim"] == 7
    assert rep["ext1"] == [[0, 1], [1, 0]]


def test_order_from_fixture_and_inline(capsys):
    _, a = invoke_json(capsys, "order", "order_weights_11")
    _, b = invoke_json(capsys, "order", '{"weights": [1, 1], "N": 2}')
    assert a["hom"] == b["hom"] and a["ext1"] == b["ext1"]


def test_skew_command(capsys):
    status, rep = invoke_json(capsys, "skew", "skew_cyclic3")
    assert status == 0
    assert rep["dim"] == 2 * 3 * 2
    assert rep["quiver_isomorphism"]["verified"]
    status, rep = invoke_json(capsys, "skew", "skew_dihedral3")
    assert status == 0 and rep["dim"] == 3 * 6 * 2


def test_skew_relation_violation_exits_one(capsys):
    bad = {"group": {"kind": "cyclic", "n": 2}, "conductor": 4, "truncation": 2,
           "generators": {"h": {"xi_exponent": 1}}}
    status, rep = invoke_json(capsys, "skew", json.dumps(bad))
    assert status == 1 and rep["error"] == "action_relation_violation"


@pytest.mark.parametrize("name,kind", [("squid_2222", "tubular"), ("squid_235", "domestic"),
                                       ("squid_237", "wild_candidate")])
def test_squid_types(capsys, name, kind):
    status, rep = invoke_json(capsys, "squid", name)
    assert status == 0 and rep["type"] == kind and rep["dim"] == rep["expected_dim"]


def test_squid_emits_algebra_usable_by_coxeter(capsys, tmp_path):
    _, rep = invoke_json(capsys, "squid", "squid_244", "--emit-algebra")
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(rep["algebra"]))
    status, cox = invoke_json(capsys, "coxeter", str(path))
    assert status == 0
    assert cox["invariants"]["coxeter_poly"] == rep["invariants"]["coxeter_poly"]


def test_canonical_command(capsys):
    status, rep = invoke_json(capsys, "canonical", "squid_236")
    _, squid = invoke_json(capsys, "squid", "squid_236")
    assert status == 0 and rep["rank"] == 10
    assert rep["invariants"]["coxeter_poly"] == squid["invariants"]["coxeter_poly"]


def test_coxeter_kronecker(capsys):
    status, rep = invoke_json(capsys, "coxeter", "algebra_kronecker")
    assert status == 0 and rep["coxeter_polynomial"] == "t^2 - 2t + 1"


@pytest.mark.parametrize("name", ["curve_cyclic_six", "curve_trigyro", "curve_diglide"])
def test_curve_action_fixtures(capsys, name):
    status, rep = invoke_json(capsys, "curve-action", name)
    assert status == 0 and rep["signature"] == rep["expected_signature"]


def test_curve_action_signature_mismatch_exits_one(capsys):
    data = cli.load_input("curve_cyclic_six")
    data["expected_signature"] = "X_alg_closed(2,3,7)"
    status, rep = invoke_json(capsys, "curve-action", json.dumps(data))
    assert status == 1 and rep["passed"] is False


def test_wallpaper_single_and_all(capsys):
    status, rep = invoke_json(capsys, "wallpaper", "hexascope")
    assert status == 0 and rep["rows"][0]["type"] == "tubular"
    status, rep = invoke_json(capsys, "wallpaper", "--all", "--lambda", "3")
    assert status == 0 and rep["tubular_count"] == 13 and rep["lambda"] == "3"
    status, rep = invoke_json(capsys, "wallpaper", "15")
    assert status == 0 and rep["rows"][0]["tilting"] is False


def test_selftest_single_criterion(capsys):
    status, rep = invoke_json(capsys, "selftest", "--only", "9")
    assert status == 0 and [c["criterion"] for c in rep["criteria"]] == [9]


@pytest.mark.parametrize("argv", [
    ("order", "{not json"),
    ("order",),
    ("order", "--weights", "1,x"),
    ("wallpaper", "heptatrope"),
    ("wallpaper",),
    ("skew", '{"group": {"kind": "icosahedral"}, "generators": {}}'),
    ("coxeter", "no_such_fixture_or_file"),
    ("selftest", "--only", "one"),
])
def test_malformed_input_exits_two(capsys, argv):
    status, rep = invoke_json(capsys, *argv)
    assert status == 2 and "error" in rep and rep["schema"] == "hecurve/1"


def test_argument_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["order", "--N", "0", "--weights", "1"])
    assert exc.value.code == 2


def test_float_inputs_rejected(capsys):
    status, _ = invoke_json(capsys, "order", '{"weights": [1.5], "N": 2}')
    assert status == 2


def test_table_format(capsys):
    status, out = invoke(capsys, "order", "--weights", "1,1", "--format", "table")
    assert status == 0
    lines = out.splitlines()
    assert "dim: 7" in lines and "passed: true" in lines
    assert any(line.startswith("ext1[0]: ") for line in lines)


def test_bound_flag_and_environment(capsys, monkeypatch):
    _, rep = invoke_json(capsys, "squid", "squid_2222")
    assert rep["invariants"]["coxeter_order"] is not None
    _, rep = invoke_json(capsys, "squid", "squid_2222", "--bound", "1")
    assert rep["invariants"]["coxeter_order"] is None and rep["type"] == "wild_candidate"
    monkeypatch.setenv("HECURVE_COXETER_BOUND", "1")
    _, rep = invoke_json(capsys, "squid", "squid_2222")
    assert rep["invariants"]["coxeter_order"] is None
    monkeypatch.setenv("HECURVE_COXETER_BOUND", "many")
    status, rep = invoke_json(capsys, "squid", "squid_2222")
    assert status == 2


def test_stdin_input():
    proc = subprocess.run([sys.executable, "-m", "hecurve", "order", "-"], input='{"weights": [1], "N": 3}',
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["dim"] == 3


def test_output_is_byte_stable():
    argv = [sys.executable, "-m", "hecurve", "wallpaper", "--all"]
    env = {**os.environ, "PYTHONHASHSEED": "random"}
    first = subprocess.run(argv, capture_output=True, check=True, env=env).stdout
    second = subprocess.run(argv, capture_output=True, check=True, env=env).stdout
    assert first == second and first
