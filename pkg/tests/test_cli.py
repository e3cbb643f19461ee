import csv
import io
import json
import math

import pytest

from su2search.cli import CURVE_HEADER, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def curve(capsys, *extra):
    code, out, _ = run(capsys, "curve", *extra)
    assert code == 0
    return list(csv.DictReader(io.StringIO(out)))


def test_curve_header(capsys):
    code, out, _ = run(capsys, "curve", "--beta", "0.5", "--beta0", "0.1", "--steps", "3")
    assert out.splitlines()[0] == ",".join(CURVE_HEADER) == "theta,phi,f,w,residual,status"


def test_curve_equal_angles_unity_slope(capsys):
    rows = [r for r in curve(capsys, "--beta", "1e-4", "--beta0", "1e-4") if r["status"] == "ok"]
    assert len(rows) == 2000
    assert max(abs(float(r["phi"]) - float(r["theta"])) for r in rows) < 1e-6


def test_curve_close_but_not_identical(capsys):
    rows = [r for r in curve(capsys, "--beta", "1e-2", "--beta0", "1e-4") if r["status"] == "ok"]
    dev = max(abs(float(r["phi"]) - float(r["theta"])) for r in rows)
    assert 0 < dev < 0.1


def test_curve_rows_have_small_residual_and_hoyer_row(capsys):
    rows = curve(capsys, "--beta", "0.5", "--beta0", "0.1", "--alpha-plus-u", "0.1")
    assert rows[-1]["status"] == "hoyer"
    for r in rows:
        if r["status"] in ("ok", "hoyer"):
            assert abs(float(r["residual"])) < 1e-10


def test_curve_floats_round_trip(capsys):
    rows = curve(capsys, "--beta", "0.5", "--beta0", "0.1", "--steps", "4")
    for r in rows:
        assert len(r["theta"].replace("-", "").replace(".", "").lstrip("0").split("e")[0]) <= 17
    assert float(rows[0]["theta"]) == 1e-3


def test_curve_json_and_degrees(capsys):
    code, out, _ = run(capsys, "curve", "--beta", "30", "--beta0", "30", "--steps", "3",
                       "--theta-min", "90", "--theta-max", "270", "--format", "json", "--degrees")
    data = json.loads(out)
    assert data["schema_version"] == 1
    assert data["rows"][1]["theta"] == pytest.approx(180.0)
    assert data["rows"][1]["phi"] == pytest.approx(180.0)


def test_output_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["curve", "--beta", "0.7", "--beta0", "1e-4", "--output", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_plan_trivial(capsys):
    code, out, _ = run(capsys, "plan", "--beta", str(math.pi / 6), "--beta0", str(math.pi / 6))
    data = json.loads(out)
    assert code == 0
    assert data["plan"]["m"] == 1
    assert data["plan"]["phi"] == pytest.approx(math.pi, abs=1e-6)
    assert data["plan"]["theta"] == pytest.approx(math.pi, abs=1e-6)
    assert data["oracle_success"] == pytest.approx(1.0, abs=1e-12)


def test_plan_reference_comparison(capsys):
    code, out, _ = run(capsys, "plan", "--beta", "0.7", "--beta0", "1e-4")
    data = json.loads(out)
    assert data["eq23_m"] == 2 and data["oracle_m"] == 2
    assert data["reference_comparison"]["reference_m_achievable"] is False
    assert any("m_op = 1" in n for n in data["discrepancy_notes"])


def test_plan_fig_family_b(capsys):
    code, out, _ = run(capsys, "plan", "--beta", "0.5", "--beta0", "0.1", "--alpha-plus-u", "0.1")
    data = json.loads(out)
    assert code == 0 and data["oracle_success"] > 1 - 1e-9
    assert abs(math.remainder(data["oracle_delta"] - data["plan"]["delta"], 2 * math.pi)) < 1e-8


def test_plan_discrepancy_notes_when_counts_differ(capsys):
    code, out, _ = run(capsys, "plan", "--beta", "1.227", "--beta0", "0.029", "--alpha-plus-u", "4.445")
    data = json.loads(out)
    assert data["eq23_m"] != data["oracle_m"]
    assert any("differs" in n for n in data["discrepancy_notes"])


@pytest.mark.parametrize("kind,extra", [("walsh", ["--n", "2"]), ("walsh", ["--n", "4", "--tau", "5"]),
                                        ("random", ["--n", "8", "--seed", "42", "--tau", "3"])])
def test_simulate_auto(capsys, kind, extra):
    code, out, _ = run(capsys, "simulate", kind, *extra)
    data = json.loads(out)
    assert code == 0
    assert data["oracle_success"] == pytest.approx(1.0, abs=1e-9)
    assert data["phase_error"] < 1e-8


def test_simulate_walsh_n2(capsys):
    data = json.loads(run(capsys, "simulate", "walsh", "--n", "2")[1])
    assert data["plan"]["m"] == 1
    assert abs(data["oracle_success"] - 1.0) < 1e-12


def test_simulate_explicit_phases(capsys):
    code, out, _ = run(capsys, "simulate", "walsh", "--n", "2", "--phases", "3.14159,3.14159", "--m", "2")
    data = json.loads(out)
    assert code == 0 and data["plan"]["m"] == 2 and data["oracle_success"] < 0.5


def test_simulate_file(capsys, tmp_path):
    from su2search.ndim import build_random_unitary, save_unitary

    path = tmp_path / "u.txt"
    save_unitary(build_random_unitary(4, 1), path)
    code, out, _ = run(capsys, "simulate", "file", "--unitary-file", str(path), "--tau", "2")
    assert code == 0 and json.loads(out)["oracle_success"] > 1 - 1e-9


def test_simulate_bad_file_is_usage_error(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2\n1,0 0,0\n")
    code, _, err = run(capsys, "simulate", "file", "--unitary-file", str(path))
    assert code == 2 and "error" in err


def test_simulate_custom_start_state(capsys):
    code, out, _ = run(capsys, "simulate", "random", "--n", "8", "--seed", "3", "--tau", "1",
                       "--beta0", "0.3", "--u", "1.0")
    data = json.loads(out)
    assert code == 0
    assert data["reduction"]["beta0"] == pytest.approx(0.3, abs=1e-12)
    assert data["oracle_success"] > 1 - 1e-9


def test_verify_pass_and_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "kernel", "--samples", "50")
    assert code == 0 and out.strip().endswith("ALL PASS")
    code, out, _ = run(capsys, "verify", "--suite", "matching", "--samples", "20", "--tol-scale", "1e-8")
    assert code == 1 and "FAIL" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "ndim", "--samples", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and data["schema_version"] == 1


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.conf"
    cfg.write_text("# sweep\nbeta = 0.5\nbeta0 = 0.1\nsteps = 4\n")
    rows = curve(capsys, "--config", str(cfg))
    assert len(rows) == 5
    rows = curve(capsys, "--config", str(cfg), "--steps", "6")
    assert len(rows) == 7


@pytest.mark.parametrize(
    "argv",
    [
        ["curve", "--beta", "0.5"],
        ["curve", "--beta", "0.5", "--beta0", "0.1", "--steps", "1"],
        ["curve", "--beta", "0.5", "--beta0", "0.1", "--theta-min", "4", "--theta-max", "3"],
        ["verify", "--samples", "0"],
        ["simulate", "walsh", "--tau", "99"],
        ["simulate", "walsh", "--phases", "nope"],
        ["bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_bad_config_key(capsys, tmp_path):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("nonsense = 1\n")
    assert main(["curve", "--config", str(cfg)]) == 2


def test_domain_error_exit(capsys):
    code, _, err = run(capsys, "plan", "--beta", "2.0", "--beta0", "0.1")
    assert code == 3 and err
