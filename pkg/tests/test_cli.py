import csv
import json

import pytest
from typer.testing import CliRunner

from scripts.qlw import app, run
from tests.conftest import EXPERIMENTS_DIR, KAC_PALJUTKIN_PATH

runner = CliRunner()
POISSON = str(EXPERIMENTS_DIR / "poisson_z2.toml")


def test_validate_builtin():
    result = runner.invoke(app, ["validate", "function:Z2"])
    assert result.exit_code == 0
    assert "Coassociativity" in result.stdout


def test_validate_kac_paljutkin():
    assert runner.invoke(app, ["validate", str(KAC_PALJUTKIN_PATH)]).exit_code == 0


def test_validate_broken_fixture(tmp_path):
    raw = json.loads(KAC_PALJUTKIN_PATH.read_text())
    raw["counit"][0] = 2.0
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(raw))
    result = runner.invoke(app, ["validate", str(path)])
    assert result.exit_code == 1
    assert "counit_homomorphism" in result.stdout


def test_validate_honours_tolerance_for_json_fixture(tmp_path):
    raw = json.loads(KAC_PALJUTKIN_PATH.read_text())
    raw["counit"][0] = [1.0 + 1e-6, 0.0]
    path = tmp_path / "slightly_off.json"
    path.write_text(json.dumps(raw))
    loose = runner.invoke(app, ["validate", str(path), "--tol", "1e-3"])
    assert loose.exit_code == 0
    assert runner.invoke(app, ["validate", str(path), "--tol", "1e-9"]).exit_code == 1


def test_validate_missing_fixture(tmp_path):
    assert runner.invoke(app, ["validate", str(tmp_path / "none.json")]).exit_code == 2


def test_semigroup_values():
    result = runner.invoke(app, ["semigroup", POISSON, "--t", "0,1"])
    assert result.exit_code == 0
    assert "0.432332358" in result.stdout


def test_semigroup_bad_times():
    assert runner.invoke(app, ["semigroup", POISSON, "--t", "soon"]).exit_code == 2


def test_walk_table():
    result = runner.invoke(app, ["walk", POISSON])
    assert result.exit_code == 0
    assert "0.446312908" in result.stdout
    assert "Dense cross-check" in result.stdout


def test_converge_writes_csv(tmp_path):
    output = tmp_path / "poisson.csv"
    result = runner.invoke(app, ["converge", POISSON, "--output", str(output), "--jobs", "2"])
    assert result.exit_code == 0
    with output.open() as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 8
    assert float(rows[0]["abs_error"]) == pytest.approx(0.01398, abs=1e-4)
    assert float(rows[-1]["abs_error"]) <= 2e-4
    assert all(row["wall_time_us"] == "0" for row in rows)


def test_converge_is_byte_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert runner.invoke(app, ["converge", POISSON, "-o", str(first)]).exit_code == 0
    assert runner.invoke(app, ["converge", POISSON, "-o", str(second), "--jobs", "4"]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()


def test_converge_json_with_multiple_cases(tmp_path):
    output = tmp_path / "kp.json"
    config = str(EXPERIMENTS_DIR / "kac_paljutkin.toml")
    result = runner.invoke(app, ["converge", config, "-o", str(output), "--format", "json", "--seed", "9"])
    assert result.exit_code == 0
    report = json.loads((tmp_path / "kp_coherent_E12.json").read_text())
    assert report["seed"] == 9
    assert report["testcase"] == "coherent_E12"
    assert len(report["records"]) == 8
    assert (tmp_path / "kp_coherent_E11.json").exists()


def test_beta_bounds_poisson(tmp_path):
    output = tmp_path / "bounds.json"
    result = runner.invoke(app, ["beta-bounds", POISSON, "--output", str(output)])
    assert result.exit_code == 0
    assert "exact 0" in result.stdout
    fits = {entry["label"]: entry for entry in json.loads(output.read_text())["fits"]}
    assert fits["e1"]["exact_zero"] is True
    assert fits["e3"]["fit"]["slope"] == pytest.approx(1.5, abs=0.2)
    assert fits["e4"]["fit"]["slope"] == pytest.approx(1.0, abs=0.2)


def test_beta_bounds_violation(tmp_path):
    text = (EXPERIMENTS_DIR / "poisson_z2.toml").read_text().replace("e4_slope = 1.0", "e4_slope = 2.0")
    path = tmp_path / "tight.toml"
    path.write_text(text)
    result = runner.invoke(app, ["beta-bounds", str(path)])
    assert result.exit_code == 1
    assert "e4" in result.stdout


def test_config_errors_exit_two(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text('name = "bad"\nfixture = "function:Z2"\ncolour = "blue"\n[triple]\npreset = "poisson_z2"\n')
    assert runner.invoke(app, ["converge", str(path)]).exit_code == 2
    assert runner.invoke(app, ["walk", str(tmp_path / "absent.toml")]).exit_code == 2


def test_walk_requires_walk_section():
    assert runner.invoke(app, ["walk", str(EXPERIMENTS_DIR / "group_z3.toml")]).exit_code == 0
    assert runner.invoke(app, ["walk", str(EXPERIMENTS_DIR / "kac_paljutkin.toml"), "--gns"]).exit_code == 0


def test_run_returns_exit_codes():
    assert run(["validate", "group:S3"]) == 0
    assert run(["validate", "group:Z9"]) == 2
    assert run(["no-such-command"]) == 2
    assert run(["validate"]) == 2
    assert run(["validate", "group:S3", "--no-such-flag"]) == 2
    assert run(["validate", str(KAC_PALJUTKIN_PATH), "--tol", "1e-3"]) == 0
