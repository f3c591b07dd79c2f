"""CLI contract: flags, exit codes, and report formats that round-trip."""

import csv
import io
import json
import subprocess
import sys

import pytest

from hyper_rsp.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


# ---------------------------------------------------------------------------
# verify


def test_verify_pf_passes(capsys):
    code, out = run_cli(
        capsys, "verify", "--protocol", "pf", "--params", "0.6", "0.8", "0.28", "0.96",
        "--format", "json",
    )
    assert code == 0
    report = json.loads(out)
    assert report["all_pass"] is True
    assert len(report["branches"]) == 4
    for branch in report["branches"]:
        assert branch["fidelity_post"] == 1.0
        assert branch["probability"] == 0.25
        assert branch["correction_consistent"] is True


def test_verify_tb_basis_target(capsys):
    code, out = run_cli(
        capsys, "verify", "--protocol", "tb", "--params", "1", "0", "1", "0",
        "--format", "json",
    )
    assert code == 0
    assert len(json.loads(out)["branches"]) == 8


def test_verify_rejects_unnormalized_params(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["verify", "--protocol", "pf", "--params", "0.5", "0.5", "1", "0"])
    assert excinfo.value.code == 2


def test_verify_table_output(capsys):
    code, out = run_cli(
        capsys, "verify", "--protocol", "pf", "--params", "0.6", "0.8", "0.28", "0.96",
    )
    assert code == 0
    assert "verdict: PASS" in out
    assert "sz^p*sz^f" in out


def test_verify_csv_one_branch_per_row(capsys):
    code, out = run_cli(
        capsys, "verify", "--protocol", "tb", "--params", "0.6", "0.8", "0.6", "0.8",
        "--format", "csv",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    assert rows[0]["protocol"] == "tb"
    assert rows[0]["fidelity_post"] == "1"


def test_verify_random_params_reproducible(capsys):
    args = ("verify", "--protocol", "pf", "--params", "random", "--seed", "11",
            "--format", "json")
    code1, out1 = run_cli(capsys, *args)
    code2, out2 = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_verify_json_round_trips_bit_exactly(capsys):
    _, out = run_cli(
        capsys, "verify", "--protocol", "pf", "--params", "random", "--seed", "4",
        "--format", "json",
    )
    parsed = json.loads(out)
    assert json.loads(json.dumps(parsed)) == parsed
    # re-emitting the parsed numbers reproduces the exact text
    assert json.dumps(parsed, indent=2) + "\n" == out


def test_verify_failure_exits_one_and_names_first_row(capsys, monkeypatch):
    # An unreachable fidelity bar forces every branch to fail the check.
    import hyper_rsp.cli as cli_module

    monkeypatch.setattr(cli_module, "FIDELITY_TOL", -1e-9)
    code, out = run_cli(
        capsys, "verify", "--protocol", "pf", "--params", "0.6", "0.8", "0.28", "0.96",
        "--format", "json",
    )
    assert code == 1
    report = json.loads(out)
    assert report["all_pass"] is False
    assert report["first_failure"] == "H@a1"


def test_verify_output_file_golden(tmp_path, capsys):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    for path in (first, second):
        code, _ = run_cli(
            capsys, "verify", "--protocol", "tb", "--params", "0.6", "0.8", "0.28", "0.96",
            "--format", "json", "--output", str(path),
        )
        assert code == 0
    assert first.read_text() == second.read_text()


# ---------------------------------------------------------------------------
# sample


def test_sample_perfect_detectors(capsys):
    code, out = run_cli(
        capsys, "sample", "--protocol", "pf", "--params", "1", "0", "1", "0",
        "--eta-d", "1", "--trials", "1000", "--seed", "7", "--format", "json",
    )
    assert code == 0
    stats = json.loads(out)["stats"]
    assert stats["success_rate"] == 1.0
    assert stats["detected"] == 1000


def test_sample_lossy_detectors_near_square(capsys):
    code, out = run_cli(
        capsys, "sample", "--protocol", "tb", "--params", "0.6", "0.8", "0.28", "0.96",
        "--eta-d", "0.8", "--trials", "100000", "--seed", "7", "--format", "json",
    )
    assert code == 0
    stats = json.loads(out)["stats"]
    sigma = (0.64 * 0.36 / 100000) ** 0.5
    assert abs(stats["success_rate"] - 0.64) < 3 * sigma
    assert stats["mean_fidelity_on_detected"] == 1.0


def test_sample_zero_trials_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["sample", "--protocol", "pf", "--params", "1", "0", "1", "0",
              "--trials", "0"])
    assert excinfo.value.code == 2


def test_sample_bad_eta_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["sample", "--protocol", "pf", "--params", "1", "0", "1", "0",
              "--eta-d", "1.5"])
    assert excinfo.value.code == 2


def test_sample_csv(capsys):
    code, out = run_cli(
        capsys, "sample", "--protocol", "pf", "--params", "1", "0", "1", "0",
        "--eta-d", "0.5", "--trials", "2000", "--seed", "9", "--format", "csv",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert rows[0]["trials"] == "2000"


# ---------------------------------------------------------------------------
# efficiency


def test_efficiency_table_shows_exact_fractions(capsys):
    code, out = run_cli(capsys, "efficiency")
    assert code == 0
    assert "pf 1/3" in out
    assert "tb 2/7" in out


def test_efficiency_json_integer_fields(capsys):
    code, out = run_cli(capsys, "efficiency", "--format", "json")
    assert code == 0
    report = json.loads(out)["protocols"]
    assert report["pf"]["numerator"] == 1
    assert report["pf"]["denominator"] == 3
    assert report["tb"]["numerator"] == 2
    assert report["tb"]["denominator"] == 7
    assert report["pf"]["classical_bits"] == 2
    assert report["tb"]["classical_bits"] == 3
    assert isinstance(report["pf"]["numerator"], int)


# ---------------------------------------------------------------------------
# bad usage and the module entry point


def test_missing_params_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["verify", "--protocol", "pf"])
    assert excinfo.value.code == 2


def test_bad_params_count_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["verify", "--protocol", "pf", "--params", "1", "0", "1"])
    assert excinfo.value.code == 2


def test_module_entry_point_subprocess():
    result = subprocess.run(
        [sys.executable, "-m", "hyper_rsp", "efficiency"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert "pf 1/3" in result.stdout
