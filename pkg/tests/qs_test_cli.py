"""
Tests for the command-line frontend (qsgps.cli).

Each test calls cli.main with an argument list and reads the report from
captured stdout. Input files are written to pytest's tmp_path. Exit codes:
0 success, 2 usage, 3 config, 4 solver, 5 protocol run without a fix.
"""

import json
import math

import pytest

from conftest import truth_on_equator, well_spread_satellites

from qsgps import cli
from qsgps.managers.command_managers import CommandRegistry
from qsgps.models.command import CommandSpec


def run_cli(capsys, *argv):
    status = cli.main(list(argv))
    return status, capsys.readouterr().out


def run_json(capsys, *argv):
    status, out = run_cli(capsys, *argv)
    return status, json.loads(out)


def write_json(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def scenario(count=4, bias=1e-3):
    truth = truth_on_equator()
    return {
        "satellites": [s.to_dict() for s in well_spread_satellites(count)],
        "truth": {"position": [truth.x, truth.y, truth.z], "bias_s": bias},
    }


class TestSubcommands:
    def test_verify_code(self, capsys):
        status, report = run_json(capsys, "verify-code", "--inputs", "5")
        assert status == 0
        assert report["syndrome_bijective"] is True
        assert report["circuit"]["census"] == {"H": 4, "CNOT": 8}
        assert report["circuit"]["pauli_frame"] == "+IIYIY"
        assert report["circuit"]["drawn_output_expectations"] == pytest.approx([-1.0, 1.0, 1.0, -1.0], abs=1e-12)
        assert report["encoding_fidelity"]["min"] >= 1 - 1e-10
        assert report["logical_expectations"]["zero_L"] == pytest.approx([1.0] * 4, abs=1e-12)

    def test_bell_i5(self, capsys):
        status, report = run_json(capsys, "bell", "--functional", "i5", "--shots", "2000", "--seed", "1")
        assert status == 0
        assert report["exact"] == pytest.approx(4 * math.sqrt(2) + 1, abs=1e-10)
        assert abs(report["sampled"]["estimate"] - report["exact"]) <= 5 * report["sampled"]["stderr"]
        assert report["sos_residual"] < 1e-10

    def test_bell_chsh_table(self, capsys):
        status, out = run_cli(capsys, "bell", "--functional", "chsh", "--shots", "100", "--format", "table")
        assert status == 0
        assert "Functional: CHSH" in out
        assert "Exact value: 2.8284271247" in out

    def test_classical_bound(self, capsys):
        status, report = run_json(capsys, "classical-bound", "--functional", "i5")
        assert status == 0
        assert report["classical_maximum"] == 5
        assert len(report["assignment"]) == 5
        assert report["product_state_value"] <= 5 + 1e-9

    def test_attack_sweep_json(self, capsys):
        status, report = run_json(capsys, "attack-sweep", "--attacks", "all-single-pauli", "--threshold", "5")
        assert status == 0
        rows = report["rows"]
        assert len(rows) == 15
        assert not any(r["certified"] for r in rows)
        assert max(r["i5_value"] for r in rows) == pytest.approx(4 * math.sqrt(2) - 1, abs=1e-10)

    def test_attack_sweep_csv(self, capsys):
        status, out = run_cli(capsys, "attack-sweep", "--attacks", "all-single-pauli", "--correct", "--format", "csv")
        assert status == 0
        lines = out.strip().split("\n")
        assert lines[0] == "attack,i5_value,threshold,certified,syndrome,corrected,correction,corrected_i5,restored"
        assert len(lines) == 16
        assert lines[1].startswith("X1,")
        assert lines[1].endswith(",True")

    def test_attack_sweep_table(self, capsys):
        status, out = run_cli(capsys, "attack-sweep", "--attacks", "all-single-pauli", "--correct", "--format", "table")
        assert status == 0
        lines = out.strip().split("\n")
        assert lines[0] == "Threshold: 5"
        assert len(lines) == 17
        assert lines[2].split() == ["X1", "1.000000", "False", "0001", "X1", "6.656854", "True"]

    def test_attack_sweep_table_without_correction(self, capsys):
        status, out = run_cli(capsys, "attack-sweep", "--attacks", "none", "--format", "table")
        assert status == 0
        assert out.strip().split("\n")[2].split() == ["none", "6.656854", "True"]

    def test_attack_sweep_from_file(self, capsys, tmp_path):
        path = write_json(tmp_path, "attacks.json", {"attacks": [{"type": "depolarizing", "p": 0.5}]})
        status, report = run_json(capsys, "attack-sweep", "--attacks", path)
        assert status == 0
        assert report["rows"][0]["i5_value"] == pytest.approx(0.5 * (4 * math.sqrt(2) + 1), abs=1e-10)

    def test_hardware_superconducting(self, capsys):
        status, report = run_json(capsys, "hardware", "--profile", "superconducting")
        assert status == 0
        (row,) = report["profiles"]
        assert row["t_total_s"] == pytest.approx(216.4e-9, rel=1e-12)
        assert row["fidelity_bound"] == pytest.approx(0.984, abs=5e-4)
        assert report["circuit"]["drawn"] == {"n_1q": 4, "n_2q": 8, "d_1q": 2, "d_2q": 8}

    def test_hardware_table(self, capsys):
        status, out = run_cli(capsys, "hardware", "--format", "table")
        assert status == 0
        assert "216.4 ns" in out
        assert "98.4%" in out
        assert "482.64 us" in out
        assert "99.8%" in out

    def test_hardware_profile_file(self, capsys, tmp_path):
        path = write_json(tmp_path, "hw.json", {"name": "Lab", "t_1q_s": 1e-8, "t_2q_s": 1e-7, "f_1q": 1.0, "f_2q": 1.0})
        status, report = run_json(capsys, "hardware", "--profile-file", path)
        assert status == 0
        assert report["profiles"][0]["t_total_s"] == pytest.approx(2 * 1e-8 + 8 * 1e-7)
        assert report["profiles"][0]["fidelity_bound"] == 1.0

    def test_position_from_scenario(self, capsys, tmp_path):
        path = write_json(tmp_path, "scenario.json", scenario())
        status, report = run_json(capsys, "position", "--scenario", path)
        assert status == 0
        assert report["fix"]["converged"] is True
        assert report["position_error_m"] < 1e-3
        assert report["bias_error_s"] < 1e-11

    def test_position_random(self, capsys):
        status, report = run_json(capsys, "position", "--random", "6", "--seed", "4")
        assert status == 0
        assert len(report["satellites"]) == 6
        assert report["position_error_m"] < 1e-3

    def test_protocol_run(self, capsys, tmp_path):
        data = scenario()
        data.update({"hardware": "ideal", "shots_per_term": 2000})
        path = write_json(tmp_path, "protocol.json", data)
        status, report = run_json(capsys, "protocol-run", "--config", path, "--seed", "11")
        assert status == 0
        assert report["seed"] == 11
        assert len(report["rounds"]) == 4
        assert report["fix"] is not None
        assert report["detection_events"] == []

    def test_protocol_run_without_fix(self, capsys, tmp_path):
        data = scenario()
        data.update({
            "shots_per_term": 2000,
            "attacks": {"S1": {"type": "pauli", "errors": [{"qubit": 1, "letter": "X"}]}},
        })
        path = write_json(tmp_path, "protocol.json", data)
        status, report = run_json(capsys, "protocol-run", "--config", path)
        assert status == cli.EXIT_NO_FIX
        assert report["fix"] is None
        assert report["detection_events"] == [{"round_index": 0, "satellite_id": "S1", "reason": "uncertified"}]

    def test_protocol_table(self, capsys, tmp_path):
        data = scenario()
        data.update({"shots_per_term": 200, "jamming_probability": 1.0})
        path = write_json(tmp_path, "protocol.json", data)
        status, out = run_cli(capsys, "protocol-run", "--config", path, "--format", "table")
        assert status == cli.EXIT_NO_FIX
        assert "jammed" in out
        assert "No fix" in out


class TestReproducibility:
    def test_identical_bytes_for_identical_arguments(self, capsys):
        _, first = run_cli(capsys, "bell", "--shots", "500", "--seed", "42")
        _, second = run_cli(capsys, "bell", "--shots", "500", "--seed", "42")
        assert first == second

    def test_seed_changes_the_sample(self, capsys):
        _, first = run_json(capsys, "bell", "--shots", "500", "--seed", "1")
        _, second = run_json(capsys, "bell", "--shots", "500", "--seed", "2")
        assert first["sampled"]["estimate"] != second["sampled"]["estimate"]

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        status, out = run_cli(capsys, "classical-bound", "--functional", "chsh", "-o", str(target))
        assert status == 0
        assert out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["classical_maximum"] == 2


class TestErrors:
    def test_unknown_flag(self, capsys):
        status, _ = run_cli(capsys, "bell", "--bogus")
        assert status == cli.EXIT_USAGE

    def test_unknown_subcommand(self, capsys):
        status, _ = run_cli(capsys, "teleport")
        assert status == cli.EXIT_USAGE

    def test_csv_only_for_the_sweep(self, capsys):
        status, _ = run_cli(capsys, "bell", "--format", "csv")
        assert status == cli.EXIT_USAGE

    def test_csv_for_protocol_run(self, capsys):
        status, _ = run_cli(capsys, "protocol-run", "--config", "unused.json", "--format", "csv")
        assert status == cli.EXIT_USAGE

    def test_missing_config_file(self, capsys, tmp_path):
        status, report = run_json(capsys, "protocol-run", "--config", str(tmp_path / "absent.json"))
        assert status == cli.EXIT_CONFIG
        assert report["error"]["type"] == "ConfigError"

    def test_malformed_scenario(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("[1, 2", encoding="utf-8")
        status, report = run_json(capsys, "position", "--scenario", str(path))
        assert status == cli.EXIT_CONFIG
        assert "message" in report["error"]

    def test_solver_failure(self, capsys, tmp_path):
        path = write_json(tmp_path, "scenario.json", scenario(count=3))
        status, report = run_json(capsys, "position", "--scenario", path)
        assert status == cli.EXIT_SOLVER
        assert report["error"]["type"] == "DegenerateGeometryError"

    def test_seed_out_of_range(self, capsys):
        status, report = run_json(capsys, "bell", "--seed", str(2 ** 64))
        assert status == cli.EXIT_CONFIG
        assert report["error"]["type"] == "ConfigError"

    def test_failed_run_does_not_write_the_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        status, _ = run_cli(capsys, "protocol-run", "--config", str(tmp_path / "absent.json"), "-o", str(target))
        assert status == cli.EXIT_CONFIG
        assert not target.exists()


class TestRegistry:
    def test_every_subcommand_has_a_manager(self):
        registry = CommandRegistry()
        for name in ("verify-code", "bell", "classical-bound", "attack-sweep", "hardware", "position", "protocol-run"):
            assert registry.find_manager(CommandSpec(name)) is not None

    def test_run_command_returns_status_and_text(self):
        status, text = cli.run_command(CommandSpec("classical-bound", {"functional": "chsh"}))
        assert status == 0
        assert json.loads(text)["classical_maximum"] == 2
