import json
import subprocess
import sys

import pytest

from ftqml.cli import run_cli
from ftqml.sweep import SweepSummary
from ftqml.trainer import TrainingTrace


@pytest.fixture(autouse=True)
def _out(tmp_path, monkeypatch):
    monkeypatch.setenv("FTQML_OUTPUT_DIR", str(tmp_path / "out"))
    return tmp_path / "out"


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_estimate_row_one(capsys):
    assert run_cli(["estimate", "--budget", "1e-3", "--layers", "50", "--qubits", "10"]) == 0
    doc = _json(capsys)
    assert doc["code_distance"] == 15 and doc["data_qubits"] == 13500
    assert doc["schema_version"] == 1


def test_estimate_infeasible(capsys):
    assert run_cli(["estimate", "--budget", "1e-9", "--p-phys", "9e-3"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "infeasible" and "T gates" in err["message"]


def test_parse_errors_exit_two(capsys):
    assert run_cli(["estimate", "--budget", "2"]) == 2
    assert json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error"] == "usage"
    assert run_cli(["frobnicate"]) == 2
    assert run_cli(["train-parity", "--rounds", "9"]) == 1


def test_config_file_and_override(tmp_path, capsys):
    ini = tmp_path / "c.ini"
    ini.write_text("[estimate]\nbudget = 1e-4\nlayers = 50\n")
    assert run_cli(["--config", str(ini), "estimate"]) == 0
    assert _json(capsys)["code_distance"] == 17
    assert run_cli(["--config", str(ini), "estimate", "--budget", "1e-3"]) == 0
    assert _json(capsys)["code_distance"] == 15
    ini.write_text("[estimate]\nbudgett = 1e-4\n")
    assert run_cli(["--config", str(ini), "estimate"]) == 2
    ini.write_text("[estimate]\nbudget = 7\n")
    assert run_cli(["--config", str(ini), "estimate"]) == 2


def test_train_parity_noiseless(capsys, _out):
    assert run_cli(["train-parity", "--noise", "gate", "--p", "0", "--rounds", "0", "--seed", "7"]) == 0
    doc = _json(capsys)
    assert doc["last_accuracy"] == 1.0
    tr = TrainingTrace.from_csv(doc["trace"])
    assert tr.accuracy[-1] == 1.0 and tr.final_accuracy() == doc["final_accuracy"]


def test_master_seed_reproducible(tmp_path, capsys):
    ini = tmp_path / "c.ini"
    ini.write_text("[general]\nmaster_seed = 3\n[train-parity]\np = 0.005\niterations = 10\n")
    run_cli(["--config", str(ini), "train-parity"])
    a = _json(capsys)
    run_cli(["--config", str(ini), "train-parity"])
    b = _json(capsys)
    assert a["config"]["seed"] == 3 and a["theta"] == b["theta"]


def test_debug_log_is_json_lines(tmp_path, capsys):
    log = tmp_path / "debug.jsonl"
    run_cli(["--debug-log", str(log), "train-parity", "--iterations", "5"])
    lines = [json.loads(l) for l in log.read_text().splitlines()]
    assert len(lines) == 5 and lines[0]["iteration"] == 0


def test_sweep_emits_summary(capsys, _out):
    argv = ["--jobs", "1", "sweep", "--models", "gate", "--p-grid", "0,0.002", "--rounds", "0,2",
            "--seeds", "0,1", "--iterations", "10"]
    assert run_cli(argv) == 0
    doc = _json(capsys)
    summary = SweepSummary.from_json(doc["summary"])
    assert len(summary.cells) == 4
    assert doc["thresholds"]["gate"] in (None, 0.0, 0.002)
    assert len(list((_out / "traces").glob("*.csv"))) == 8


def test_emit_fixtures(capsys, _out):
    assert run_cli(["emit-fixtures"]) == 0
    doc = _json(capsys)
    data = json.loads(open(doc["path"]).read())
    assert data["schema_version"] == 1 and len(data["rows"]) == 4


def test_validate_subcommand(capsys):
    assert run_cli(["validate", "--skip-frames"]) == 0
    assert _json(capsys)["passed"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ftqml", "estimate", "--budget", "1e-3"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["data_qubits"] == 13500
