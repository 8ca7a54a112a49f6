"""Command-line entry point: ``ftqml <subcommand> [options]``.

Options may also come from an INI file (``--config``) with one section per
subcommand plus an optional ``[general]`` section; flags win over the file.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import costmodel as cm
from . import validation
from .noisechan import TCountScaling
from .qed422.frames import LandscapeCache
from .sweep import PAPER_P_GRID, SweepConfig, extract_threshold, sweep
from .trainer import TrainConfig, train

SCHEMA_VERSION = 1
ENV_OUTPUT = "FTQML_OUTPUT_DIR"
log = logging.getLogger("ftqml")


class CliError(Exception):
    """Bad usage detected after argparse (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("usage", message)
        sys.exit(2)


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def _floats(text: str) -> tuple:
    return tuple(float(x) for x in str(text).split(",") if x.strip())


def _ints(text: str) -> tuple:
    return tuple(int(x) for x in str(text).split(",") if x.strip())


def _words(text: str) -> tuple:
    return tuple(x.strip() for x in str(text).split(",") if x.strip())


def _prob(text: str) -> float:
    v = float(text)
    if not 0.0 <= v < 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not a probability in [0, 1)")
    return v


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"{text!r} is not a boolean")


# (flag, dest, type, default, help) per subcommand; dest doubles as the INI key
OPTIONS = {
    "estimate": [
        ("--budget", "budget", _prob, 1e-3, "total error budget"),
        ("--layers", "layers", int, 50, "variational layers"),
        ("--qubits", "qubits", int, 10, "algorithmic qubits"),
        ("--p-phys", "p_phys", _prob, 1e-3, "physical error rate"),
        ("--scaling", "scaling", str, "classic", "T-count scaling: classic or improved"),
        ("--distillation", "distillation", str, None, "pin a catalog entry by name"),
        ("--no-distill", "no_distill", _bool, False, "inject raw magic states"),
        ("--format", "format", str, "json", "json or table"),
    ],
    "train-parity": [
        ("--noise", "noise", str, "gate", "gate or env"),
        ("--p", "p", _prob, 0.0, "Pauli error rate"),
        ("--rounds", "rounds", int, 0, "syndrome rounds 0..5"),
        ("--f-anc", "f_anc", float, 1.0, "ancilla rate fraction"),
        ("--seed", "seed", int, None, "training seed (defaults to master_seed)"),
        ("--iterations", "iterations", int, 100, "training iterations"),
        ("--shots", "shots", int, 1000, "shots per circuit evaluation"),
        ("--lr", "lr", float, 0.3, "learning rate"),
        ("--sampling", "noise_sampling", str, "per_circuit", "per_circuit or per_shot noise realizations"),
    ],
    "train-qvc": [
        ("--qubits", "qubits", int, 4, "qubits"),
        ("--layers", "layers", int, 5, "layers"),
        ("--classes", "classes", int, 4, "classes"),
        ("--p-depol", "p_depol", _prob, 0.0, "depolarizing strength after each rotation"),
        ("--seed", "seed", int, None, "training seed (defaults to master_seed)"),
        ("--iterations", "iterations", int, 20, "training iterations"),
        ("--shots", "shots", int, 0, "shots per circuit (0 = exact)"),
        ("--batch-size", "batch_size", int, 50, "batch size"),
        ("--samples", "samples", int, 200, "dataset size"),
        ("--lr", "lr", float, 0.005, "learning rate"),
        ("--dataset", "dataset", str, "blobs", "blobs, digits, or a CSV path"),
        ("--classical-layer", "classical_layer", _bool, False, "add a trainable dense head"),
    ],
    "sweep": [
        ("--models", "models", _words, ("gate", "env"), "comma-separated noise models"),
        ("--p-grid", "p_grid", _floats, PAPER_P_GRID, "comma-separated Pauli error rates"),
        ("--rounds", "rounds", _ints, (0, 1, 2, 3, 4, 5), "comma-separated round counts"),
        ("--f-anc", "f_anc", _floats, (1.0,), "comma-separated ancilla fractions"),
        ("--seeds", "seeds", _ints, tuple(range(10)), "comma-separated seeds"),
        ("--iterations", "iterations", int, 100, "training iterations"),
        ("--shots", "shots", int, 1000, "shots per evaluation"),
        ("--sampling", "noise_sampling", str, "per_circuit", "per_circuit or per_shot noise realizations"),
        ("--threshold", "threshold", _bool, True, "report thresholds per model"),
    ],
    "validate": [
        ("--skip-frames", "skip_frames", _bool, False, "skip the trajectory cross-check"),
    ],
    "emit-fixtures": [],
}
GENERAL = [
    ("--master-seed", "master_seed", int, 0, "seed used when a subcommand has none"),
    ("--output-dir", "output_dir", str, None, f"output directory (default ${ENV_OUTPUT} or ./ftqml-out)"),
    ("--jobs", "jobs", int, 1, "worker processes for sweeps"),
    ("--debug-log", "debug_log", str, None, "JSON-lines debug log path"),
]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ftqml", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="INI file with defaults")
    for flag, dest, typ, _default, hlp in GENERAL:
        parser.add_argument(flag, dest=dest, type=typ, default=None, help=hlp)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, opts in OPTIONS.items():
        sp = sub.add_parser(name)
        for flag, dest, typ, _default, hlp in opts:
            if typ is _bool:
                sp.add_argument(flag, dest=dest, nargs="?", const=True, default=None, type=_bool, help=hlp)
            else:
                sp.add_argument(flag, dest=dest, type=typ, default=None, help=hlp)
    return parser


def _load_config(path: str | None, command: str) -> dict:
    """Typed values from the INI file for ``[general]`` and the subcommand's section."""
    if not path:
        return {}
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise CliError(f"cannot read config file {path}")
    known = {"general": {d: t for _f, d, t, _x, _h in GENERAL}}
    known.update({name: {d: t for _f, d, t, _x, _h in opts} for name, opts in OPTIONS.items()})
    out = {}
    for section in cp.sections():
        if section not in known:
            raise CliError(f"unknown config section [{section}]")
        for key, raw in cp.items(section):
            if key not in known[section]:
                raise CliError(f"unknown key {key!r} in [{section}]")
            if section in ("general", command):
                try:
                    out[key] = known[section][key](raw)
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    raise CliError(f"[{section}] {key}: {exc}") from exc
    return out


def _resolve(args: argparse.Namespace) -> dict:
    file_vals = _load_config(args.config, args.command)
    opts = {}
    for _flag, dest, _typ, default, _hlp in GENERAL + OPTIONS[args.command]:
        flag_val = getattr(args, dest, None)
        opts[dest] = flag_val if flag_val is not None else file_vals.get(dest, default)
    return opts


class _JsonLines(logging.Formatter):
    def format(self, record):
        payload = {"t": round(record.created, 3), "level": record.levelname, "msg": record.getMessage()}
        payload.update(getattr(record, "data", {}))
        return json.dumps(payload)


def _setup_log(path: str | None) -> None:
    log.handlers.clear()
    log.propagate = False
    if path:
        h = logging.FileHandler(path)
        h.setFormatter(_JsonLines())
        log.addHandler(h)
        log.setLevel(logging.DEBUG)
    else:
        log.addHandler(logging.NullHandler())


def _output_dir(opts: dict) -> Path:
    d = Path(opts["output_dir"] or os.environ.get(ENV_OUTPUT) or "ftqml-out")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2))


def cmd_estimate(o: dict) -> dict:
    if o["format"] not in ("json", "table"):
        raise CliError("--format must be json or table")
    shape = cm.CircuitShape(q_alg=o["qubits"], layers=o["layers"])
    params = cm.CodeParams(p_phys=o["p_phys"])
    est = cm.estimate(
        shape,
        o["budget"],
        params,
        distill=not o["no_distill"],
        distillation=o["distillation"],
        scaling=TCountScaling(o["scaling"]),
    )
    doc = est.to_dict()
    doc["inputs"] = {"budget": o["budget"], "layers": o["layers"], "qubits": o["qubits"], "p_phys": o["p_phys"]}
    if o["format"] == "table":
        print(est.table())
    else:
        print(json.dumps(doc, indent=2))
    if o["output_dir"]:
        _write_json(_output_dir(o) / "estimate.json", doc)
    return doc


def _seed(o: dict) -> int:
    return o["seed"] if o.get("seed") is not None else o["master_seed"]


def cmd_train_parity(o: dict) -> dict:
    cfg = TrainConfig.parity(
        noise_model=o["noise"], p=o["p"], rounds=o["rounds"], f_anc=o["f_anc"], seed=_seed(o),
        iterations=o["iterations"], shots=o["shots"], learning_rate=o["lr"], noise_sampling=o["noise_sampling"],
    )
    out = _output_dir(o)
    tr = train(cfg, LandscapeCache(out / "landscapes"))
    for i, a in enumerate(tr.accuracy):
        log.debug("iteration", extra={"data": {"iteration": i, "accuracy": a, "loss": tr.loss[i]}})
    path = out / f"trace-parity-{cfg.digest()}-s{cfg.seed}.csv"
    tr.to_csv(path)
    doc = {"schema_version": SCHEMA_VERSION, "trace": str(path), "final_accuracy": tr.final_accuracy(),
           "last_accuracy": tr.accuracy[-1], "theta": tr.params[0], "config": vars(cfg)}
    print(json.dumps(doc, indent=2))
    return doc


def cmd_train_qvc(o: dict) -> dict:
    cfg = TrainConfig.qvc(
        n_qubits=o["qubits"], n_layers=o["layers"], n_classes=o["classes"], p_depol=o["p_depol"],
        seed=_seed(o), iterations=o["iterations"], shots=o["shots"], batch_size=o["batch_size"],
        n_samples=o["samples"], learning_rate=o["lr"], dataset=o["dataset"], classical_layer=o["classical_layer"],
    )
    tr = train(cfg)
    path = _output_dir(o) / f"trace-qvc-{cfg.digest()}-s{cfg.seed}.csv"
    tr.to_csv(path)
    doc = {"schema_version": SCHEMA_VERSION, "trace": str(path), "mean_avg_sq_gradient":
           sum(tr.avg_sq_gradient) / len(tr), "last_accuracy": tr.accuracy[-1], "config": vars(cfg)}
    print(json.dumps(doc, indent=2))
    return doc


def cmd_sweep(o: dict) -> dict:
    out = _output_dir(o)
    base = TrainConfig.parity(iterations=o["iterations"], shots=o["shots"], noise_sampling=o["noise_sampling"])
    cfg = SweepConfig(base, o["models"], o["p_grid"], o["rounds"], o["f_anc"], o["seeds"], str(out / "landscapes"))
    t0 = time.time()
    summary = sweep(cfg, jobs=max(1, o["jobs"]))
    log.info("sweep done", extra={"data": {"seconds": time.time() - t0, "cells": len(summary.cells)}})
    trace_dir = out / "traces"
    trace_dir.mkdir(exist_ok=True)
    for (model, p, r, f, s), tr in summary.traces.items():
        tr.to_csv(trace_dir / f"{model}-p{p:g}-r{r}-f{f:g}-s{s}.csv")
    doc = summary.to_dict()
    if o["threshold"]:
        doc["thresholds"] = {}
        for m in o["models"]:
            try:
                doc["thresholds"][m] = extract_threshold(summary, m)
            except (ValueError, KeyError) as exc:
                doc["thresholds"][m] = None
                log.info("no threshold", extra={"data": {"model": m, "reason": str(exc)}})
    _write_json(out / "sweep-summary.json", doc)
    print(json.dumps({k: v for k, v in doc.items() if k != "cells"} | {"summary": str(out / "sweep-summary.json")}, indent=2))
    return doc


def cmd_validate(o: dict) -> dict:
    checks = validation.run_all(include_frames=not o["skip_frames"])
    doc = {"schema_version": SCHEMA_VERSION, "passed": all(c.passed for c in checks),
           "checks": [{k: (bool(v) if k == "passed" else v) for k, v in c.to_dict().items()} for c in checks]}
    print(json.dumps(doc, indent=2, default=float))
    if not doc["passed"]:
        raise RuntimeError("validation failed: " + ", ".join(c.name for c in checks if not c.passed))
    return doc


def cmd_emit_fixtures(o: dict) -> dict:
    path = _output_dir(o) / "table1-fixtures.json"
    doc = cm.emit_fixtures(path)
    print(json.dumps({"schema_version": SCHEMA_VERSION, "path": str(path), "rows": len(doc["rows"])}))
    return doc


COMMANDS = {
    "estimate": cmd_estimate,
    "train-parity": cmd_train_parity,
    "train-qvc": cmd_train_qvc,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
    "emit-fixtures": cmd_emit_fixtures,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = _resolve(args)
        _setup_log(opts["debug_log"])
        COMMANDS[args.command](opts)
    except CliError as exc:
        _emit_error("usage", str(exc))
        return 2
    except cm.InfeasibleBudget as exc:
        _emit_error("infeasible", str(exc))
        return 1
    except (ValueError, KeyError, RuntimeError, OSError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli())
