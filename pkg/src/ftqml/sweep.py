"""Seeded sweeps over noise grids, their summaries and threshold extraction."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from itertools import product
from pathlib import Path

import numpy as np
from scipy import stats

from .qed422.frames import LandscapeCache
from .trainer import DEFAULT_SEEDS, FINAL_WINDOW, TrainConfig, train

SCHEMA_VERSION = 1
PAPER_P_GRID = (0.001, 0.002, 0.0025, 0.003, 0.004, 0.005, 0.0075, 0.01)


@dataclass
class SweepConfig:
    base: TrainConfig = field(default_factory=TrainConfig)
    models: tuple = ("gate",)
    p_grid: tuple = (0.0,)
    rounds_grid: tuple = (0,)
    f_anc_grid: tuple = (1.0,)
    seeds: tuple = DEFAULT_SEEDS
    cache_dir: str | None = None

    def __post_init__(self):
        for name in ("models", "p_grid", "rounds_grid", "f_anc_grid", "seeds"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"{name} must not be empty")

    def cells(self) -> list:
        return list(product(self.models, self.p_grid, self.rounds_grid, self.f_anc_grid))


@dataclass
class CellSummary:
    model: str
    p: float
    rounds: int
    f_anc: float
    finals: list  # per-seed mean accuracy over the last FINAL_WINDOW iterations
    firsts: list  # per-seed mean accuracy over the first 10 iterations

    @property
    def mean(self) -> float:
        return float(np.mean(self.finals))

    @property
    def std(self) -> float:
        return float(np.std(self.finals, ddof=1)) if len(self.finals) > 1 else 0.0

    @property
    def sem(self) -> float:
        return self.std / math.sqrt(len(self.finals))

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(mean=self.mean, std=self.std)
        return d


@dataclass
class SweepSummary:
    cells: list
    seeds: tuple
    window: int = FINAL_WINDOW
    traces: dict = field(default_factory=dict, repr=False)  # (model, p, rounds, f_anc, seed) -> trace

    def cell(self, model: str, p: float, rounds: int, f_anc: float = 1.0) -> CellSummary:
        for c in self.cells:
            if c.model == model and math.isclose(c.p, p) and c.rounds == rounds and math.isclose(c.f_anc, f_anc):
                return c
        raise KeyError((model, p, rounds, f_anc))

    def grid(self, model: str, f_anc: float = 1.0) -> tuple:
        ps = sorted({c.p for c in self.cells if c.model == model and math.isclose(c.f_anc, f_anc)})
        rs = sorted({c.rounds for c in self.cells if c.model == model and math.isclose(c.f_anc, f_anc)})
        return ps, rs

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "window": self.window,
            "seeds": list(self.seeds),
            "cells": [c.to_dict() for c in self.cells],
        }

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSummary":
        cells = [
            CellSummary(c["model"], c["p"], c["rounds"], c["f_anc"], c["finals"], c["firsts"])
            for c in data["cells"]
        ]
        return cls(cells, tuple(data["seeds"]), data.get("window", FINAL_WINDOW))

    @classmethod
    def from_json(cls, path) -> "SweepSummary":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _run_cell(args) -> tuple:
    base, cell, seeds, cache_dir = args
    model, p, rounds, f_anc = cell
    cache = LandscapeCache(cache_dir)
    traces = []
    for s in seeds:
        cfg = replace(base, noise_model=model, p=p, rounds=rounds, f_anc=f_anc, seed=s)
        traces.append(train(cfg, cache))
    return cell, traces


def sweep(cfg: SweepConfig, jobs: int = 1, keep_traces: bool = True) -> SweepSummary:
    """Train every (model, p, rounds, f_anc) cell for every seed.

    Seeds index shared random streams, so cells differ only in the noise.
    """
    tasks = [(cfg.base, cell, tuple(cfg.seeds), cfg.cache_dir) for cell in cfg.cells()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_cell, tasks))
    else:
        results = [_run_cell(t) for t in tasks]
    cells, traces = [], {}
    for (model, p, rounds, f_anc), trs in results:
        cells.append(
            CellSummary(model, p, rounds, f_anc,
                        [t.final_accuracy() for t in trs],
                        [float(np.mean(t.accuracy[:10])) for t in trs])
        )
        if keep_traces:
            for s, t in zip(cfg.seeds, trs):
                traces[(model, p, rounds, f_anc, s)] = t
    return SweepSummary(cells, tuple(cfg.seeds), FINAL_WINDOW, traces)


# -- statistics -------------------------------------------------------------


@dataclass
class Comparison:
    diff: float  # mean(a) - mean(b)
    se: float
    significant: bool  # |diff| > z * se
    wilcoxon_p: float


def compare(a, b, z: float = 2.0, paired: bool = True) -> Comparison:
    """Two-sigma test on the difference of seed means, with a Wilcoxon p-value alongside."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if paired and a.shape == b.shape:
        d = a - b
        se = float(np.std(d, ddof=1) / math.sqrt(d.size)) if d.size > 1 else 0.0
        pval = _wilcoxon(d)
    else:
        se = math.sqrt(np.var(a, ddof=1) / a.size + np.var(b, ddof=1) / b.size)
        pval = float(stats.mannwhitneyu(a, b).pvalue) if np.ptp(np.r_[a, b]) > 0 else 1.0
    diff = float(a.mean() - b.mean())
    return Comparison(diff, se, abs(diff) > z * se, pval)


def _wilcoxon(d: np.ndarray) -> float:
    if np.all(d == 0):
        return 1.0
    return float(stats.wilcoxon(d).pvalue)


def is_flat(cell: CellSummary, z: float = 2.0) -> bool:
    """No significant change between the first 10 and the last-window accuracy."""
    return not compare(cell.finals, cell.firsts, z).significant


def plateau_accuracy(summary: SweepSummary, model: str, p: float, f_anc: float = 1.0, from_round: int = 2) -> float:
    _, rs = summary.grid(model, f_anc)
    vals = [summary.cell(model, p, r, f_anc).mean for r in rs if r >= from_round]
    if not vals:
        raise ValueError(f"no rounds >= {from_round} in the summary")
    return float(np.mean(vals))


def monotone_in_rounds(
    summary: SweepSummary, model: str, p: float, f_anc: float = 1.0, z: float = 2.0, paired: bool = False
) -> bool:
    """No round-to-round drop larger than ``z`` standard errors.

    The default error is the seed-to-seed spread of the two cells. ``paired=True``
    uses the paired difference instead, which shared random streams make much
    tighter.
    """
    _, rs = summary.grid(model, f_anc)
    cells = [summary.cell(model, p, r, f_anc) for r in rs]
    for a, b in zip(cells, cells[1:]):
        c = compare(b.finals, a.finals, z, paired)
        if c.diff < 0 and c.significant:
            return False
    return True


def extract_threshold(
    summary: SweepSummary,
    model: str,
    plateau_floor: float = 0.90,
    f_anc: float = 1.0,
    z: float = 2.0,
    paired: bool = False,
) -> float:
    """Largest grid ``p`` up to which every cell plateaus at or above the floor and rises monotonically."""
    ps, _ = summary.grid(model, f_anc)
    best = None
    for p in ps:
        if plateau_accuracy(summary, model, p, f_anc) >= plateau_floor and monotone_in_rounds(summary, model, p, f_anc, z, paired):
            best = p
        else:
            break
    if best is None:
        raise ValueError(f"no {model} cell reaches a plateau of {plateau_floor}")
    return best
