"""Surface-code spacetime cost model for layered variational circuits.

Counting conventions: ``patches = 3 * q_alg`` logical patches, each occupying
``2 d^2`` physical qubits, so data qubits are ``6 q_alg d^2``;
``N_L = patches * logical cycles`` and a logical cycle takes ``0.4 d`` us.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .noisechan import TCountScaling, t_count_per_rotation

SCHEMA_VERSION = 1
MAX_DISTANCE = 99


class InfeasibleBudget(ValueError):
    """No supported code distance or distillation unit meets the error budget."""


@dataclass(frozen=True)
class BudgetSplit:
    epsilon_total: float
    epsilon_log: float
    epsilon_dis: float
    epsilon_syn: float


def split_budget(epsilon_total: float, policy: Sequence[float] = (1 / 3, 1 / 3, 1 / 3)) -> BudgetSplit:
    if not 0.0 < epsilon_total < 1.0:
        raise ValueError("total budget must lie in (0, 1)")
    w = [float(x) for x in policy]
    if len(w) != 3 or min(w) < 0 or abs(sum(w) - 1.0) > 1e-12:
        raise ValueError("budget weights must be three non-negative numbers summing to 1")
    log = epsilon_total * w[0]
    dis = epsilon_total * w[1]
    syn = epsilon_total - log - dis if w[2] > 0 else 0.0
    return BudgetSplit(epsilon_total, log, dis, syn)


@dataclass(frozen=True)
class CodeParams:
    p_phys: float = 1e-3
    p_star: float = 1e-2
    coeff: float = 0.03
    cycle_time_per_distance: float = 0.4  # microseconds
    qubits_per_patch_d2: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.p_phys < self.p_star:
            raise ValueError("need 0 < p_phys < p_star")
        if self.coeff <= 0:
            raise ValueError("coeff must be positive")

    def cycle_time_us(self, d: int) -> float:
        return self.cycle_time_per_distance * d


def logical_error_rate(d: int, params: CodeParams) -> float:
    if d < 1 or d % 2 == 0:
        raise ValueError(f"code distance must be odd and positive, got {d}")
    return params.coeff * (params.p_phys / params.p_star) ** ((d + 1) / 2)


def failure_probability(rate: float, n: float) -> float:
    """``1 - (1 - rate)^n`` without cancellation."""
    if rate >= 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-rate))


@dataclass(frozen=True)
class LayerCalibration:
    """Piecewise-linear map from layer count to a quantity, extrapolated at both ends."""

    points: tuple  # ((layers, value), ...)

    def __post_init__(self):
        pts = tuple(sorted((float(a), float(b)) for a, b in self.points))
        if not pts:
            raise ValueError("calibration needs at least one point")
        object.__setattr__(self, "points", pts)

    def __call__(self, layers: float) -> float:
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        if len(xs) == 1:
            return ys[0] * layers / xs[0]
        if layers <= xs[0]:
            i = 0
        elif layers >= xs[-1]:
            i = len(xs) - 2
        else:
            i = int(np.searchsorted(xs, layers)) - 1
        slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
        return ys[i] + slope * (layers - xs[i])


# Calibration anchors for q_alg = 10, keyed by total budget.
TABLE1 = (
    {"budget": 1e-3, "layers": 50, "d": 15, "epsilon_L": 3.00e-10, "epsilon_T": 2.47e-9, "cycles": 4060,
     "runtime_ms": 24, "data_qubits": 13500, "factory_qubits": 1.746e6, "factory_no_distill": 1.35e4},
    {"budget": 1e-3, "layers": 100, "d": 15, "epsilon_L": 3.00e-10, "epsilon_T": 2.47e-9, "cycles": 8410,
     "runtime_ms": 50, "data_qubits": 13500, "factory_qubits": 1.782e6, "factory_no_distill": 1.35e4},
    {"budget": 1e-4, "layers": 50, "d": 17, "epsilon_L": 3.00e-11, "epsilon_T": 5.51e-10, "cycles": 4360,
     "runtime_ms": 30, "data_qubits": 17340, "factory_qubits": 1.746e6, "factory_no_distill": 1.73e4},
    {"budget": 1e-4, "layers": 100, "d": 17, "epsilon_L": 3.00e-11, "epsilon_T": 5.51e-10, "cycles": 8710,
     "runtime_ms": 59, "data_qubits": 17340, "factory_qubits": 1.764e6, "factory_no_distill": 1.73e4},
)


def _calibration(budget: float, key: str) -> LayerCalibration:
    return LayerCalibration(tuple((r["layers"], r[key]) for r in TABLE1 if r["budget"] == budget))


@dataclass(frozen=True)
class CircuitShape:
    q_alg: int = 10
    layers: int = 50
    rotations_per_qubit_per_layer: int = 3
    cycles_per_layer: LayerCalibration | None = None  # None: taken from the distillation entry
    patches: int | None = None  # None: 3 * q_alg

    def __post_init__(self):
        if self.q_alg < 1 or self.layers < 0 or self.rotations_per_qubit_per_layer < 0:
            raise ValueError("circuit shape entries must be positive")
        if self.patches is None:
            object.__setattr__(self, "patches", 3 * self.q_alg)

    @property
    def rotations(self) -> int:
        return self.q_alg * self.layers * self.rotations_per_qubit_per_layer


@dataclass(frozen=True)
class DistillationEntry:
    name: str
    output_t_error: Callable | float  # float, or f(p_phys)
    factory_qubits: Callable  # f(d, q_alg, layers) -> qubits
    cycles: LayerCalibration | None = None
    fixture: bool = False

    def t_error(self, params: CodeParams) -> float:
        e = self.output_t_error
        return float(e(params.p_phys) if callable(e) else e)


DEFAULT_CYCLES = _calibration(1e-3, "cycles")


def _fixture_entry(budget: float) -> DistillationEntry:
    eps_t = next(r["epsilon_T"] for r in TABLE1 if r["budget"] == budget)
    fq = _calibration(budget, "factory_qubits")
    return DistillationEntry(
        name=f"fixture-{budget:g}",
        output_t_error=eps_t,
        factory_qubits=lambda d, q_alg, layers, fq=fq: fq(layers),
        cycles=_calibration(budget, "cycles"),
        fixture=True,
    )


NO_DISTILLATION = DistillationEntry(
    name="none",
    output_t_error=lambda p: p,
    factory_qubits=lambda d, q_alg, layers: 6 * q_alg * d * d,
)

# Single 15-to-1 level; the footprint is a placeholder for exploratory use.
FIFTEEN_TO_ONE = DistillationEntry(
    name="15-to-1",
    output_t_error=lambda p: 35.0 * p**3,
    factory_qubits=lambda d, q_alg, layers: 11 * 2 * d * d * 4,
)


def default_catalog() -> list:
    entries = [NO_DISTILLATION, FIFTEEN_TO_ONE, _fixture_entry(1e-3), _fixture_entry(1e-4)]
    return sorted(entries, key=lambda e: e.t_error(CodeParams()), reverse=True)


def catalog_entry(name: str, catalog=None) -> DistillationEntry:
    for e in catalog or default_catalog():
        if e.name == name:
            return e
    raise KeyError(f"no distillation entry named {name!r}")


def count_circuit(
    shape: CircuitShape,
    epsilon_syn: float,
    scaling=TCountScaling.CLASSIC,
    cycles: LayerCalibration | None = None,
) -> dict:
    rot = shape.rotations
    if rot == 0:
        raise ValueError("circuit has no rotations")
    eps_angle = epsilon_syn / rot
    t_per = math.ceil(t_count_per_rotation(eps_angle, scaling))
    cal = shape.cycles_per_layer or cycles or DEFAULT_CYCLES
    n_cycles = int(round(cal(shape.layers)))
    return {
        "rotations": rot,
        "epsilon_angle": eps_angle,
        "t_per_rotation": t_per,
        "N_T": rot * t_per,
        "n_logical_cycles": n_cycles,
        "N_L": shape.patches * n_cycles,
    }


def choose_distance(epsilon_log: float, N_L: float, params: CodeParams) -> int:
    if N_L < 1:
        raise ValueError("N_L must be >= 1")
    for d in range(3, MAX_DISTANCE + 1, 2):
        if failure_probability(logical_error_rate(d, params), N_L) <= epsilon_log:
            return d
    raise InfeasibleBudget(
        f"no odd distance <= {MAX_DISTANCE} keeps {N_L:g} patch-cycles under {epsilon_log:g} "
        f"at p_phys={params.p_phys:g}"
    )


def _volume(entry: DistillationEntry, shape: CircuitShape, d: int) -> float:
    cal = shape.cycles_per_layer or entry.cycles or DEFAULT_CYCLES
    return entry.factory_qubits(d, shape.q_alg, shape.layers) * cal(shape.layers)


def select_distillation(
    epsilon_dis: float,
    N_T: int,
    catalog=None,
    params: CodeParams | None = None,
    shape: CircuitShape | None = None,
    d: int = 15,
) -> tuple:
    """Cheapest entry (factory spacetime volume) with ``1-(1-eps_T)^N_T <= eps_dis``."""
    catalog = list(catalog or default_catalog())
    if not catalog:
        raise ValueError("empty distillation catalog")
    params = params or CodeParams()
    shape = shape or CircuitShape()
    ok = [e for e in catalog if failure_probability(e.t_error(params), N_T) <= epsilon_dis]
    if not ok:
        raise InfeasibleBudget(f"no distillation unit keeps {N_T} T gates under {epsilon_dis:g}")
    best = min(ok, key=lambda e: (_volume(e, shape, d), e.t_error(params)))
    return best, best.t_error(params)


def t_error_bounds(p2: float) -> tuple:
    """Bounds ``[2 p2 / 3, p2]`` on the T-gate error from a two-qubit error rate ``p2``."""
    if not 0.0 <= p2 < 1.0:
        raise ValueError("p2 must lie in [0, 1)")
    return (2.0 * p2 / 3.0, p2)


@dataclass
class ResourceEstimate:
    code_distance: int
    epsilon_L: float
    epsilon_T: float
    data_qubits: int
    factory_qubits: float
    n_logical_cycles: int
    n_patch_cycles: int
    n_t_gates: int
    runtime_ms: float
    cycle_time_us: float
    distillation: str
    t_budget_met: bool
    failure_probability: float
    budget: dict = field(default_factory=dict)

    @property
    def total_qubits(self) -> float:
        return self.data_qubits + self.factory_qubits

    def to_dict(self) -> dict:
        out = asdict(self)
        out["total_qubits"] = self.total_qubits
        out["schema_version"] = SCHEMA_VERSION
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "ResourceEstimate":
        keys = cls.__dataclass_fields__
        return cls(**{k: v for k, v in data.items() if k in keys})

    def table(self) -> str:
        rows = [
            ("code distance", self.code_distance),
            ("logical error rate", f"{self.epsilon_L:.3g}"),
            ("T error rate", f"{self.epsilon_T:.3g} ({self.distillation})"),
            ("data qubits", self.data_qubits),
            ("factory qubits", f"{self.factory_qubits:.4g}"),
            ("logical cycles", self.n_logical_cycles),
            ("patch-cycles", self.n_patch_cycles),
            ("T gates", self.n_t_gates),
            ("cycle time (us)", f"{self.cycle_time_us:.1f}"),
            ("runtime (ms)", f"{self.runtime_ms:.1f}"),
            ("failure probability", f"{self.failure_probability:.3g}"),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def estimate(
    shape: CircuitShape,
    budget: BudgetSplit | float,
    params: CodeParams | None = None,
    catalog=None,
    distill: bool = True,
    distillation: str | None = None,
    scaling=TCountScaling.CLASSIC,
) -> ResourceEstimate:
    """Assemble distance, qubit counts and runtime for ``shape``.

    ``distillation`` pins a named catalog entry instead of searching.  With
    ``distill=False`` the raw T error is used and ``t_budget_met`` reports
    whether it fits the distillation share of the budget.
    """
    params = params or CodeParams()
    if not isinstance(budget, BudgetSplit):
        budget = split_budget(float(budget))
    catalog = list(catalog or default_catalog())

    if not distill:
        entry = NO_DISTILLATION
    elif distillation is not None:
        entry = catalog_entry(distillation, catalog)
    else:
        # the cycle count depends on the entry, the T count does not
        n_t = count_circuit(shape, budget.epsilon_syn, scaling)["N_T"]
        entry, _ = select_distillation(budget.epsilon_dis, n_t, catalog, params, shape)

    counts = count_circuit(shape, budget.epsilon_syn, scaling, entry.cycles)
    d = choose_distance(budget.epsilon_log, counts["N_L"], params)
    eps_l = logical_error_rate(d, params)
    eps_t = entry.t_error(params)
    p_log = failure_probability(eps_l, counts["N_L"])
    p_dis = failure_probability(eps_t, counts["N_T"])
    t_ok = p_dis <= budget.epsilon_dis
    cycle_us = params.cycle_time_us(d)
    data = int(round(shape.patches * params.qubits_per_patch_d2 * d * d))
    return ResourceEstimate(
        code_distance=d,
        epsilon_L=eps_l,
        epsilon_T=eps_t,
        data_qubits=data,
        factory_qubits=float(entry.factory_qubits(d, shape.q_alg, shape.layers)),
        n_logical_cycles=counts["n_logical_cycles"],
        n_patch_cycles=counts["N_L"],
        n_t_gates=counts["N_T"],
        runtime_ms=counts["n_logical_cycles"] * cycle_us / 1000.0,
        cycle_time_us=cycle_us,
        distillation=entry.name,
        t_budget_met=bool(t_ok),
        # synthesis error is within its share by construction of the T count
        failure_probability=1.0 - (1.0 - p_log) * (1.0 - p_dis) * (1.0 - budget.epsilon_syn),
        budget=asdict(budget),
    )


def table1_estimates(params: CodeParams | None = None) -> list:
    """Estimates for the four calibration rows, with the matching fixture entry pinned."""
    params = params or CodeParams(p_phys=1e-3)
    out = []
    for row in TABLE1:
        shape = CircuitShape(q_alg=10, layers=row["layers"])
        est = estimate(shape, row["budget"], params, distillation=f"fixture-{row['budget']:g}")
        nodist = estimate(shape, row["budget"], params, distill=False)
        out.append({"row": row, "estimate": est, "no_distillation": nodist})
    return out


def emit_fixtures(path: str | Path | None = None) -> dict:
    """Table-style calibration fixtures with the estimator's reproduction of each row."""
    rows = []
    for item in table1_estimates():
        est, nodist = item["estimate"], item["no_distillation"]
        rows.append(
            {
                "reference": item["row"],
                "estimate": est.to_dict(),
                "no_distillation_factory_qubits": nodist.factory_qubits,
            }
        )
    doc = {"schema_version": SCHEMA_VERSION, "q_alg": 10, "p_phys": 1e-3, "rows": rows}
    if path is not None:
        Path(path).write_text(json.dumps(doc, indent=2))
    return doc
