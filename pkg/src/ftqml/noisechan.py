"""Noise channels and the analytic bridges between depolarizing strength,
effective gate error and logical T error."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .simcore import gates as G
from .simcore.channels import (
    KrausChannel,
    SuperOperatorMatrix,
    channel_to_superoperator,
    embed_superoperator,
    exp_lindbladian,
    superoperator_log,
)
from .simcore.states import apply_gate

PAULI_LABELS = ("X", "Y", "Z")


@dataclass(frozen=True)
class DepolarizingSpec:
    p_depol: float

    def __post_init__(self):
        if not 0.0 <= self.p_depol <= 1.0:
            raise ValueError(f"p_depol={self.p_depol} outside [0, 1]")


@dataclass(frozen=True)
class PauliInjectionSpec:
    rate: float
    two_qubit_multiplier: float = 2.0
    cadence_gates: int = 4
    f_anc: float = 1.0

    def __post_init__(self):
        if self.rate < 0 or self.rate * max(self.two_qubit_multiplier, 1.0) > 1.0:
            raise ValueError("rate x two_qubit_multiplier must lie in [0, 1]")
        if self.cadence_gates < 1:
            raise ValueError("cadence_gates must be >= 1")
        if not 0.0 <= self.f_anc <= 1.0:
            raise ValueError("f_anc must lie in [0, 1]")

    def site_rate(self, two_qubit: bool, ancilla: bool) -> float:
        r = self.rate * (self.two_qubit_multiplier if two_qubit else 1.0)
        return r * (self.f_anc if ancilla else 1.0)


@dataclass(frozen=True)
class CrosstalkSpec:
    alpha: float = 0.01
    neighbor_map: dict | None = None  # qubit -> tuple of neighbours; None means a linear chain
    n_qubits: int | None = None

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if self.neighbor_map is not None:
            for q, nbrs in self.neighbor_map.items():
                if q in nbrs:
                    raise ValueError(f"qubit {q} listed as its own neighbour")

    def neighbors(self, q: int) -> tuple:
        if self.neighbor_map is not None:
            return tuple(self.neighbor_map.get(q, ()))
        out = [q - 1, q + 1]
        return tuple(x for x in out if x >= 0 and (self.n_qubits is None or x < self.n_qubits))

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.neighbors(a)


class TCountScaling(str, Enum):
    CLASSIC = "classic"
    IMPROVED = "improved"

    def t_per_rotation(self, eps_angle: float) -> float:
        base = math.log2(1.0 / eps_angle)
        return 1.5 * base if self is TCountScaling.CLASSIC else base


@dataclass(frozen=True)
class ErrorBridgeParams:
    epsilon_T: float
    epsilon_angle: float
    t_count_scaling: TCountScaling = TCountScaling.CLASSIC

    def __post_init__(self):
        if not 0.0 <= self.epsilon_T < 1.0:
            raise ValueError("epsilon_T must lie in [0, 1)")
        if not 0.0 < self.epsilon_angle < 1.0:
            raise ValueError("epsilon_angle must lie in (0, 1)")
        object.__setattr__(self, "t_count_scaling", TCountScaling(self.t_count_scaling))


def depolarizing_channel(spec: DepolarizingSpec | float) -> KrausChannel:
    if not isinstance(spec, DepolarizingSpec):
        spec = DepolarizingSpec(float(spec))
    p = spec.p_depol
    if p == 0.0:
        return KrausChannel((G.I2,), "depol(0)")
    a = math.sqrt(1.0 - p)
    b = math.sqrt(p / 3.0)
    return KrausChannel((a * G.I2, b * G.X, b * G.Y, b * G.Z), f"depol({p:g})")


def effective_gate_error(p_depol: float) -> float:
    """Randomised-benchmarking gate error of a single-qubit depolarizing channel."""
    if not 0.0 <= p_depol <= 1.0:
        raise ValueError("p_depol must lie in [0, 1]")
    lam = 1.0 - 4.0 * p_depol / 3.0
    return (1.0 - lam * lam) / 4.0


def depol_from_gate_error(r: float) -> float:
    if not 0.0 <= r < 0.25:
        raise ValueError("gate error must lie in [0, 0.25)")
    return 0.75 * (1.0 - math.sqrt(1.0 - 4.0 * r))


def t_count_per_rotation(eps_angle: float, scaling=TCountScaling.CLASSIC) -> float:
    return TCountScaling(scaling).t_per_rotation(eps_angle)


def gate_error_from_t_error(params: ErrorBridgeParams) -> float:
    """Error of a synthesized rotation built from ``n_T`` faulty T gates: ``1 - (1-eps_T)^n_T``."""
    n = params.t_count_scaling.t_per_rotation(params.epsilon_angle)
    return -math.expm1(n * math.log1p(-params.epsilon_T))


def crosstalk_channel(spec: CrosstalkSpec, q1: int, q2: int) -> KrausChannel:
    if q1 == q2:
        raise ValueError("crosstalk needs two distinct qubits")
    return KrausChannel.unitary(G.zz(spec.alpha), f"zz({spec.alpha:g})")


def two_qubit_gate_noise(
    q1: int,
    q2: int,
    depol: DepolarizingSpec,
    cross: CrosstalkSpec,
) -> tuple[SuperOperatorMatrix, tuple]:
    """Net noise after a two-qubit gate on ``(q1, q2)``.

    The generator is the sum of the logs of the single-qubit depolarizing maps
    on ``q1`` and ``q2`` and the ZZ crosstalk maps on ``(q1-1, q1)`` and
    ``(q2, q2+1)``.  Crosstalk edges missing from the neighbour map are
    dropped.  Returns the superoperator and the qubit support it acts on.
    """
    if q1 == q2:
        raise ValueError("two distinct qubits required")
    if depol.p_depol >= 0.75:
        raise ValueError("p_depol >= 0.75 has no matrix logarithm")
    support = [q1, q2]
    edges = []
    if cross.has_edge(q1, q1 - 1):
        support.insert(0, q1 - 1)
        edges.append((q1 - 1, q1))
    if cross.has_edge(q2, q2 + 1):
        support.append(q2 + 1)
        edges.append((q2, q2 + 1))
    local = {q: i for i, q in enumerate(support)}
    k = len(support)

    dep = channel_to_superoperator(depolarizing_channel(depol))
    gen = np.zeros((4**k, 4**k), dtype=complex)
    if depol.p_depol > 0:
        log_dep = superoperator_log(dep)
        for q in (q1, q2):
            gen += embed_superoperator(log_dep, (local[q],), k).matrix
    if cross.alpha != 0:
        log_zz = superoperator_log(channel_to_superoperator(crosstalk_channel(cross, 0, 1)))
        for a, b in edges:
            gen += embed_superoperator(log_zz, (local[a], local[b]), k).matrix
    return exp_lindbladian(SuperOperatorMatrix(k, gen)), tuple(support)


@dataclass(frozen=True)
class NoiseSite:
    """A place where a stochastic Pauli may be inserted."""

    op_index: int  # insert after this op; -1 for before the first op
    qubit: int
    kind: str  # "gate1", "gate2" or "env"
    ancilla: bool = False

    @property
    def two_qubit(self) -> bool:
        return self.kind == "gate2"


@dataclass
class Injection:
    site: NoiseSite
    pauli: str


def draw_paulis(sites: Sequence[NoiseSite], spec: PauliInjectionSpec, rng: np.random.Generator) -> list:
    """Decide, for every site in order, whether a Pauli fires and which one."""
    log = []
    for site in sites:
        u, v = rng.random(2)
        if u < spec.site_rate(site.two_qubit, site.ancilla):
            log.append(Injection(site, PAULI_LABELS[int(v * 3)]))
    return log


def inject_pauli_noise(state, sites: Sequence[NoiseSite], spec: PauliInjectionSpec, rng):
    """Apply stochastic Paulis at ``sites`` to ``state`` and return ``(state, log)``.

    ``rng`` is a seed or a ``numpy.random.Generator``; each site consumes two
    uniforms, so the log is reproducible from (seed, site order).
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    log = draw_paulis(sites, spec, rng)
    for inj in log:
        state = apply_gate(state, G.PAULIS[inj.pauli], (inj.site.qubit,))
    return state, log
