"""Explicit state-vector trajectories of the encoded parity circuit and the
logical read-out rule."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from ..noisechan import draw_paulis
from ..simcore import ShotOutcome
from ..simcore import gates as G
from ..simcore.sampling import sample_indices
from ..simcore.states import PureState, _apply_to_axes, reduced_probabilities
from .code import STRING_TO_LOGICAL
from .protocol import N_PHYSICAL, LogicalRegister422, build_encoded_parity
from .sites import QedNoise, noise_sites

Z1_SIGN = np.array([1.0, 1.0, -1.0, -1.0])  # logical index 2*b1 + b2 -> eigenvalue of Z_L1


class NoSurvivingShots(RuntimeError):
    """Every shot was discarded by post-selection."""


@dataclass
class LogicalReadout:
    z1: float
    distribution: np.ndarray  # renormalised over the four logical states
    discard_rate: float
    survivors: float  # surviving shot count (probability mass in exact mode)


def readout_from_physical(probs16: np.ndarray, shots: int = 0, seed=None, survive: float = 1.0) -> LogicalReadout:
    """Map a distribution over 4-bit physical strings to the logical read-out.

    Odd-weight strings are discarded.  ``survive`` is the probability that
    the syndrome checks passed; the rest also counts as discarded.
    """
    p = np.clip(np.asarray(probs16, dtype=float), 0, None)
    if shots == 0:
        logical = np.zeros(4)
        np.add.at(logical, STRING_TO_LOGICAL[STRING_TO_LOGICAL >= 0], p[STRING_TO_LOGICAL >= 0])
        logical *= survive
        kept = logical.sum()
        if kept <= 0:
            raise NoSurvivingShots("no probability mass survives post-selection")
        return LogicalReadout(float(Z1_SIGN @ logical / kept), logical / kept, 1.0 - kept, kept)
    cats = np.append(p * survive, max(0.0, 1.0 - survive * p.sum()))
    cats /= cats.sum()
    idx = sample_indices(cats, shots, seed)
    counts = np.bincount(idx, minlength=17)[:16]
    logical = np.zeros(4)
    np.add.at(logical, STRING_TO_LOGICAL[STRING_TO_LOGICAL >= 0], counts[STRING_TO_LOGICAL >= 0])
    kept = logical.sum()
    if kept == 0:
        raise NoSurvivingShots(f"all {shots} shots discarded")
    return LogicalReadout(float(Z1_SIGN @ logical / kept), logical / kept, 1.0 - kept / shots, kept)


def logical_measure_z1(state, reg: LogicalRegister422 | None = None, shots: int = 0, seed=None) -> LogicalReadout:
    """Logical ``<Z_1>`` of a state whose first four qubits hold the code block."""
    n = state.n_qubits
    probs = state.probabilities()
    p16 = reduced_probabilities(probs, list(range(N_PHYSICAL)), n)
    return readout_from_physical(p16, shots, seed)


@dataclass
class Trajectory:
    state: PureState  # code block and rotation ancillas
    flags: list  # one (x_flag, z_flag) pair per round
    branch_probability: float  # probability of the sampled syndrome outcomes


def simulate(
    reg: LogicalRegister422,
    theta: float,
    paulis=None,
    signs=None,
    rng: np.random.Generator | None = None,
    postselect: bool = False,
) -> Trajectory:
    """Run ``reg.ir`` on a state vector, with syndrome qubits allocated two at a time.

    ``paulis`` maps an op index to ``[(qubit, "X"|"Y"|"Z"), ...]`` applied after
    that op.  ``signs`` optionally multiplies rotation ``k`` by ``signs[k]``.
    Syndrome outcomes are sampled with ``rng``, or forced to ``+1`` when
    ``postselect`` is set (``branch_probability`` then carries the weight).
    """
    ir = reg.ir
    n_main = N_PHYSICAL + reg.n_ancillas
    state = np.zeros(2**n_main, dtype=complex)
    state[0] = 1.0
    T = state.reshape((2,) * n_main)
    live: dict = {}  # syndrome qubit -> local axis
    flags = []
    weight = 1.0
    paulis = paulis or {}
    binding = {reg.param: theta}

    def axis(q):
        return live[q] if q in live else q

    for i, op in enumerate(ir.ops):
        if op.kind == "measure":
            if op.meta.get("check") == "Z":
                T, outcome, w = _measure_pair(T, live, rng, postselect)
                flags.append(outcome)
                weight *= w
                live = {}
        elif op.is_gate:
            for q in op.targets:
                if q in reg.syndrome_pool and q not in live:
                    T = np.multiply.outer(T, np.array([1.0, 0.0]))
                    live[q] = T.ndim - 1
            angle = op.angle(binding)
            if angle is not None and signs is not None:
                angle *= signs[op.meta["rotation"]]
            u = G.gate_matrix(op.kind, angle)
            T = _apply_to_axes(T, u, [axis(q) for q in op.targets])
        for q, p in paulis.get(i, ()):
            T = _apply_to_axes(T, G.PAULIS[p], [axis(q)])
    return Trajectory(PureState(n_main, T.reshape(-1)), flags, weight)


def _measure_pair(T, live, rng, postselect):
    """Measure the two live syndrome qubits (X check, Z check) and drop them."""
    ax = sorted(live.values())
    T = np.moveaxis(T, ax, [-2, -1])
    joint = np.sum(np.abs(T) ** 2, axis=tuple(range(T.ndim - 2)))  # [x, z]
    if postselect:
        k = 0
    else:
        if rng is None:
            raise ValueError("sampling syndrome outcomes needs an rng")
        k = int(np.searchsorted(np.cumsum(joint.ravel()), rng.random() * joint.sum(), side="right"))
        k = min(k, 3)
    x, z = divmod(k, 2)
    w = float(joint[x, z])
    if w <= 0:
        raise NoSurvivingShots("syndrome outcome has zero probability")
    return T[..., x, z] / np.sqrt(w), (bool(x), bool(z)), w


def injections_by_op(log) -> dict:
    out = defaultdict(list)
    for inj in log:
        out[inj.site.op_index].append((inj.site.qubit, inj.pauli))
    return out


def run_shot(theta: float, bits, noise: QedNoise, rounds: int, seed) -> ShotOutcome:
    """One Monte-Carlo trajectory ending in a measurement of the four physical qubits."""
    reg = build_encoded_parity(bits, rounds)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    log = draw_paulis(noise_sites(reg.ir, noise), noise.injection, rng) if noise.p > 0 else []
    traj = simulate(reg, theta, injections_by_op(log), rng=rng)
    p16 = reduced_probabilities(traj.state.probabilities(), list(range(N_PHYSICAL)), traj.state.n_qubits)
    u = rng.random()
    s = int(np.searchsorted(np.cumsum(p16), u * p16.sum(), side="right"))
    return ShotOutcome(min(s, 15), tuple(f for pair in traj.flags for f in pair))
