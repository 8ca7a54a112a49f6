"""Oracle and invariant suites, shared by the test-suite and ``ftqml validate``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from . import costmodel as cm
from .noisechan import (
    CrosstalkSpec,
    DepolarizingSpec,
    ErrorBridgeParams,
    depolarizing_channel,
    effective_gate_error,
    gate_error_from_t_error,
    two_qubit_gate_noise,
)
from .qed422 import code
from .qed422.frames import _SIGNS, STRING_TO_LOGICAL, _VALID, _XOR, X_BASE, flag_bit, propagate
from .qed422.protocol import N_PHYSICAL, build_encoded_parity
from .qed422.shots import logical_measure_z1, simulate
from .qed422.sites import QedNoise, noise_sites
from .qvc import parity_expectation, parity_logical_probs
from .simcore.channels import (
    KrausChannel,
    apply_channel,
    channel_to_superoperator,
    exp_lindbladian,
    is_cptp,
    superoperator_log,
    vectorize,
)
from .simcore.states import DensityMatrix, reduced_probabilities


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "value": self.value, "tolerance": self.tolerance}


def random_density(n: int, rng: np.random.Generator) -> DensityMatrix:
    d = 2**n
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return DensityMatrix(n, rho / np.trace(rho))


def random_channel(n: int, rng: np.random.Generator, n_kraus: int = 3) -> KrausChannel:
    """Random CPTP map from a Haar isometry into ``n_kraus`` Kraus blocks."""
    d = 2**n
    u = unitary_group.rvs(d * n_kraus, random_state=rng)
    v = u[:, :d]
    return KrausChannel(tuple(v[k * d:(k + 1) * d] for k in range(n_kraus)), "random")


def channel_algebra(cases: int = 50, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    worst_comm = worst_path = worst_log = worst_tp = 0.0
    for i in range(cases):
        p = rng.uniform(0, 0.7)
        dep = channel_to_superoperator(depolarizing_channel(p)).matrix
        u = unitary_group.rvs(2, random_state=rng)
        U = channel_to_superoperator(KrausChannel.unitary(u)).matrix
        worst_comm = max(worst_comm, np.abs(dep @ U - U @ dep).max())

        n = 1 + i % 2
        ch = random_channel(n, rng)
        rho = random_density(n, rng)
        sup = channel_to_superoperator(ch)
        via_kraus = vectorize(apply_channel(rho, ch, tuple(range(n))).matrix)
        worst_path = max(worst_path, np.abs(sup.matrix @ vectorize(rho.matrix) - via_kraus).max())
        worst_tp = max(worst_tp, abs(np.trace(sup.act(np.eye(2**n) / 2**n)) - 1))

        sd = channel_to_superoperator(depolarizing_channel(rng.uniform(0, 0.7)))
        back = exp_lindbladian(superoperator_log(sd), 1.0)
        worst_log = max(worst_log, np.abs(back.matrix - sd.matrix).max())
    return [
        Check("depolarizing commutes with unitaries", worst_comm <= 1e-12, float(worst_comm), 1e-12),
        Check("superoperator path equals Kraus path", worst_path <= 1e-10, float(worst_path), 1e-10),
        Check("superoperator preserves trace", worst_tp <= 1e-10, float(worst_tp), 1e-10),
        Check("exp(log(E)) round trip", worst_log <= 1e-9, float(worst_log), 1e-9),
    ]


def two_qubit_noise_cptp(cases: int = 10, seed: int = 1) -> Check:
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(cases):
        sup, _s = two_qubit_gate_noise(
            1, 2, DepolarizingSpec(rng.uniform(0, 0.5)), CrosstalkSpec(rng.uniform(-1, 1), n_qubits=4)
        )
        ok &= is_cptp(sup)
    return Check("two-qubit gate noise is CPTP", bool(ok), float(cases), 1e-9)


def error_bridges() -> list:
    out = []
    for p, r in ((2.99e-3, 1.99e-3), (1.99e-3, 1.33e-3)):
        got = effective_gate_error(p)
        out.append(Check(f"effective gate error at p={p}", abs(got / r - 1) <= 5e-3, got, r))
    for scale, r in (("classic", 1.99e-3), ("improved", 1.33e-3)):
        got = gate_error_from_t_error(ErrorBridgeParams(1e-4, 1e-4, scale))
        out.append(Check(f"gate error from T error ({scale})", abs(got / r - 1) <= 1e-2, got, r))
    return out


def table1() -> list:
    out = []
    for item in cm.table1_estimates():
        row, est = item["row"], item["estimate"]
        tag = f"budget={row['budget']:g} layers={row['layers']}"
        out.append(Check(f"{tag} distance", est.code_distance == row["d"], est.code_distance, row["d"]))
        out.append(Check(f"{tag} logical error", abs(est.epsilon_L / row["epsilon_L"] - 1) < 1e-9, est.epsilon_L, row["epsilon_L"]))
        out.append(Check(f"{tag} data qubits", est.data_qubits == row["data_qubits"], est.data_qubits, row["data_qubits"]))
        out.append(Check(f"{tag} cycle time", abs(est.cycle_time_us - 0.4 * row["d"]) < 1e-9, est.cycle_time_us, 0.4 * row["d"]))
        rel = abs(est.runtime_ms / row["runtime_ms"] - 1)
        out.append(Check(f"{tag} runtime", rel <= 0.05, est.runtime_ms, row["runtime_ms"]))
    return out


def oracle_equivalence(n_theta: int = 20, seed: int = 2) -> Check:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for theta in rng.uniform(-np.pi, np.pi, n_theta):
        for bits in ((0, 0), (0, 1), (1, 0), (1, 1)):
            reg = build_encoded_parity(bits, 0)
            z = logical_measure_z1(simulate(reg, theta).state).z1
            worst = max(worst, abs(z - parity_expectation(theta, bits)))
    return Check("encoded circuit matches bare circuit", worst <= 1e-10, float(worst), 1e-10)


def detection() -> list:
    missed = 0
    for err in code.single_qubit_errors():
        for b in code.SUPPORT:
            # explicit check: the flagged stabilizer has expectation -1 on the corrupted codeword
            v = code.pauli_matrix(err) @ code.codeword(*b)
            sx = np.real(v.conj() @ code.pauli_matrix("XXXX") @ v)
            sz = np.real(v.conj() @ code.pauli_matrix("ZZZZ") @ v)
            flags = (sx < -0.5, sz < -0.5)
            if not any(flags) or flags != code.syndrome(err):
                missed += 1
    bad = code.undetectable_logical_errors(2)
    return [
        Check("every single-qubit X/Y/Z error is flagged", missed == 0, float(missed), 0.0),
        Check("an undetectable weight-2 logical error exists", len(bad) > 0, float(len(bad)), 1.0),
    ]


def frames_vs_statevector(patterns: int = 25, rounds: int = 2, seed: int = 3) -> Check:
    """Signatures predict flags and the read-out distribution of explicit faulty runs."""
    rng = np.random.default_rng(seed)
    reg = build_encoded_parity((0, 1), rounds)
    sites = noise_sites(reg.ir, QedNoise("gate", 0.01))
    worst = 0.0
    for _ in range(patterns):
        theta = rng.uniform(-np.pi, np.pi)
        chosen = rng.choice(len(sites), size=rng.integers(1, 4), replace=False)
        paulis, sig = {}, 0
        for k in chosen:
            s = sites[k]
            p = "XYZ"[rng.integers(3)]
            paulis.setdefault(s.op_index, []).append((s.qubit, p))
            sxz = {"X": ("X",), "Z": ("Z",), "Y": ("X", "Z")}[p]
            for q in sxz:
                sig ^= propagate(reg.ir, s.op_index, s.qubit, q)
        traj = simulate(reg, theta, paulis, rng=rng)
        want_flags = [(bool(sig >> flag_bit(r, "X") & 1), bool(sig >> flag_bit(r, "Z") & 1)) for r in range(1, rounds + 1)]
        if traj.flags != want_flags or abs(traj.branch_probability - 1) > 1e-9:
            return Check("frames match explicit trajectories", False, 1.0, 1e-10)
        f = sig & 63
        x = (sig >> X_BASE) & 15
        xi = int(f"{x:04b}"[::-1], 2)
        logical = parity_logical_probs(theta, (0, 1), _SIGNS[f:f + 1])[0]
        q16 = np.where(_VALID, logical[STRING_TO_LOGICAL] / 2, 0.0)[_XOR[xi]]
        got = reduced_probabilities(traj.state.probabilities(), list(range(N_PHYSICAL)), traj.state.n_qubits)
        worst = max(worst, np.abs(got - q16).max())
    return Check("frames match explicit trajectories", worst <= 1e-10, float(worst), 1e-10)


def run_all(include_frames: bool = True) -> list:
    checks = channel_algebra() + [two_qubit_noise_cptp()] + error_bridges() + table1()
    checks += [oracle_equivalence()] + detection()
    if include_frames:
        checks.append(frames_vs_statevector())
    return checks
