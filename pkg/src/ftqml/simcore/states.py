"""Dense state representations and the tensor kernels that act on them.

Qubit 0 is the most significant bit of a basis index, so ``|q0 q1 ... q_{n-1}>``
matches ``np.kron`` ordering and the printed bitstrings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

NORM_TOL = 1e-10
EIG_TOL = 1e-9


class DimensionMismatch(ValueError):
    """Operator size does not match the number of target qubits."""


class QubitIndexError(IndexError):
    """A qubit index lies outside the register."""


def _n_from_dim(dim: int) -> int:
    n = int(round(np.log2(dim))) if dim > 0 else -1
    if n < 0 or 2**n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


@dataclass
class PureState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != 2**self.n_qubits:
            raise DimensionMismatch(
                f"{self.amplitudes.size} amplitudes for {self.n_qubits} qubits"
            )
        norm = np.vdot(self.amplitudes, self.amplitudes).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm^2 = {norm!r})")

    @classmethod
    def zero(cls, n_qubits: int) -> "PureState":
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def basis(cls, bits: Sequence[int]) -> "PureState":
        bits = [int(b) for b in bits]
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"bits must be 0/1, got {bits}")
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[bits_to_index(bits)] = 1.0
        return cls(len(bits), amps)

    @classmethod
    def from_vector(cls, vec) -> "PureState":
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        return cls(_n_from_dim(vec.size), vec)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))

    def copy(self) -> "PureState":
        return PureState(self.n_qubits, self.amplitudes.copy())


@dataclass
class DensityMatrix:
    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        dim = 2**self.n_qubits
        if self.matrix.shape != (dim, dim):
            raise DimensionMismatch(f"matrix shape {self.matrix.shape} for {self.n_qubits} qubits")

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityMatrix":
        return state.to_density()

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        dim = 2**n_qubits
        return cls(n_qubits, np.eye(dim, dtype=complex) / dim)

    def probabilities(self) -> np.ndarray:
        return np.clip(np.diag(self.matrix).real, 0.0, None)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def check(self, tol: float = NORM_TOL, eig_tol: float = EIG_TOL) -> None:
        """Raise ``ValueError`` unless the matrix is a valid density operator."""
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > tol:
            raise ValueError(f"trace is {np.trace(m).real!r}")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < -eig_tol:
            raise ValueError("density matrix has a negative eigenvalue")

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.n_qubits, self.matrix.copy())


def bits_to_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def index_to_bits(index: int, n_qubits: int) -> tuple[int, ...]:
    return tuple((index >> (n_qubits - 1 - q)) & 1 for q in range(n_qubits))


def format_bitstring(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b") if n_qubits else ""


def check_targets(targets: Sequence[int], n_qubits: int) -> tuple[int, ...]:
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise QubitIndexError(f"repeated target qubits {targets}")
    for t in targets:
        if not 0 <= t < n_qubits:
            raise QubitIndexError(f"qubit {t} outside register of {n_qubits}")
    return targets


def _apply_to_axes(tensor: np.ndarray, op: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    op_t = op.reshape((2,) * (2 * k))
    out = np.tensordot(op_t, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def apply_matrix_to_vector(amps: np.ndarray, op: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Contract ``op`` into the amplitude vector on ``targets``; no unitarity check."""
    psi = amps.reshape((2,) * n)
    return _apply_to_axes(psi, op, targets).reshape(-1)


def conjugate_density(matrix: np.ndarray, op: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Return ``op rho op^dagger`` with ``op`` acting on ``targets``."""
    rho = matrix.reshape((2,) * (2 * n))
    rho = _apply_to_axes(rho, op, targets)
    rho = _apply_to_axes(rho, op.conj(), [n + t for t in targets])
    dim = 2**n
    return rho.reshape(dim, dim)


def _gate_matrix(gate, n_targets: int) -> np.ndarray:
    u = np.asarray(gate, dtype=complex)
    if u.shape != (2**n_targets, 2**n_targets):
        raise DimensionMismatch(f"gate of shape {u.shape} for {n_targets} target qubit(s)")
    return u


def apply_gate(state, gate, targets):
    """Apply a unitary to a pure state (``U|psi>``) or density matrix (``U rho U^dagger``).

    Parameters
    ----------
    state : PureState or DensityMatrix
    gate : array_like
        ``2^k x 2^k`` unitary, qubit ordering within the gate follows ``targets``.
    targets : sequence of int
        Distinct qubit indices of length ``k``.

    Returns
    -------
    A new state of the same kind.
    """
    if np.isscalar(targets):
        targets = (targets,)
    targets = check_targets(targets, state.n_qubits)
    u = _gate_matrix(gate, len(targets))
    if isinstance(state, PureState):
        amps = apply_matrix_to_vector(state.amplitudes, u, targets, state.n_qubits)
        return PureState(state.n_qubits, amps)
    if isinstance(state, DensityMatrix):
        return DensityMatrix(state.n_qubits, conjugate_density(state.matrix, u, targets, state.n_qubits))
    raise TypeError(f"unsupported state type {type(state).__name__}")


def embed_operator(op: np.ndarray, targets: Sequence[int], n_qubits: int) -> np.ndarray:
    """Full ``2^n x 2^n`` matrix of ``op`` acting on ``targets``."""
    targets = check_targets(targets, n_qubits)
    op = _gate_matrix(op, len(targets))
    dim = 2**n_qubits
    eye = np.eye(dim, dtype=complex).reshape((2,) * n_qubits + (dim,))
    out = _apply_to_axes(eye, op, targets)
    return out.reshape(dim, dim)


def reduced_probabilities(probs: np.ndarray, keep: Sequence[int], n_qubits: int) -> np.ndarray:
    """Marginal distribution over the ``keep`` qubits, ordered as given."""
    keep = list(keep)
    p = probs.reshape((2,) * n_qubits)
    drop = tuple(q for q in range(n_qubits) if q not in keep)
    marg = p.sum(axis=drop) if drop else p
    remaining = [q for q in range(n_qubits) if q in keep]
    marg = np.moveaxis(marg, [remaining.index(q) for q in keep], list(range(len(keep))))
    return marg.reshape(-1)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    n = rho.n_qubits
    keep = list(keep)
    drop = [q for q in range(n) if q not in keep]
    t = rho.matrix.reshape((2,) * (2 * n))
    # trace out from the highest index so remaining axis numbers stay valid
    for q in sorted(drop, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=q, axis2=m + q)
    m = len(keep)
    order = sorted(keep)
    perm = [order.index(q) for q in keep]
    t = t.transpose(perm + [m + p for p in perm])
    return DensityMatrix(m, t.reshape(2**m, 2**m))
