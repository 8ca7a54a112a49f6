"""Kraus channels, their superoperator matrices and Lindbladian exponentials.

Vectorisation stacks columns: ``vec(A rho B) = (B^T kron A) vec(rho)``, so a
Kraus map ``rho -> sum_j K_j rho K_j^dagger`` has the superoperator
``sum_j conj(K_j) kron K_j``.  For Hermitian Kraus operators (every Pauli
channel) ``conj(K) == K^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as la

from .states import (
    DensityMatrix,
    DimensionMismatch,
    _apply_to_axes,
    _n_from_dim,
    check_targets,
    embed_operator,
)

TP_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    kraus_ops: tuple
    label: str = ""
    check_tol: float = field(default=TP_TOL, repr=False, compare=False)

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        for k in ops:
            if k.shape != (dim, dim):
                raise DimensionMismatch("Kraus operators must share one square shape")
        _n_from_dim(dim)
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(dim))) > self.check_tol:
            raise ValueError(f"channel {self.label!r} is not trace preserving")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    @property
    def n_qubits(self) -> int:
        return _n_from_dim(self.dim)

    @classmethod
    def unitary(cls, u, label: str = "unitary") -> "KrausChannel":
        return cls((np.asarray(u, dtype=complex),), label)

    @classmethod
    def identity(cls, n_qubits: int = 1) -> "KrausChannel":
        return cls((np.eye(2**n_qubits, dtype=complex),), "identity")

    def embed(self, targets: Sequence[int], n_qubits: int) -> "KrausChannel":
        ops = tuple(embed_operator(k, targets, n_qubits) for k in self.kraus_ops)
        return KrausChannel(ops, self.label)

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """Channel that applies ``self`` first and ``other`` second."""
        if other.dim != self.dim:
            raise DimensionMismatch("cannot compose channels of different size")
        ops = tuple(b @ a for a in self.kraus_ops for b in other.kraus_ops)
        return KrausChannel(ops, f"{other.label}*{self.label}")


@dataclass(frozen=True)
class SuperOperatorMatrix:
    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = 4**self.n_qubits
        if m.shape != (d, d):
            raise DimensionMismatch(f"superoperator shape {m.shape} for {self.n_qubits} qubits")
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: "SuperOperatorMatrix") -> "SuperOperatorMatrix":
        return SuperOperatorMatrix(self.n_qubits, self.matrix @ other.matrix)

    def __add__(self, other: "SuperOperatorMatrix") -> "SuperOperatorMatrix":
        return SuperOperatorMatrix(self.n_qubits, self.matrix + other.matrix)

    def act(self, rho: np.ndarray) -> np.ndarray:
        return devectorize(self.matrix @ vectorize(rho))

    @classmethod
    def identity(cls, n_qubits: int) -> "SuperOperatorMatrix":
        return cls(n_qubits, np.eye(4**n_qubits, dtype=complex))


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def devectorize(vec: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(vec.size)))
    return np.asarray(vec).reshape(d, d, order="F")


def apply_channel(rho: DensityMatrix, ch: KrausChannel, targets) -> DensityMatrix:
    """Return ``sum_K K rho K^dagger`` with the channel acting on ``targets``."""
    if np.isscalar(targets):
        targets = (targets,)
    targets = check_targets(targets, rho.n_qubits)
    if ch.n_qubits != len(targets):
        raise DimensionMismatch(f"{ch.n_qubits}-qubit channel on {len(targets)} target(s)")
    n = rho.n_qubits
    t = rho.matrix.reshape((2,) * (2 * n))
    out = np.zeros_like(t)
    col_axes = [n + q for q in targets]
    for k in ch.kraus_ops:
        out += _apply_to_axes(_apply_to_axes(t, k, targets), k.conj(), col_axes)
    dim = 2**n
    return DensityMatrix(n, out.reshape(dim, dim))


def channel_to_superoperator(ch: KrausChannel) -> SuperOperatorMatrix:
    mat = sum(np.kron(k.conj(), k) for k in ch.kraus_ops)
    return SuperOperatorMatrix(ch.n_qubits, mat)


def superoperator_to_choi(sup: SuperOperatorMatrix) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| (x) E(|i><j|)``; PSD iff the map is completely positive."""
    d = 2**sup.n_qubits
    s4 = sup.matrix.reshape(d, d, d, d)  # [c', r', c, r]
    # Choi[(i, r'), (j, c')] = E(|i><j|)[r', c'] = S[c', r', j, i]
    return s4.transpose(3, 1, 2, 0).reshape(d * d, d * d)


def is_cptp(sup: SuperOperatorMatrix, tol: float = 1e-9) -> bool:
    d = 2**sup.n_qubits
    choi = superoperator_to_choi(sup)
    if np.max(np.abs(choi - choi.conj().T)) > tol:
        return False
    if np.linalg.eigvalsh(0.5 * (choi + choi.conj().T)).min() < -tol:
        return False
    # trace preservation: Tr_out(Choi) = I
    tr_out = np.trace(choi.reshape(d, d, d, d), axis1=1, axis2=3)
    return bool(np.max(np.abs(tr_out - np.eye(d))) <= tol)


def apply_superoperator(rho: DensityMatrix, sup: SuperOperatorMatrix, targets) -> DensityMatrix:
    """Act with a superoperator on the ``targets`` sub-register of ``rho``."""
    if np.isscalar(targets):
        targets = (targets,)
    targets = check_targets(targets, rho.n_qubits)
    k = len(targets)
    if sup.n_qubits != k:
        raise DimensionMismatch(f"{sup.n_qubits}-qubit superoperator on {k} target(s)")
    n = rho.n_qubits
    d = 2**k
    t = rho.matrix.reshape((2,) * (2 * n))
    front = list(targets) + [n + q for q in targets]
    t = np.moveaxis(t, front, list(range(2 * k)))
    rest_shape = t.shape[2 * k:]
    t = t.reshape(d, d, -1)
    s4 = sup.matrix.reshape(d, d, d, d)
    out = np.einsum("abcd,dcz->baz", s4, t)
    out = out.reshape((2,) * (2 * k) + rest_shape)
    out = np.moveaxis(out, list(range(2 * k)), front)
    dim = 2**n
    return DensityMatrix(n, out.reshape(dim, dim))


def superoperator_log(sup: SuperOperatorMatrix) -> SuperOperatorMatrix:
    """Principal matrix logarithm, i.e. a generator ``L`` with ``exp(L) = sup``."""
    m = sup.matrix
    eig = np.linalg.eigvals(m)
    if np.min(np.abs(eig)) < 1e-12:
        raise np.linalg.LinAlgError("superoperator is singular; no generator exists")
    return SuperOperatorMatrix(sup.n_qubits, la.logm(m))


def exp_lindbladian(gen: SuperOperatorMatrix, t: float = 1.0) -> SuperOperatorMatrix:
    """``exp(L t)`` for a generator given in superoperator form."""
    m = np.asarray(gen.matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch("generator must be square")
    if t < 0:
        raise ValueError("time must be non-negative")
    return SuperOperatorMatrix(gen.n_qubits, la.expm(m * t))


def embed_superoperator(sup: SuperOperatorMatrix, targets: Sequence[int], n_qubits: int) -> SuperOperatorMatrix:
    """Extend ``sup`` by the identity on all qubits outside ``targets``."""
    d_full = 2**n_qubits
    full = np.zeros((d_full * d_full, d_full * d_full), dtype=complex)
    # column j of the full superoperator is vec(E(e_j)) for basis operators e_j
    for j in range(d_full * d_full):
        basis = np.zeros(d_full * d_full, dtype=complex)
        basis[j] = 1.0
        rho = DensityMatrix(n_qubits, devectorize(basis))
        full[:, j] = vectorize(apply_superoperator(rho, sup, targets).matrix)
    return SuperOperatorMatrix(n_qubits, full)
