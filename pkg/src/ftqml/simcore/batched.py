"""Kernels acting on a stack of density matrices at once.

A batch is stored as a tensor of shape ``(B, 2, ..., 2, 2, ..., 2)`` with ``n``
row axes followed by ``n`` column axes.
"""

from __future__ import annotations

import numpy as np


def stack(states: np.ndarray, n_qubits: int) -> np.ndarray:
    """Batch of pure-state vectors ``(B, 2**n)`` to a batch of density tensors."""
    psi = np.asarray(states, dtype=complex)
    rho = psi[:, :, None] * psi.conj()[:, None, :]
    return rho.reshape((psi.shape[0],) + (2,) * (2 * n_qubits))


def _apply(t: np.ndarray, u: np.ndarray, axes: list) -> np.ndarray:
    k = len(axes)
    u = u.reshape((2,) * (2 * k))
    out = np.tensordot(u, t, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def unitary(rho: np.ndarray, u: np.ndarray, targets, n: int) -> np.ndarray:
    rows = [1 + q for q in targets]
    cols = [1 + n + q for q in targets]
    return _apply(_apply(rho, u, rows), u.conj(), cols)


def diagonal(rho: np.ndarray, phases: np.ndarray, n: int) -> np.ndarray:
    """Conjugation by a diagonal unitary given as a length ``2**n`` vector."""
    shape = (2,) * n
    ph = phases.reshape(shape)
    return rho * ph.reshape((1,) + shape + (1,) * n) * ph.conj().reshape((1,) + (1,) * n + shape)


def depolarize(rho: np.ndarray, q: int, p: float, n: int) -> np.ndarray:
    """``(1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)`` via the partial-trace form."""
    if p == 0:
        return rho
    lam = 1.0 - 4.0 * p / 3.0
    r, c = 1 + q, 1 + n + q
    traced = np.trace(rho, axis1=r, axis2=c)  # removes both axes
    mixed = np.expand_dims(np.expand_dims(traced, r), c)
    eye = np.zeros((2, 2))
    eye[0, 0] = eye[1, 1] = 0.5
    shape = [1] * rho.ndim
    shape[r], shape[c] = 2, 2
    return lam * rho + (1.0 - lam) * mixed * eye.reshape(shape)


def superop(rho: np.ndarray, s: np.ndarray, support, n: int) -> np.ndarray:
    """Apply a column-stacked superoperator on ``support`` to every batch member."""
    k = len(support)
    d = 2**k
    rows = [1 + q for q in support]
    cols = [1 + n + q for q in support]
    front = [0] + rows + cols
    t = np.moveaxis(rho, front, list(range(2 * k + 1)))
    rest = t.shape[2 * k + 1:]
    t = t.reshape(t.shape[0], d, d, -1)
    s4 = s.reshape(d, d, d, d)  # [c', r', c, r]
    out = np.einsum("abcd,ndcz->nbaz", s4, t)
    out = out.reshape((t.shape[0],) + (2,) * (2 * k) + rest)
    return np.moveaxis(out, list(range(2 * k + 1)), front)


def probabilities(rho: np.ndarray, n: int) -> np.ndarray:
    b = rho.shape[0]
    m = rho.reshape(b, 2**n, 2**n)
    return np.real(np.einsum("bii->bi", m))


def z_expectations(rho: np.ndarray, n: int) -> np.ndarray:
    """Per-qubit ``<Z>`` for every batch member, shape ``(B, n)``."""
    p = probabilities(rho, n).reshape((rho.shape[0],) + (2,) * n)
    out = np.empty((rho.shape[0], n))
    for q in range(n):
        axes = tuple(1 + j for j in range(n) if j != q)
        marg = p.sum(axis=axes)
        out[:, q] = marg[:, 0] - marg[:, 1]
    return out
