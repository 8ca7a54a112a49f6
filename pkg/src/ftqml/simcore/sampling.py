"""Shot sampling with counter-based random streams.

Every block of ``BLOCK`` shots draws from its own Philox counter, so any
partition of the shots across workers reproduces the serial result exactly.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from .states import DensityMatrix, PureState, QubitIndexError, format_bitstring

BLOCK = 1024


def _key(seed) -> int:
    return int(np.random.SeedSequence(seed).generate_state(1, dtype=np.uint64)[0])


def shot_uniforms(seed, start: int, count: int) -> np.ndarray:
    """Uniform variates for shots ``start .. start+count-1`` of stream ``seed``."""
    key = _key(seed)
    out = np.empty(count)
    pos = 0
    while pos < count:
        shot = start + pos
        block, offset = divmod(shot, BLOCK)
        gen = np.random.Generator(np.random.Philox(key=key, counter=block))
        take = min(BLOCK - offset, count - pos)
        out[pos:pos + take] = gen.random(offset + take)[offset:]
        pos += take
    return out


def _probabilities(state) -> np.ndarray:
    if isinstance(state, PureState):
        p = state.probabilities()
    elif isinstance(state, DensityMatrix):
        p = state.probabilities()
    else:
        p = np.asarray(state, dtype=float)
    return p / p.sum()


def sample_indices(probs: np.ndarray, shots: int, seed, start: int = 0) -> np.ndarray:
    if shots < 1:
        raise ValueError("need at least one shot")
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    u = shot_uniforms(seed, start, shots)
    return np.searchsorted(cdf, u, side="right")


def sample_bitstrings(state, shots: int, rng_seed, start: int = 0) -> Counter:
    """Counts of measured bitstrings (qubit 0 leftmost)."""
    n = state.n_qubits
    idx = sample_indices(_probabilities(state), shots, rng_seed, start)
    vals, counts = np.unique(idx, return_counts=True)
    return Counter({format_bitstring(int(v), n): int(c) for v, c in zip(vals, counts)})


def z_signs(n_qubits: int, qubit: int) -> np.ndarray:
    """``+1/-1`` eigenvalue of ``Z_qubit`` for every basis index."""
    bits = (np.arange(2**n_qubits) >> (n_qubits - 1 - qubit)) & 1
    return 1.0 - 2.0 * bits


def measure_z_expectation(state, qubit: int, shots: int = 0, rng_seed=None) -> float:
    """``<Z_qubit>``; exact for ``shots == 0``, otherwise the mean of sampled ``+-1`` outcomes."""
    n = state.n_qubits
    if not 0 <= qubit < n:
        raise QubitIndexError(f"qubit {qubit} outside register of {n}")
    p = _probabilities(state)
    signs = z_signs(n, qubit)
    if shots == 0:
        return float(np.dot(p, signs))
    if shots < 0:
        raise ValueError("shots must be >= 0")
    idx = sample_indices(p, shots, rng_seed)
    return float(signs[idx].mean())
