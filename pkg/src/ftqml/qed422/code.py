"""The [[4,2,2]] code: codewords, stabilizers, logical operators, syndromes.

Physical qubits are ``q0..q3`` (``q0`` is the leftmost bit).  Logical
operators: ``X1 = X_q1 X_q3``, ``X2 = X_q2 X_q3``, ``Z1 = Z_q0 Z_q1``,
``Z2 = Z_q0 Z_q2``; the logical CNOT (control 1, target 2) is ``SWAP(q0, q1)``.
"""

from __future__ import annotations

from functools import reduce
from itertools import combinations, product

import numpy as np

from ..simcore import gates as G
from ..simcore.states import PureState

# logical (b1, b2) -> the two physical strings in its support
SUPPORT = {
    (0, 0): ("0000", "1111"),
    (0, 1): ("0011", "1100"),
    (1, 0): ("0101", "1010"),
    (1, 1): ("0110", "1001"),
}

LOGICAL_OF_STRING = {int(s, 2): b for b, pair in SUPPORT.items() for s in pair}

# index 2*b1 + b2 of the logical state for every 4-bit string, or -1 when outside the code
STRING_TO_LOGICAL = np.full(16, -1, dtype=int)
for _s, (_b1, _b2) in LOGICAL_OF_STRING.items():
    STRING_TO_LOGICAL[_s] = 2 * _b1 + _b2

LOGICAL_X = {1: "IXIX", 2: "IIXX"}
LOGICAL_Z = {1: "ZZII", 2: "ZIZI"}
STABILIZERS = {"X": "XXXX", "Z": "ZZZZ"}


def pauli_matrix(label: str) -> np.ndarray:
    return reduce(np.kron, (G.PAULIS[c] for c in label))


def codeword(b1: int, b2: int) -> np.ndarray:
    v = np.zeros(16, dtype=complex)
    for s in SUPPORT[(int(b1), int(b2))]:
        v[int(s, 2)] = 1 / np.sqrt(2)
    return v


def encode_logical(b1: int, b2: int) -> PureState:
    if b1 not in (0, 1) or b2 not in (0, 1):
        raise ValueError("logical bits must be 0 or 1")
    return PureState(4, codeword(b1, b2))


def codespace_projector() -> np.ndarray:
    return sum(np.outer(codeword(*b), codeword(*b).conj()) for b in SUPPORT)


def is_even(s: int) -> bool:
    return bin(s).count("1") % 2 == 0


def pauli_commutes(a: str, b: str) -> bool:
    anti = sum(1 for x, y in zip(a, b) if x != "I" and y != "I" and x != y)
    return anti % 2 == 0


def syndrome(pauli: str) -> tuple:
    """Flags ``(X-check, Z-check)`` raised by a Pauli error on the four physical qubits."""
    return (not pauli_commutes(pauli, STABILIZERS["X"]), not pauli_commutes(pauli, STABILIZERS["Z"]))


def single_qubit_errors():
    for q, p in product(range(4), "XYZ"):
        label = ["I"] * 4
        label[q] = p
        yield "".join(label)


def logical_action(pauli: str) -> np.ndarray:
    """4x4 matrix ``<a_L| P |b_L>`` of a Pauli restricted to the code space."""
    P = pauli_matrix(pauli)
    basis = [codeword(*b) for b in sorted(SUPPORT)]
    return np.array([[a.conj() @ P @ b for b in basis] for a in basis])


def undetectable_logical_errors(weight: int = 2) -> list:
    """Pauli strings of the given weight that raise no flag yet act non-trivially on the code space."""
    out = []
    for qs in combinations(range(4), weight):
        for ps in product("XYZ", repeat=weight):
            label = ["I"] * 4
            for q, p in zip(qs, ps):
                label[q] = p
            s = "".join(label)
            if any(syndrome(s)):
                continue
            act = logical_action(s)
            # proportional to the identity means a stabilizer, not a logical error
            if not np.allclose(act, act[0, 0] * np.eye(4)):
                out.append(s)
    return out
