"""Standard gate matrices. Rotations use the half-angle convention ``exp(-i theta P / 2)``."""

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j]).astype(complex)

PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def rot(axis, theta: float) -> np.ndarray:
    """Rotation about a unit axis ``n``: ``exp(-i theta n.sigma / 2)``."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    gen = n[0] * X + n[1] * Y + n[2] * Z
    return np.cos(theta / 2) * I2 - 1j * np.sin(theta / 2) * gen


def euler(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """``RZ(alpha) RY(beta) RZ(gamma)``."""
    return rz(alpha) @ ry(beta) @ rz(gamma)


def zz(alpha: float) -> np.ndarray:
    """``exp(-i alpha Z(x)Z)``; note the full angle, as used for crosstalk couplings."""
    ph = np.exp(-1j * alpha * np.array([1, -1, -1, 1]))
    return np.diag(ph)


FIXED = {
    "i": I2,
    "x": X,
    "y": Y,
    "z": Z,
    "h": H,
    "s": S,
    "cnot": CNOT,
    "cx": CNOT,
    "cz": CZ,
    "swap": SWAP,
}

PARAMETRIC = {"rx": rx, "ry": ry, "rz": rz, "zz": zz}

ARITY = {k: int(np.log2(v.shape[0])) for k, v in FIXED.items()}
ARITY.update({"rx": 1, "ry": 1, "rz": 1, "zz": 2})


def gate_matrix(kind: str, param=None) -> np.ndarray:
    kind = kind.lower()
    if kind in FIXED:
        return FIXED[kind]
    if kind in PARAMETRIC:
        if param is None:
            raise ValueError(f"gate {kind!r} needs an angle")
        return PARAMETRIC[kind](float(param))
    raise KeyError(f"unknown gate kind {kind!r}")
