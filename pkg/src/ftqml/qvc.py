"""Variational classifier circuits: the layered Euler-rotation classifier and
the single-parameter two-qubit parity circuit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .noisechan import CrosstalkSpec, DepolarizingSpec, two_qubit_gate_noise
from .simcore import batched as B
from .simcore import gates as G
from .simcore.circuit import CircuitIR, Register
from .simcore.sampling import sample_indices, z_signs
from .simcore.states import PureState

ENTANGLERS = ("cz_chain", "cnot")
NOISE_POLICIES = ("single-qubit", "all", "none")


def amplitude_encode(pixels) -> PureState:
    v = np.asarray(pixels, dtype=float).ravel()
    n = int(np.log2(v.size)) if v.size else 0
    if v.size == 0 or 2**n != v.size:
        raise ValueError(f"amplitude encoding needs a power-of-two length, got {v.size}")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("cannot amplitude-encode the zero vector")
    return PureState(n, (v / norm).astype(complex))


def amplitude_batch(features: np.ndarray) -> np.ndarray:
    f = np.asarray(features, dtype=float)
    norms = np.linalg.norm(f, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise ValueError("cannot amplitude-encode the zero vector")
    return (f / norms).astype(complex)


def basis_encode(bits) -> PureState:
    bits = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("basis encoding takes bits")
    return PureState.basis(bits)


@dataclass(frozen=True)
class QvcArchitecture:
    n_qubits: int = 4
    n_layers: int = 5
    entangler: str = "cz_chain"
    noise_policy: str = "single-qubit"
    n_classes: int | None = None  # None: read classes off the per-qubit <Z>
    classical_layer: bool = False

    def __post_init__(self):
        if self.n_qubits < 1 or self.n_layers < 0:
            raise ValueError("need at least one qubit and a non-negative layer count")
        if self.entangler not in ENTANGLERS:
            raise ValueError(f"entangler must be one of {ENTANGLERS}")
        if self.noise_policy not in NOISE_POLICIES:
            raise ValueError(f"noise_policy must be one of {NOISE_POLICIES}")
        k = self.classes
        if not self.classical_layer and k > self.n_qubits:
            raise ValueError("without a classical layer each class needs its own qubit")

    @property
    def classes(self) -> int:
        return self.n_classes or self.n_qubits

    @property
    def n_params(self) -> int:
        return 3 * self.n_layers * self.n_qubits

    def entangling_pairs(self) -> list:
        return [(q, q + 1) for q in range(self.n_qubits - 1)]


def build_qvc_circuit(arch: QvcArchitecture, params) -> CircuitIR:
    """Per layer: an Euler triple ``RZ(alpha) RY(beta) RZ(gamma)`` on every qubit, then the entangler.

    The last rotation of each triple carries the ``"depol"`` tag; entanglers
    carry ``"two_qubit"`` only under the ``"all"`` noise policy.
    """
    params = np.asarray(params, dtype=float).ravel()
    if params.size != arch.n_params:
        raise ValueError(f"expected {arch.n_params} parameters, got {params.size}")
    theta = params.reshape(arch.n_layers, arch.n_qubits, 3)
    names = tuple(f"t{l}_{q}_{k}" for l in range(arch.n_layers) for q in range(arch.n_qubits) for k in range(3))
    ir = CircuitIR([Register("q", 0, arch.n_qubits)], [], names)
    tag1 = None if arch.noise_policy == "none" else "depol"
    tag2 = "two_qubit" if arch.noise_policy == "all" else None
    kind2 = "cz" if arch.entangler == "cz_chain" else "cnot"
    for l in range(arch.n_layers):
        for q in range(arch.n_qubits):
            a, b, g = theta[l, q]
            ir.add("rz", q, param=float(g), index=3 * (l * arch.n_qubits + q) + 2)
            ir.add("ry", q, param=float(b), index=3 * (l * arch.n_qubits + q) + 1)
            ir.add("rz", q, param=float(a), noise=tag1, index=3 * (l * arch.n_qubits + q))
        for a, b in arch.entangling_pairs():
            ir.add(kind2, a, b, noise=tag2)
    ir.validate()
    return ir


@dataclass
class NoiseConfig:
    p_depol: float = 0.0
    two_qubit_p: float = 0.0
    crosstalk_alpha: float = 0.0

    def __post_init__(self):
        DepolarizingSpec(self.p_depol)
        DepolarizingSpec(self.two_qubit_p)


def _two_qubit_maps(arch: QvcArchitecture, noise: NoiseConfig) -> dict:
    if arch.noise_policy != "all" or (noise.two_qubit_p == 0 and noise.crosstalk_alpha == 0):
        return {}
    cross = CrosstalkSpec(noise.crosstalk_alpha, n_qubits=arch.n_qubits)
    return {
        pair: two_qubit_gate_noise(*pair, DepolarizingSpec(noise.two_qubit_p), cross)
        for pair in arch.entangling_pairs()
    }


def evolve(arch: QvcArchitecture, params, psi: np.ndarray, noise: NoiseConfig | None = None, maps=None) -> np.ndarray:
    """Run the circuit on a batch of input vectors ``(B, 2**n)``; returns a density tensor."""
    noise = noise or NoiseConfig()
    n = arch.n_qubits
    ir = build_qvc_circuit(arch, params)
    rho = B.stack(psi, n)
    if maps is None:
        maps = _two_qubit_maps(arch, noise)
    for op in ir.ops:
        u = G.gate_matrix(op.kind, op.param)
        rho = B.unitary(rho, u, op.targets, n)
        if op.noise == "depol" and noise.p_depol > 0:
            rho = B.depolarize(rho, op.targets[0], noise.p_depol, n)
        elif op.noise == "two_qubit" and op.targets in maps:
            sup, support = maps[op.targets]
            rho = B.superop(rho, sup.matrix, support, n)
    return rho


def expectations(rho: np.ndarray, n: int, shots: int = 0, seed=None) -> np.ndarray:
    if shots == 0:
        return B.z_expectations(rho, n)
    probs = B.probabilities(rho, n)
    signs = np.stack([z_signs(n, q) for q in range(n)], axis=1)
    out = np.empty((probs.shape[0], n))
    for i, p in enumerate(probs):
        idx = sample_indices(np.clip(p, 0, None), shots, (*_seed_tuple(seed), i))
        out[i] = signs[idx].mean(axis=0)
    return out


def _seed_tuple(seed) -> tuple:
    if seed is None:
        raise ValueError("shot sampling needs a seed")
    return tuple(seed) if isinstance(seed, (tuple, list)) else (int(seed),)


@dataclass
class ClassicalLayer:
    weights: np.ndarray  # (classes, n_qubits)
    bias: np.ndarray  # (classes,)

    @classmethod
    def init(cls, classes: int, n_qubits: int, rng: np.random.Generator) -> "ClassicalLayer":
        w = rng.normal(scale=1.0 / np.sqrt(n_qubits), size=(classes, n_qubits))
        return cls(w, np.zeros(classes))

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return z @ self.weights.T + self.bias


def forward(
    arch: QvcArchitecture,
    params,
    samples,
    noise: NoiseConfig | None = None,
    shots: int = 0,
    seed=None,
    classical: ClassicalLayer | None = None,
) -> dict:
    """Per-qubit ``<Z>`` for each sample, plus class scores.

    ``samples`` is a feature matrix (amplitude encoding) or a batch of state
    vectors of length ``2**n``.
    """
    psi = amplitude_batch(np.atleast_2d(samples))
    if psi.shape[1] != 2**arch.n_qubits:
        raise ValueError(f"samples need {2 ** arch.n_qubits} features")
    rho = evolve(arch, params, psi, noise)
    z = expectations(rho, arch.n_qubits, shots, seed)
    scores = classical(z) if classical is not None else z[:, : arch.classes]
    return {"z": z, "scores": scores}


def softmax_xent(scores: np.ndarray, labels: np.ndarray) -> tuple:
    """Mean loss and its gradient with respect to the scores."""
    s = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(s)
    prob = e / e.sum(axis=1, keepdims=True)
    n = scores.shape[0]
    loss = -np.mean(np.log(prob[np.arange(n), labels] + 1e-300))
    grad = prob.copy()
    grad[np.arange(n), labels] -= 1.0
    return float(loss), grad / n


def predict(scores: np.ndarray) -> np.ndarray:
    return np.argmax(scores, axis=1)


# -- parity circuit -------------------------------------------------------

PARITY_ROTATIONS = (("rx", 0), ("rx", 1), ("rz", 0), ("rz", 1), ("ry", 0), ("ry", 1))


@dataclass(frozen=True)
class ParityCircuitSpec:
    theta: float = 0.0
    input_bits: tuple = (0, 0)
    shots: int = 1000


def build_parity_circuit(spec: ParityCircuitSpec | None = None) -> CircuitIR:
    """RX pair, RZ pair, CNOT(0 -> 1), RY pair, Z on qubit 0, measure qubit 0; all angles share ``theta``."""
    ir = CircuitIR([Register("q", 0, 2)], [], ("theta",))
    for k, (kind, q) in enumerate(PARITY_ROTATIONS[:4]):
        ir.add(kind, q, param="theta", rotation=k)
    ir.add("cnot", 0, 1)
    for k, (kind, q) in enumerate(PARITY_ROTATIONS[4:], start=4):
        ir.add(kind, q, param="theta", rotation=k)
    ir.add("z", 0)
    ir.add("measure", 0)
    ir.validate()
    return ir


def _rot_batch(kind: str, angles: np.ndarray) -> np.ndarray:
    """Stack of single-qubit rotations, shape ``(K, 2, 2)``."""
    c = np.cos(angles / 2)
    s = np.sin(angles / 2)
    out = np.zeros(angles.shape + (2, 2), dtype=complex)
    if kind == "rx":
        out[..., 0, 0] = out[..., 1, 1] = c
        out[..., 0, 1] = out[..., 1, 0] = -1j * s
    elif kind == "ry":
        out[..., 0, 0] = out[..., 1, 1] = c
        out[..., 0, 1] = -s
        out[..., 1, 0] = s
    else:
        out[..., 0, 0] = np.exp(-0.5j * angles)
        out[..., 1, 1] = np.exp(0.5j * angles)
    return out


def parity_logical_probs(theta: float, bits, signs: np.ndarray | None = None) -> np.ndarray:
    """Output distribution of the bare parity circuit.

    ``signs`` is an optional ``(K, 6)`` array of +-1 factors applied to the
    six rotation angles (in ``PARITY_ROTATIONS`` order); the result has shape
    ``(K, 4)`` indexed by ``2*b0 + b1``.
    """
    if signs is None:
        signs = np.ones((1, 6))
    signs = np.atleast_2d(signs).astype(float)
    k = signs.shape[0]
    psi = np.zeros((k, 2, 2), dtype=complex)
    psi[:, int(bits[0]), int(bits[1])] = 1.0
    ang = signs * float(theta)
    for j, (kind, q) in enumerate(PARITY_ROTATIONS):
        if j == 4:
            psi = psi.copy()
            psi[:, 1, :] = psi[:, 1, ::-1]  # CNOT 0 -> 1
        u = _rot_batch(kind, ang[:, j])
        if q == 0:
            psi = np.einsum("kab,kbc->kac", u, psi)
        else:
            psi = np.einsum("kcb,kab->kac", u, psi)
    # the trailing Z gate is diagonal and leaves the probabilities alone
    return (np.abs(psi) ** 2).reshape(k, 4)


def parity_expectation(theta: float, bits) -> float:
    """Exact ``<Z>`` on qubit 0 of the noiseless bare parity circuit."""
    p = parity_logical_probs(theta, bits)[0]
    return float(p[0] + p[1] - p[2] - p[3])


def parity_label(bits) -> int:
    return int(bits[0]) ^ int(bits[1])


def parity_target(bits) -> float:
    """``+1`` for even parity, ``-1`` for odd."""
    return 1.0 - 2.0 * parity_label(bits)


def parity_predict(z: float) -> int:
    return int(z < 0)
