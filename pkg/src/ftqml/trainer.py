"""Training loops for the encoded parity classifier and the layered classifier."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Callable

import numpy as np

from . import datasets
from .qed422.frames import LandscapeCache, RealizationSampler
from .qed422.shots import NoSurvivingShots
from .qed422.sites import QedNoise
from .qvc import (
    ClassicalLayer,
    NoiseConfig,
    QvcArchitecture,
    amplitude_batch,
    evolve,
    expectations,
    parity_predict,
    parity_target,
    predict,
    softmax_xent,
)

TASKS = ("parity422", "qvc_multiclass")
NOISE_SAMPLING = ("per_circuit", "per_shot")
FINAL_WINDOW = 40
DEFAULT_SEEDS = tuple(range(10))


@dataclass
class TrainConfig:
    task: str = "parity422"
    learning_rate: float = 0.3
    batch_size: int = 8
    iterations: int = 100
    shots: int = 1000
    seed: int = 0
    # parity422
    noise_model: str = "gate"
    p: float = 0.0
    rounds: int = 0
    f_anc: float = 1.0
    noise_sampling: str = "per_circuit"
    copies: int = 6
    init_range: float = math.pi / 4
    # qvc_multiclass
    n_qubits: int = 4
    n_layers: int = 5
    n_classes: int = 4
    p_depol: float = 0.0
    dataset: str = "blobs"
    n_samples: int = 200
    classical_layer: bool = False

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}")
        if self.batch_size < 1 or self.iterations < 1:
            raise ValueError("batch_size and iterations must be positive")
        if self.shots < 0:
            raise ValueError("shots must be >= 0")
        if not 0 <= self.rounds <= 5:
            raise ValueError("rounds must lie in 0..5")
        if self.noise_sampling not in NOISE_SAMPLING:
            raise ValueError(f"noise_sampling must be one of {NOISE_SAMPLING}")
        QedNoise(self.noise_model, self.p, self.f_anc)
        NoiseConfig(self.p_depol)

    @classmethod
    def parity(cls, **kw) -> "TrainConfig":
        return cls(task="parity422", **kw)

    @classmethod
    def qvc(cls, **kw) -> "TrainConfig":
        base = dict(task="qvc_multiclass", learning_rate=0.005, batch_size=50, shots=10000, iterations=20)
        base.update(kw)
        return cls(**base)

    @property
    def qed_noise(self) -> QedNoise:
        return QedNoise(self.noise_model, self.p, self.f_anc)

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha1(blob.encode()).hexdigest()[:12]

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


TRACE_COLUMNS = ("iteration", "accuracy", "loss", "avg_sq_gradient", "discard_rate")


@dataclass
class TrainingTrace:
    accuracy: list = field(default_factory=list)
    loss: list = field(default_factory=list)
    avg_sq_gradient: list = field(default_factory=list)
    discard_rate: list = field(default_factory=list)
    seed: int = 0
    config_hash: str = ""
    params: list = field(default_factory=list)

    def record(self, acc, loss, g2, discard) -> None:
        self.accuracy.append(float(acc))
        self.loss.append(float(loss))
        self.avg_sq_gradient.append(float(g2))
        self.discard_rate.append(float(discard))

    def __len__(self) -> int:
        return len(self.accuracy)

    def final_accuracy(self, window: int = FINAL_WINDOW) -> float:
        return float(np.mean(self.accuracy[-window:]))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(f"# seed={self.seed} config_hash={self.config_hash}\n")
            w = csv.writer(fh)
            w.writerow(TRACE_COLUMNS)
            for i in range(len(self)):
                w.writerow([i, repr(self.accuracy[i]), repr(self.loss[i]),
                            repr(self.avg_sq_gradient[i]), repr(self.discard_rate[i])])

    @classmethod
    def from_csv(cls, path) -> "TrainingTrace":
        with open(path, newline="") as fh:
            meta = dict(kv.split("=", 1) for kv in fh.readline().lstrip("# ").split())
            rows = list(csv.DictReader(fh))
        tr = cls(seed=int(meta["seed"]), config_hash=meta["config_hash"])
        for r in rows:
            tr.record(float(r["accuracy"]), float(r["loss"]), float(r["avg_sq_gradient"]), float(r["discard_rate"]))
        return tr


def parameter_shift_gradient(
    loss_fn: Callable,
    params,
    shift: float = math.pi / 2,
    shots: int = 0,
    seed=None,
) -> np.ndarray:
    """``[L(theta_k + s) - L(theta_k - s)] / 2`` for every component.

    ``loss_fn(params, shots, seed)`` receives a per-evaluation seed tuple
    ``(*seed, k, 1 | 2)`` when a seed is given, else ``None``.
    """
    base = np.atleast_1d(np.asarray(params, dtype=float))
    grad = np.empty_like(base)
    root = None if seed is None else tuple(seed) if isinstance(seed, (tuple, list)) else (seed,)
    for k in range(base.size):
        vals = []
        for sgn in (1, -1):
            p = base.copy()
            p.flat[k] += sgn * shift
            s = None if root is None else (*root, k, sgn % 3)
            vals.append(loss_fn(p, shots, s))
        grad.flat[k] = (vals[0] - vals[1]) / 2.0
    return grad


def _stream(seed: int, *tag) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *tag])))


def _batches(n: int, size: int, rng: np.random.Generator):
    while True:
        perm = rng.permutation(n)
        for i in range(0, n - size + 1, size):
            yield perm[i:i + size]


# -- parity task ----------------------------------------------------------


class ParityModel:
    """Read-out of the noisy encoded parity circuit.

    ``per_shot`` draws an independent Pauli realization for every shot, which
    the exact landscapes integrate out.  ``per_circuit`` draws one realization
    per circuit evaluation and re-runs evaluations whose checks fire.
    """

    def __init__(self, noise: QedNoise, rounds: int, cache: LandscapeCache | None = None,
                 sampling: str = "per_circuit"):
        self.rounds = rounds
        inputs = [(0, 0), (0, 1), (1, 0), (1, 1)]
        if sampling == "per_shot":
            cache = cache or LandscapeCache()
            self.land = {b: cache.get(b, noise) for b in inputs}
        else:
            self.land = {b: RealizationSampler(b, noise) for b in inputs}

    def z1(self, theta: float, bits, shots: int, seed) -> tuple:
        """``(<Z_L1>, discard rate)``; no survivors reads as ``<Z> = 0``."""
        try:
            r = self.land[tuple(bits)].readout(theta, self.rounds, shots, seed)
        except NoSurvivingShots:
            return 0.0, 1.0
        return r.z1, float(r.discard_rate)


def train_parity(cfg: TrainConfig, cache: LandscapeCache | None = None) -> TrainingTrace:
    data = datasets.parity_dataset(cfg.copies)
    bits = [tuple(int(v) for v in row) for row in data.features]
    targets = np.array([parity_target(b) for b in bits])
    model = ParityModel(cfg.qed_noise, cfg.rounds, cache, cfg.noise_sampling)
    rng = _stream(cfg.seed, 0)
    theta = float(rng.uniform(-cfg.init_range, cfg.init_range))
    batches = _batches(len(bits), cfg.batch_size, rng)
    trace = TrainingTrace(seed=cfg.seed, config_hash=cfg.digest())

    for it in range(cfg.iterations):
        idx = next(batches)

        def batch_loss(th, shots, seed):
            th = float(np.atleast_1d(th)[0])
            losses = []
            for j in idx:
                s = (*seed, int(j))
                z, _ = model.z1(th, bits[j], shots, s)
                losses.append((z - targets[j]) ** 2)
            return float(np.mean(losses))

        g = parameter_shift_gradient(batch_loss, [theta], shots=cfg.shots, seed=(cfg.seed, it, 1))
        theta -= cfg.learning_rate * float(g[0])

        zs, ds = zip(*(model.z1(theta, b, cfg.shots, (cfg.seed, it, 2, j)) for j, b in enumerate(bits)))
        zs = np.array(zs)
        acc = np.mean([parity_predict(z) == (t < 0) for z, t in zip(zs, targets)])
        trace.record(acc, np.mean((zs - targets) ** 2), float(g[0] ** 2), np.mean(ds))
    trace.params = [theta]
    return trace


# -- layered classifier -----------------------------------------------------


def load_dataset(cfg: TrainConfig) -> datasets.Dataset:
    side = int(round(math.sqrt(2**cfg.n_qubits)))
    if cfg.dataset == "blobs":
        if side * side != 2**cfg.n_qubits:
            raise ValueError("the blob dataset needs an even qubit count")
        return datasets.synthetic_blobs(cfg.n_samples, cfg.n_classes, side, seed=cfg.seed)
    if cfg.dataset == "digits":
        if cfg.n_qubits != 4:
            raise ValueError("the 4x4 digits dataset needs 4 qubits")
        return datasets.digits_4x4(tuple(range(cfg.n_classes)), cfg.n_samples, cfg.seed)
    return datasets.load_csv(cfg.dataset)


class QvcObjective:
    """Softmax cross-entropy of the layered classifier on one batch."""

    def __init__(self, arch: QvcArchitecture, noise: NoiseConfig, shots: int):
        self.arch, self.noise, self.shots = arch, noise, shots

    def z(self, params, psi, seed=None) -> np.ndarray:
        rho = evolve(self.arch, params, psi, self.noise)
        return expectations(rho, self.arch.n_qubits, self.shots, seed)

    def scores(self, z, head: ClassicalLayer | None):
        return head(z) if head is not None else z[:, : self.arch.classes]

    def gradient(self, params, psi, labels, head, seed) -> tuple:
        z0 = self.z(params, psi, None if self.shots == 0 else (*seed, 0))
        loss, gs = softmax_xent(self.scores(z0, head), labels)
        gz = gs @ head.weights if head is not None else np.pad(gs, ((0, 0), (0, z0.shape[1] - gs.shape[1])))
        grad = np.empty(params.size)
        for k in range(params.size):
            zz = []
            for sgn in (1, -1):
                p = params.copy()
                p[k] += sgn * math.pi / 2
                zz.append(self.z(p, psi, None if self.shots == 0 else (*seed, k + 1, sgn % 3)))
            grad[k] = np.sum(gz * (zz[0] - zz[1]) / 2.0)
        head_grad = None
        if head is not None:
            head_grad = (gs.T @ z0, gs.sum(axis=0))
        return loss, grad, head_grad, z0


def train_qvc(cfg: TrainConfig) -> TrainingTrace:
    ds = load_dataset(cfg)
    arch = QvcArchitecture(cfg.n_qubits, cfg.n_layers, n_classes=cfg.n_classes, classical_layer=cfg.classical_layer)
    psi_all = amplitude_batch(ds.features)
    rng = _stream(cfg.seed, 0)
    params = rng.uniform(0, 2 * math.pi, arch.n_params)
    head = ClassicalLayer.init(cfg.n_classes, cfg.n_qubits, rng) if cfg.classical_layer else None
    obj = QvcObjective(arch, NoiseConfig(cfg.p_depol), cfg.shots)
    batches = _batches(ds.n_samples, min(cfg.batch_size, ds.n_samples), rng)
    trace = TrainingTrace(seed=cfg.seed, config_hash=cfg.digest())
    for it in range(cfg.iterations):
        idx = next(batches)
        loss, grad, hgrad, z0 = obj.gradient(params, psi_all[idx], ds.labels[idx], head, (cfg.seed, it))
        params = params - cfg.learning_rate * grad
        if head is not None:
            head.weights -= cfg.learning_rate * hgrad[0]
            head.bias -= cfg.learning_rate * hgrad[1]
        acc = np.mean(predict(obj.scores(z0, head)) == ds.labels[idx])
        trace.record(acc, loss, np.mean(grad**2), 0.0)
    trace.params = params.tolist()
    return trace


def train(cfg: TrainConfig, cache: LandscapeCache | None = None) -> TrainingTrace:
    if cfg.task == "parity422":
        return train_parity(cfg, cache)
    return train_qvc(cfg)
