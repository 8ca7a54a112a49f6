"""Exact noisy statistics of the encoded parity circuit by Pauli-frame propagation.

Every gate in the circuit is Clifford except the six ancilla rotations, and a
Pauli ``P`` commutes past ``R_A(theta)`` as ``R_A(theta) P = P R_A(+-theta)``
(minus when ``P`` anticommutes with ``A``).  Pushing an inserted Pauli to the
end of the circuit therefore yields a GF(2) signature:

* bits 0..5   rotation ``k`` runs with its angle negated;
* bits 6..9   X component on physical ``q0..q3`` at read-out;
* bits 10+2(k-1), 11+2(k-1)   X-check and Z-check of round ``k`` flip.

Because the noiseless syndrome outcomes are deterministic, the outcome of a
shot is fixed by the XOR of the signatures of the Paulis that fired.  The
distribution of that XOR is computed exactly by folding in one site at a time.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..qvc import parity_logical_probs
from .code import STRING_TO_LOGICAL
from .protocol import N_PHYSICAL, build_encoded_parity
from .shots import LogicalReadout, NoSurvivingShots, readout_from_physical
from .sites import QedNoise, noise_sites

N_ROT = 6
X_BASE = N_ROT
FLAG_BASE = N_ROT + N_PHYSICAL
MAX_ROUNDS = 5

_ANTI = {"rx": lambda x, z: z, "rz": lambda x, z: x, "ry": lambda x, z: x ^ z}


def flag_bit(round_: int, check: str) -> int:
    return FLAG_BASE + 2 * (round_ - 1) + (0 if check == "X" else 1)


def propagate(ir, op_index: int, qubit: int, pauli: str) -> int:
    """Signature of ``pauli`` on ``qubit`` inserted right after op ``op_index``."""
    x = 1 << qubit if pauli in "XY" else 0
    z = 1 << qubit if pauli in "ZY" else 0
    sig = 0
    for op in ir.ops[op_index + 1:]:
        k = op.kind
        t = op.targets
        if k == "h":
            m = 1 << t[0]
            bx, bz = x & m, z & m
            x = (x & ~m) | bz
            z = (z & ~m) | bx
        elif k in ("cnot", "cx"):
            c, g = t
            if x >> c & 1:
                x ^= 1 << g
            if z >> g & 1:
                z ^= 1 << c
        elif k == "cz":
            a, b = t
            za = x >> b & 1
            zb = x >> a & 1
            z ^= (za << a) | (zb << b)
        elif k == "swap":
            a, b = t
            for reg_ in ("x", "z"):
                v = x if reg_ == "x" else z
                ba, bb = v >> a & 1, v >> b & 1
                if ba != bb:
                    v ^= (1 << a) | (1 << b)
                if reg_ == "x":
                    x = v
                else:
                    z = v
        elif k == "s":
            if x >> t[0] & 1:
                z ^= 1 << t[0]
        elif k in _ANTI:
            q = t[0]
            if _ANTI[k](x >> q & 1, z >> q & 1):
                sig ^= 1 << op.meta["rotation"]
        elif k == "measure":
            q = t[0]
            if x >> q & 1:
                if "check" in op.meta:
                    sig ^= 1 << flag_bit(op.meta["round"], op.meta["check"])
                elif q < N_PHYSICAL:
                    sig ^= 1 << (X_BASE + q)
        elif k in ("x", "y", "z", "i", "barrier"):
            pass
        else:
            raise ValueError(f"frame propagation does not handle {k!r}")
    return sig


def _flip_axes(sig: int, nbits: int) -> tuple:
    return tuple(j for j in range(nbits) if sig >> j & 1)


def _fold(T: np.ndarray, a: int, b: int, r: float, nbits: int) -> np.ndarray:
    """One site: identity with ``1-r``; X, Z, Y with ``r/3`` each (signatures a, b, a^b)."""
    if r == 0 or (a == 0 and b == 0):
        return T
    out = (1.0 - r) * T
    for s in (a, b, a ^ b):
        ax = _flip_axes(s, nbits)
        out += (r / 3.0) * (np.flip(T, ax) if ax else T)
    return out


# physical string index for every (x-frame, string) offset: t ^ x
_XOR = np.bitwise_xor.outer(np.arange(16), np.arange(16))  # [x, t]
_SIGNS = 1.0 - 2.0 * ((np.arange(64)[:, None] >> np.arange(N_ROT)[None, :]) & 1)
_VALID = STRING_TO_LOGICAL >= 0


@dataclass(frozen=True)
class LandscapeKey:
    bits: tuple
    model: str
    p: float
    f_anc: float
    two_qubit_multiplier: float
    cadence: int
    max_rounds: int

    def digest(self) -> str:
        return hashlib.sha1(json.dumps(asdict(self), sort_keys=True).encode()).hexdigest()[:16]


class Landscape:
    """Exact outcome statistics of the noisy encoded circuit for one input.

    ``W[r, f, x]`` is the probability that the fired Paulis negate the
    rotation set ``f``, leave read-out X frame ``x``, and raise no flag in
    the first ``r`` rounds.
    """

    def __init__(self, bits, W: np.ndarray, key: LandscapeKey | None = None):
        self.bits = tuple(int(b) for b in bits)
        self.W = np.asarray(W, dtype=float)
        self.key = key

    @property
    def max_rounds(self) -> int:
        return self.W.shape[0] - 1

    def survival(self, rounds: int) -> float:
        return float(self.W[rounds].sum())

    def physical(self, theta: float, rounds: int) -> np.ndarray:
        """Joint probability of surviving the checks and reading string ``t``."""
        logical = parity_logical_probs(theta, self.bits, _SIGNS)  # (64, 4)
        q16 = np.where(_VALID[None, :], logical[:, STRING_TO_LOGICAL] / 2.0, 0.0)  # (64, 16)
        return np.einsum("fx,fxt->t", self.W[rounds], q16[:, _XOR])

    def readout(self, theta: float, rounds: int, shots: int = 0, seed=None) -> LogicalReadout:
        return readout_from_physical(self.physical(theta, rounds), shots, seed)


def compute_landscape(bits, noise: QedNoise, max_rounds: int = MAX_ROUNDS) -> Landscape:
    reg = build_encoded_parity(bits, max_rounds)
    ir = reg.ir
    nbits = FLAG_BASE + 2 * max_rounds
    key = LandscapeKey(tuple(bits), noise.model, noise.p, noise.f_anc, noise.two_qubit_multiplier,
                       noise.cadence, max_rounds)
    W = np.zeros((max_rounds + 1, 64, 16))
    T = np.zeros((2,) * nbits)
    T[(0,) * nbits] = 1.0
    sites = noise_sites(ir, noise) if noise.p > 0 else []
    by_block: dict = {}
    for s in sites:
        by_block.setdefault(_block_index(ir.ops[s.op_index].meta.get("block", "main")), []).append(s)
    for r in range(max_rounds + 1):
        for s in by_block.get(r, []):
            a = propagate(ir, s.op_index, s.qubit, "X")
            b = propagate(ir, s.op_index, s.qubit, "Z")
            T = _fold(T, a, b, noise.site_rate(s), nbits)
        W[r] = _snapshot(T, r, max_rounds)
    return Landscape(bits, W, key)


def _block_index(block: str) -> int:
    return 0 if block == "main" else int(block.removeprefix("round"))


def _snapshot(T: np.ndarray, r: int, max_rounds: int) -> np.ndarray:
    later = tuple(range(FLAG_BASE + 2 * r, FLAG_BASE + 2 * max_rounds))
    M = T.sum(axis=later) if later else T
    M = M[(slice(None),) * FLAG_BASE + (0,) * (2 * r)]
    order = list(range(N_ROT - 1, -1, -1)) + list(range(X_BASE, X_BASE + N_PHYSICAL))
    return M.transpose(order).reshape(64, 16)


class LandscapeCache:
    """Landscapes memoised in memory and optionally as ``.npz`` files on disk."""

    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory else None
        self._mem: dict = {}

    def get(self, bits, noise: QedNoise, max_rounds: int = MAX_ROUNDS) -> Landscape:
        key = LandscapeKey(tuple(int(b) for b in bits), noise.model, noise.p, noise.f_anc,
                           noise.two_qubit_multiplier, noise.cadence, max_rounds)
        if key in self._mem:
            return self._mem[key]
        path = self.directory / f"landscape-{key.digest()}.npz" if self.directory else None
        if path is not None and path.exists():
            land = Landscape(key.bits, np.load(path)["W"], key)
        else:
            land = compute_landscape(key.bits, noise, max_rounds)
            if path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
                np.savez_compressed(path, W=land.W, key=json.dumps(asdict(key)))
        self._mem[key] = land
        return land


class RealizationSampler:
    """Per-circuit noise: one Pauli realization is shared by every shot of an evaluation.

    An evaluation whose realization raises a flag in the first ``rounds``
    rounds is discarded as a whole and re-run, up to ``max_attempts`` times.
    Read-out post-selection of odd strings still happens shot by shot.
    """

    def __init__(self, bits, noise: QedNoise, max_rounds: int = MAX_ROUNDS, max_attempts: int = 200):
        reg = build_encoded_parity(bits, max_rounds)
        sites = noise_sites(reg.ir, noise) if noise.p > 0 else []
        self.bits = tuple(int(b) for b in bits)
        self.max_rounds = max_rounds
        self.max_attempts = max_attempts
        a = np.array([propagate(reg.ir, s.op_index, s.qubit, "X") for s in sites], dtype=np.int64)
        b = np.array([propagate(reg.ir, s.op_index, s.qubit, "Z") for s in sites], dtype=np.int64)
        self.signatures = np.stack([a, b, a ^ b], axis=1) if sites else np.zeros((0, 3), dtype=np.int64)
        self.rates = np.array([noise.site_rate(s) for s in sites])
        # round blocks past the requested count are not part of the executed circuit
        self.block = np.array([_block_index(reg.ir.ops[s.op_index].meta.get("block", "main")) for s in sites], dtype=int)

    def draw(self, rng: np.random.Generator, count: int = 1, rounds: int | None = None) -> np.ndarray:
        """``count`` signatures, each the XOR of the Paulis fired in one realization."""
        rounds = self.max_rounds if rounds is None else rounds
        live = self.block <= rounds
        sigs, rates = self.signatures[live], self.rates[live]
        n = rates.size
        if n == 0:
            return np.zeros(count, dtype=np.int64)
        fire = rng.random((count, n)) < rates
        pick = rng.integers(0, 3, (count, n))
        sig = np.where(fire, sigs[np.arange(n), pick], 0)
        return np.bitwise_xor.reduce(sig, axis=1)

    def realization(self, rounds: int, rng: np.random.Generator) -> tuple:
        """``(signature, attempts)`` of the first realization passing the checks, or ``(None, attempts)``."""
        mask = (1 << (2 * rounds)) - 1
        tried = 0
        while tried < self.max_attempts:
            batch = self.draw(rng, min(16, self.max_attempts - tried), rounds)
            ok = np.flatnonzero(((batch >> FLAG_BASE) & mask) == 0)
            if ok.size:
                return int(batch[ok[0]]), tried + int(ok[0]) + 1
            tried += batch.size
        return None, tried

    def readout(self, theta: float, rounds: int, shots: int = 0, seed=None) -> LogicalReadout:
        if not 0 <= rounds <= self.max_rounds:
            raise ValueError(f"rounds must lie in 0..{self.max_rounds}")
        if seed is None:
            raise ValueError("per-circuit noise sampling needs a seed")
        root = tuple(seed) if isinstance(seed, (tuple, list)) else (int(seed),)
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([*root, 0x5EED])))
        sig, attempts = self.realization(rounds, rng)
        if sig is None:
            raise NoSurvivingShots(f"every one of {attempts} realizations was flagged")
        f = sig & 63
        x = (sig >> X_BASE) & 15
        xi = int(f"{x:04b}"[::-1], 2)  # frame bits are q0-first, string indices MSB-first
        logical = parity_logical_probs(theta, self.bits, _SIGNS[f:f + 1])[0]
        q16 = np.where(_VALID, logical[STRING_TO_LOGICAL] / 2.0, 0.0)[_XOR[xi]]
        out = readout_from_physical(q16, shots, root)
        # whole-evaluation discards count towards the discard rate
        out.discard_rate = 1.0 - (1.0 - out.discard_rate) / attempts
        return out
