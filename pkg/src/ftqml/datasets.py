"""Datasets and their CSV format.

File layout::

    # n_samples=24 n_features=2 n_classes=2
    label,f0,f1
    0,0,0
    ...

The comment line is required; the column header names the features.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_HEADER = re.compile(r"#\s*n_samples=(\d+)\s+n_features=(\d+)\s+n_classes=(\d+)")


@dataclass
class Dataset:
    features: np.ndarray  # (n_samples, n_features)
    labels: np.ndarray  # (n_samples,) integer class indices
    name: str = ""

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.features.ndim != 2 or self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("features must be (n_samples, n_features) matching labels")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def subset(self, idx) -> "Dataset":
        return Dataset(self.features[idx], self.labels[idx], self.name)


def save_csv(ds: Dataset, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# n_samples={ds.n_samples} n_features={ds.n_features} n_classes={ds.n_classes}\n")
        w = csv.writer(fh)
        w.writerow(["label"] + [f"f{i}" for i in range(ds.n_features)])
        for x, y in zip(ds.features, ds.labels):
            w.writerow([int(y)] + [repr(float(v)) for v in x])


def load_csv(path) -> Dataset:
    with open(path, newline="") as fh:
        first = fh.readline()
        m = _HEADER.match(first.strip())
        if not m:
            raise ValueError(f"{path}: missing '# n_samples=.. n_features=.. n_classes=..' line")
        n, f, k = (int(g) for g in m.groups())
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "label" or len(rows[0]) != f + 1:
        raise ValueError(f"{path}: column header does not match n_features={f}")
    body = np.array(rows[1:], dtype=float).reshape(-1, f + 1)
    if body.shape[0] != n:
        raise ValueError(f"{path}: header says {n} samples, found {body.shape[0]}")
    ds = Dataset(body[:, 1:], body[:, 0].astype(int), Path(path).stem)
    if ds.n_samples and ds.n_classes > k:
        raise ValueError(f"{path}: labels exceed n_classes={k}")
    return ds


def parity_dataset(copies: int = 6) -> Dataset:
    """The four two-bit inputs, repeated ``copies`` times; label is the XOR."""
    bits = np.array([(0, 0), (0, 1), (1, 0), (1, 1)] * copies)
    return Dataset(bits, bits[:, 0] ^ bits[:, 1], "parity")


def synthetic_blobs(
    n_samples: int = 200,
    n_classes: int = 4,
    side: int = 4,
    noise: float = 0.35,
    seed: int = 0,
) -> Dataset:
    """Tiny ``side x side`` images: class ``c`` lights up block ``c`` of a 2x2 grid of blocks."""
    if n_classes > 4:
        raise ValueError("the block layout supports at most 4 classes")
    rng = np.random.default_rng(seed)
    half = side // 2
    protos = np.zeros((n_classes, side, side))
    for c in range(n_classes):
        r, k = divmod(c, 2)
        protos[c, r * half:(r + 1) * half, k * half:(k + 1) * half] = 1.0
    labels = rng.integers(0, n_classes, size=n_samples)
    x = protos[labels] + noise * rng.random((n_samples, side, side))
    return Dataset(x.reshape(n_samples, -1), labels, "blobs")


def digits_4x4(classes=(0, 1, 2, 3), max_samples: int | None = None, seed: int = 0) -> Dataset:
    """scikit-learn 8x8 digits averaged down to 4x4 (needs the ``digits`` extra)."""
    try:
        from sklearn.datasets import load_digits
    except ImportError as exc:  # pragma: no cover - optional dependency
        raise ImportError("digits_4x4 needs scikit-learn (pip install artifact[digits])") from exc
    d = load_digits()
    keep = np.isin(d.target, classes)
    imgs = d.images[keep].reshape(-1, 4, 2, 4, 2).mean(axis=(2, 4))
    lab = np.searchsorted(np.asarray(sorted(classes)), d.target[keep])
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(lab))
    if max_samples is not None:
        order = order[:max_samples]
    x = imgs[order].reshape(len(order), -1) + 1e-3  # keep every image encodable
    return Dataset(x, lab[order], "digits4x4")
