"""Datasets for the classifier experiments.

The Iris subset (first two classes, 100 rows, 4 features) ships with the
package and is checksum-verified on load; the synthetic generator produces two
Gaussian blobs as a stand-in for externally preprocessed feature sets, and
``load_csv`` accepts any pre-reduced table with a trailing +/-1 label column.
All loaders return standardized features (mean 0, std 1 per column, population
statistics over the full training set — there is no held-out split here).
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from importlib import resources

import numpy as np

IRIS_RESOURCE = "iris.csv"
IRIS_SHA256 = "357ed817ad31289ea3a3e9985d5e57f5d38eec3deda5bbf4543e608655658e63"


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    name: str
    note: str = ""

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2:
            raise ValueError("X must be a 2-D matrix")
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"{X.shape[0]} rows of X but {y.shape[0]} labels")
        if not np.all(np.isfinite(X)):
            raise ValueError("features must be finite")
        if not np.all(np.isin(y, (-1, 1))):
            raise ValueError("labels must be +1 or -1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n_examples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


def standardize(X: np.ndarray) -> np.ndarray:
    """Center and scale each column to mean 0, std 1 (population statistics)."""
    X = np.asarray(X, dtype=np.float64)
    std = X.std(axis=0)
    if np.any(std == 0):
        raise ValueError("cannot standardize a constant feature column")
    return (X - X.mean(axis=0)) / std


def _permute(X, y, seed):
    if seed is None:
        return X, y
    order = np.random.default_rng(seed).permutation(X.shape[0])
    return X[order], y[order]


def load_iris(seed=None) -> Dataset:
    """Bundled Iris rows for the first two classes, labels +1 (setosa) and
    -1 (versicolor); optional deterministic row permutation by seed."""
    text = resources.files("shadowopt").joinpath("resources", IRIS_RESOURCE).read_text()
    digest = hashlib.sha256(text.encode()).hexdigest()
    if digest != IRIS_SHA256:
        raise ValueError(
            f"bundled iris data is corrupt: sha256 {digest} != {IRIS_SHA256}"
        )
    rows = list(csv.reader(text.splitlines()[1:]))
    X = np.array([[float(v) for v in row[:-1]] for row in rows])
    y = np.array([int(row[-1]) for row in rows])
    X, y = _permute(standardize(X), y, seed)
    return Dataset(X, y, "iris", "bundled Iris, first two classes, labels +/-1")


def make_synthetic(
    n_features: int = 10, n: int = 100, seed: int = 0, separation: float = 2.0
) -> Dataset:
    """Two isotropic Gaussian blobs with centers ``separation`` apart."""
    if n < 2:
        raise ValueError("need at least 2 examples")
    if n_features < 1:
        raise ValueError("need at least 1 feature")
    rng = np.random.default_rng(seed)
    half = separation / 2.0
    center = np.full(n_features, half / np.sqrt(n_features))
    n_pos = n // 2
    y = np.concatenate([np.ones(n_pos), -np.ones(n - n_pos)]).astype(np.int64)
    X = rng.standard_normal((n, n_features)) + np.outer(y, center)
    order = rng.permutation(n)
    return Dataset(
        standardize(X[order]),
        y[order],
        "synthetic",
        f"two Gaussian blobs, separation {separation:g}, seed {seed}",
    )


def load_csv(path) -> Dataset:
    """Feature table with a trailing label column of +1/-1; a non-numeric
    first row is treated as a header."""
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError(f"{path}: empty file")
    try:
        float(rows[0][0])
    except ValueError:
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    width = len(rows[0])
    if width < 2:
        raise ValueError(f"{path}: need at least one feature column plus labels")
    if any(len(row) != width for row in rows):
        raise ValueError(f"{path}: ragged rows")
    X = np.array([[float(v) for v in row[:-1]] for row in rows])
    labels = []
    for row in rows:
        value = float(row[-1])
        if value not in (1.0, -1.0):
            raise ValueError(f"{path}: label {row[-1]!r} is not +1 or -1")
        labels.append(int(value))
    return Dataset(standardize(X), np.array(labels), "csv", f"loaded from {path}")
