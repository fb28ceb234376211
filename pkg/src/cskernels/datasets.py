"""Synthetic two-class planar datasets and deterministic resampling helpers.

Two generators, both emitting labels in {-1, +1}:

* moons: ceil(n/2) points on the upper unit half-circle (class -1) and
  floor(n/2) points on a mirrored half-circle shifted to interleave with it
  (class +1), parameter values evenly spaced over [0, pi].
* circles: points evenly spaced over [0, 2*pi) on the unit circle (class -1)
  and on a concentric circle of radius ``factor`` (class +1).

Noise is additive zero-mean Gaussian with standard deviation ``noise`` on
every coordinate, drawn from the package RandomStream so the same seed gives
the same dataset on any platform.  Label flipping, train/test splitting and
stratified fold assignment consume their own seeds; callers that need
independent stages should derive per-stage seeds with rng.derive_seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateSplit,
    DimensionMismatch,
    InvalidFactor,
    InvalidParams,
    InvalidSize,
    TooManyFolds,
)
from .rng import ALGORITHM_ID, RandomStream

__all__ = [
    "Dataset",
    "FoldPlan",
    "make_moons",
    "make_circles",
    "flip_labels",
    "split",
    "stratified_folds",
    "save_csv",
    "load_csv",
]


@dataclass
class Dataset:
    points: np.ndarray
    labels: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.points.ndim != 2:
            raise DimensionMismatch("points must be a 2-d array")
        if self.labels.shape != (self.points.shape[0],):
            raise DimensionMismatch("one label per point required")
        if self.labels.size and not np.all(np.abs(self.labels) == 1):
            raise InvalidParams("labels must be +1 or -1")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.points[idx].copy(), self.labels[idx].copy(), dict(self.meta))


def _check_n(n_samples: int) -> None:
    if not isinstance(n_samples, (int, np.integer)) or isinstance(n_samples, bool):
        raise InvalidSize(f"n_samples must be an integer, got {n_samples!r}")
    if n_samples < 2:
        raise InvalidSize(f"need at least 2 samples, got {n_samples}")


def _check_noise(noise: float) -> None:
    if not noise >= 0.0:
        raise InvalidParams(f"noise must be nonnegative, got {noise}")


def _add_noise(points: np.ndarray, noise: float, seed: int) -> np.ndarray:
    if noise == 0.0:
        return points
    stream = RandomStream(seed)
    return points + noise * stream.normals(points.size).reshape(points.shape)


def make_moons(n_samples: int, noise: float = 0.0, seed: int = 0) -> Dataset:
    """Interleaving half-circles; outer arc first (class -1), inner second."""
    _check_n(n_samples)
    _check_noise(noise)
    n_out = (n_samples + 1) // 2
    n_in = n_samples // 2
    t_out = np.linspace(0.0, math.pi, n_out)
    t_in = np.linspace(0.0, math.pi, n_in)
    outer = np.column_stack([np.cos(t_out), np.sin(t_out)])
    inner = np.column_stack([1.0 - np.cos(t_in), 1.0 - np.sin(t_in) - 0.5])
    points = _add_noise(np.vstack([outer, inner]), noise, seed)
    labels = np.concatenate([-np.ones(n_out, int), np.ones(n_in, int)])
    meta = {
        "generator": "moons",
        "n_samples": int(n_samples),
        "noise": float(noise),
        "flip_y": 0.0,
        "seed": int(seed),
        "rng": ALGORITHM_ID,
        "n_informative": 2,
    }
    return Dataset(points, labels, meta)


def make_circles(
    n_samples: int, noise: float = 0.0, factor: float = 0.5, seed: int = 0
) -> Dataset:
    """Concentric circles; unit circle is class -1, scaled circle class +1."""
    _check_n(n_samples)
    _check_noise(noise)
    if not (0.0 < factor < 1.0):
        raise InvalidFactor(f"factor must lie strictly in (0, 1), got {factor}")
    n_out = (n_samples + 1) // 2
    n_in = n_samples // 2
    a_out = np.linspace(0.0, 2.0 * math.pi, n_out, endpoint=False)
    a_in = np.linspace(0.0, 2.0 * math.pi, n_in, endpoint=False)
    outer = np.column_stack([np.cos(a_out), np.sin(a_out)])
    inner = factor * np.column_stack([np.cos(a_in), np.sin(a_in)])
    points = _add_noise(np.vstack([outer, inner]), noise, seed)
    labels = np.concatenate([-np.ones(n_out, int), np.ones(n_in, int)])
    meta = {
        "generator": "circles",
        "n_samples": int(n_samples),
        "noise": float(noise),
        "factor": float(factor),
        "flip_y": 0.0,
        "seed": int(seed),
        "rng": ALGORITHM_ID,
        "n_informative": 2,
    }
    return Dataset(points, labels, meta)


def flip_labels(ds: Dataset, flip_y: float, seed: int) -> Dataset:
    """Flip each label independently with probability ``flip_y``.

    The flip mask depends only on the seed, so applying the same flip twice
    restores the original labels.
    """
    if not (0.0 <= flip_y <= 1.0):
        raise InvalidParams(f"flip_y must lie in [0, 1], got {flip_y}")
    mask = RandomStream(seed).bernoulli(flip_y, ds.n)
    labels = np.where(mask, -ds.labels, ds.labels)
    meta = dict(ds.meta)
    meta["flip_y"] = float(flip_y)
    return Dataset(ds.points.copy(), labels, meta)


def split(ds: Dataset, train_frac: float, seed: int) -> tuple[Dataset, Dataset]:
    """Shuffled train/test split with floor(train_frac * n) training points.

    Raises DegenerateSplit when either side is empty or single-class.
    """
    if not (0.0 < train_frac < 1.0):
        raise InvalidParams(f"train_frac must lie strictly in (0, 1), got {train_frac}")
    perm = RandomStream(seed).permutation(ds.n)
    n_train = int(math.floor(train_frac * ds.n))
    train_idx, test_idx = perm[:n_train], perm[n_train:]
    for side, idx in (("train", train_idx), ("test", test_idx)):
        if idx.size == 0 or np.unique(ds.labels[idx]).size < 2:
            raise DegenerateSplit(f"{side} side of the split lacks both classes")
    return ds.subset(train_idx), ds.subset(test_idx)


@dataclass
class FoldPlan:
    n_folds: int
    fold_indices: list  # one validation index array per fold

    def splits(self):
        """Yield (train_indices, validation_indices) pairs, fold by fold."""
        all_idx = np.concatenate(self.fold_indices)
        for val in self.fold_indices:
            train = np.setdiff1d(all_idx, val)
            yield train, val


def stratified_folds(ds: Dataset, n_folds: int, seed: int) -> FoldPlan:
    """Deal each class round-robin into ``n_folds`` validation sets.

    Every fold receives at least one point of every class; asking for more
    folds than the smaller class has points raises TooManyFolds.  A single
    fold is permitted and contains everything.
    """
    if n_folds < 1:
        raise InvalidParams(f"need at least 1 fold, got {n_folds}")
    classes, counts = np.unique(ds.labels, return_counts=True)
    if counts.min() < n_folds:
        raise TooManyFolds(
            f"{n_folds} folds requested but smallest class has {counts.min()} points"
        )
    stream = RandomStream(seed)
    buckets: list[list[int]] = [[] for _ in range(n_folds)]
    for cls in classes:
        members = np.flatnonzero(ds.labels == cls)
        members = members[stream.permutation(members.size)]
        for pos, idx in enumerate(members):
            buckets[pos % n_folds].append(int(idx))
    return FoldPlan(n_folds, [np.array(sorted(b), dtype=int) for b in buckets])


def save_csv(ds: Dataset, path) -> None:
    """Write ``x1,x2,label`` rows preceded by ``# key=value`` metadata lines."""
    if ds.points.shape[1] != 2:
        raise DimensionMismatch("csv export expects planar points")
    lines = [f"# {key}={ds.meta[key]}" for key in sorted(ds.meta)]
    lines.append("x1,x2,label")
    for (x1, x2), label in zip(ds.points, ds.labels):
        lines.append(f"{float(x1)!r},{float(x2)!r},{int(label)}")
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_meta_value(raw: str):
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def load_csv(path) -> Dataset:
    meta: dict = {}
    rows: list[tuple[float, float, int]] = []
    header_seen = False
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, raw = line[1:].strip().partition("=")
            meta[key.strip()] = _parse_meta_value(raw.strip())
            continue
        if not header_seen:
            if line != "x1,x2,label":
                raise InvalidParams(f"unexpected csv header: {line!r}")
            header_seen = True
            continue
        x1, x2, label = line.split(",")
        rows.append((float(x1), float(x2), int(label)))
    if not header_seen:
        raise InvalidParams("missing csv header line")
    points = np.array([[r[0], r[1]] for r in rows], dtype=float).reshape(len(rows), 2)
    labels = np.array([r[2] for r in rows], dtype=int)
    return Dataset(points, labels, meta)
