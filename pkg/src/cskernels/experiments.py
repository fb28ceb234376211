"""Evaluation harness: noise sweeps, multi-seed averaging, cross-validation,
decision-boundary grids, and deterministic result serialization.

The protocol for one (seed, noise) cell:

1. generate the dataset with the generator seed derived from the cell seed,
2. flip labels with probability ``flip_y`` (independent derived seed),
3. split train/test by ``train_frac`` (independent derived seed),
4. score either by stratified k-fold cross-validation on the training split
   (``use_cv``) or by test-split accuracy after training once.

Stage seeds come from ``rng.derive_seed(seed, stage)`` with stages 0-3 in the
order above, so changing e.g. the noise level never perturbs the split.
Results aggregate per noise level across seeds (mean and population std) and
serialize to JSON byte-identically for identical configs.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datasets import Dataset, flip_labels, make_circles, make_moons, split, stratified_folds
from .errors import InvalidParams
from .kernels import KernelSpec, cross_matrix, gram, spec_from_dict, spec_label, spec_to_dict
from .geometry import CurvatureCurve
from .rng import ALGORITHM_ID, derive_seed
from .svm import SvmModel, decision_many, predict_many, train_smo

__all__ = [
    "ExperimentConfig",
    "NoiseCell",
    "ExperimentResult",
    "BoundaryGrid",
    "cross_val_accuracy",
    "run_experiment",
    "boundary_grid",
    "default_ranges",
    "export_result",
    "import_result_json",
    "import_cells_csv",
    "import_grid_csv",
    "config_to_dict",
    "config_from_dict",
]

log = logging.getLogger(__name__)

STAGE_GENERATE = 0
STAGE_FLIP = 1
STAGE_SPLIT = 2
STAGE_FOLDS = 3


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    n_samples: int
    noise_levels: tuple
    kernel: KernelSpec
    seeds: tuple
    flip_y: float = 0.0
    factor: float = 0.5
    C: float = 1.0
    train_frac: float = 0.6
    cv_folds: int = 5
    use_cv: bool = True

    def __post_init__(self):
        object.__setattr__(self, "noise_levels", tuple(float(v) for v in self.noise_levels))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if self.dataset not in ("moons", "circles"):
            raise InvalidParams(f"unknown dataset {self.dataset!r}")
        if not self.noise_levels:
            raise InvalidParams("noise_levels must be nonempty")
        if any(v < 0 for v in self.noise_levels):
            raise InvalidParams("noise levels must be nonnegative")
        if not self.seeds:
            raise InvalidParams("seeds must be nonempty")
        if not (0.0 <= self.flip_y <= 1.0):
            raise InvalidParams(f"flip_y must lie in [0, 1], got {self.flip_y}")
        if not (0.0 < self.factor < 1.0):
            raise InvalidParams(f"factor must lie strictly in (0, 1), got {self.factor}")
        if not self.C > 0:
            raise InvalidParams(f"C must be positive, got {self.C}")
        if not (0.0 < self.train_frac < 1.0):
            raise InvalidParams(f"train_frac must lie strictly in (0, 1), got {self.train_frac}")
        if self.cv_folds < 1:
            raise InvalidParams(f"cv_folds must be positive, got {self.cv_folds}")


@dataclass
class NoiseCell:
    noise: float
    mean_accuracy: float
    std_accuracy: float
    per_seed: list

    def __post_init__(self):
        if self.per_seed and not (
            min(self.per_seed) - 1e-12 <= self.mean_accuracy <= max(self.per_seed) + 1e-12
        ):
            raise InvalidParams("mean must lie within the per-seed range")


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    cells: list


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "dataset": cfg.dataset,
        "n_samples": cfg.n_samples,
        "noise_levels": list(cfg.noise_levels),
        "kernel": spec_to_dict(cfg.kernel),
        "seeds": list(cfg.seeds),
        "flip_y": cfg.flip_y,
        "factor": cfg.factor,
        "C": cfg.C,
        "train_frac": cfg.train_frac,
        "cv_folds": cfg.cv_folds,
        "use_cv": cfg.use_cv,
        "rng": ALGORITHM_ID,
    }


def config_from_dict(d: dict) -> ExperimentConfig:
    return ExperimentConfig(
        dataset=d["dataset"],
        n_samples=int(d["n_samples"]),
        noise_levels=tuple(d["noise_levels"]),
        kernel=spec_from_dict(d["kernel"]),
        seeds=tuple(d["seeds"]),
        flip_y=float(d.get("flip_y", 0.0)),
        factor=float(d.get("factor", 0.5)),
        C=float(d.get("C", 1.0)),
        train_frac=float(d.get("train_frac", 0.6)),
        cv_folds=int(d.get("cv_folds", 5)),
        use_cv=bool(d.get("use_cv", True)),
    )


def _accuracy(model: SvmModel, points, labels) -> float:
    return float(np.mean(predict_many(model, points) == labels))


def cross_val_accuracy(
    d: Dataset, spec: KernelSpec, C: float, folds: int, seed: int
) -> tuple[float, float]:
    """Stratified k-fold accuracy on ``d``: (mean, population std) over folds.

    Each fold trains a fresh model on the complement.  A fold whose training
    did not converge is logged and still scored with the returned model.
    """
    if folds < 2:
        raise InvalidParams(f"cross-validation needs at least 2 folds, got {folds}")
    plan = stratified_folds(d, folds, seed)
    scores = []
    for train_idx, val_idx in plan.splits():
        g = gram(d.points[train_idx], spec)
        model, report = train_smo(g, d.labels[train_idx], C=C)
        if not report.converged:
            log.warning(
                "fold did not converge (gap %.3g after %d updates); scoring anyway",
                report.kkt_violation,
                report.iterations,
            )
        scores.append(_accuracy(model, d.points[val_idx], d.labels[val_idx]))
    arr = np.array(scores)
    return float(arr.mean()), float(arr.std())


def _generate(cfg: ExperimentConfig, noise: float, seed: int) -> Dataset:
    gen_seed = derive_seed(seed, STAGE_GENERATE)
    if cfg.dataset == "moons":
        ds = make_moons(cfg.n_samples, noise=noise, seed=gen_seed)
    else:
        ds = make_circles(cfg.n_samples, noise=noise, factor=cfg.factor, seed=gen_seed)
    return flip_labels(ds, cfg.flip_y, derive_seed(seed, STAGE_FLIP))


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run the full (seed x noise) grid for one kernel; see module docstring."""
    cells = []
    for noise in cfg.noise_levels:
        per_seed = []
        for seed in cfg.seeds:
            ds = _generate(cfg, noise, seed)
            train, test = split(ds, cfg.train_frac, derive_seed(seed, STAGE_SPLIT))
            if cfg.use_cv:
                score, _ = cross_val_accuracy(
                    train, cfg.kernel, cfg.C, cfg.cv_folds, derive_seed(seed, STAGE_FOLDS)
                )
            else:
                g = gram(train.points, cfg.kernel)
                model, report = train_smo(g, train.labels, C=cfg.C)
                if not report.converged:
                    log.warning("training did not converge at noise %g seed %d", noise, seed)
                score = _accuracy(model, test.points, test.labels)
            per_seed.append(score)
        arr = np.array(per_seed)
        cells.append(NoiseCell(float(noise), float(arr.mean()), float(arr.std()), per_seed))
    return ExperimentResult(cfg, cells)


@dataclass
class BoundaryGrid:
    x_range: tuple
    y_range: tuple
    resolution: int
    decision_values: np.ndarray  # [i, j] = f(x_j, y_i), row-major in y
    predicted_labels: np.ndarray

    def __post_init__(self):
        expected = (self.resolution, self.resolution)
        if self.decision_values.shape != expected or self.predicted_labels.shape != expected:
            raise InvalidParams("grid matrices must be resolution x resolution")
        if not np.array_equal(
            self.predicted_labels, np.where(self.decision_values >= 0.0, 1, -1)
        ):
            raise InvalidParams("labels must be the sign of decisions with ties positive")


def default_ranges(points, pad: float = 0.5) -> tuple[tuple, tuple]:
    """Bounding box of ``points`` expanded by ``pad`` on every side."""
    pts = np.asarray(points, float)
    return (
        (float(pts[:, 0].min() - pad), float(pts[:, 0].max() + pad)),
        (float(pts[:, 1].min() - pad), float(pts[:, 1].max() + pad)),
    )


def boundary_grid(m: SvmModel, x_range, y_range, resolution: int = 300) -> BoundaryGrid:
    """Decision values of ``m`` on a resolution x resolution mesh."""
    if resolution < 2:
        raise InvalidParams(f"resolution must be at least 2, got {resolution}")
    if not (x_range[0] < x_range[1] and y_range[0] < y_range[1]):
        raise InvalidParams("ranges must be increasing")
    xs = np.linspace(x_range[0], x_range[1], resolution)
    ys = np.linspace(y_range[0], y_range[1], resolution)
    xx, yy = np.meshgrid(xs, ys)
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    dec = decision_many(m, pts).reshape(resolution, resolution)
    return BoundaryGrid(
        (float(x_range[0]), float(x_range[1])),
        (float(y_range[0]), float(y_range[1])),
        int(resolution),
        dec,
        np.where(dec >= 0.0, 1, -1),
    )


# --- serialization ---------------------------------------------------------


def _result_to_json(res: ExperimentResult) -> str:
    payload = {
        "config": config_to_dict(res.config),
        "cells": [
            {
                "noise": c.noise,
                "mean_accuracy": c.mean_accuracy,
                "std_accuracy": c.std_accuracy,
                "per_seed": list(c.per_seed),
            }
            for c in res.cells
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2)


def _result_to_csv(res: ExperimentResult) -> str:
    lines = [
        f"# dataset={res.config.dataset}",
        f"# kernel={spec_label(res.config.kernel)}",
        f"# n_samples={res.config.n_samples}",
        f"# seeds={';'.join(str(s) for s in res.config.seeds)}",
        f"# rng={ALGORITHM_ID}",
        "noise,mean_accuracy,std_accuracy,per_seed",
    ]
    for c in res.cells:
        per = ";".join(repr(float(v)) for v in c.per_seed)
        lines.append(
            f"{float(c.noise)!r},{float(c.mean_accuracy)!r},{float(c.std_accuracy)!r},{per}"
        )
    return "\n".join(lines) + "\n"


def _grid_to_csv(g: BoundaryGrid) -> str:
    lines = [
        f"# x_range={g.x_range[0]!r};{g.x_range[1]!r}",
        f"# y_range={g.y_range[0]!r};{g.y_range[1]!r}",
        f"# resolution={g.resolution}",
        "x,y,decision,label",
    ]
    xs = np.linspace(g.x_range[0], g.x_range[1], g.resolution)
    ys = np.linspace(g.y_range[0], g.y_range[1], g.resolution)
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            lines.append(
                f"{float(x)!r},{float(y)!r},"
                f"{float(g.decision_values[i, j])!r},{int(g.predicted_labels[i, j])}"
            )
    return "\n".join(lines) + "\n"


def _grid_to_json(g: BoundaryGrid) -> str:
    payload = {
        "x_range": list(g.x_range),
        "y_range": list(g.y_range),
        "resolution": g.resolution,
        "decision_values": [[float(v) for v in row] for row in g.decision_values],
        "predicted_labels": [[int(v) for v in row] for row in g.predicted_labels],
    }
    return json.dumps(payload, sort_keys=True, indent=2)


def _curve_to_csv(c: CurvatureCurve) -> str:
    lines = [
        f"# profile={c.profile_label}",
        f"# samples={c.radii.size}",
        "r,omega,ricci",
    ]
    for r, om, rc in zip(c.radii, c.omega, c.ricci):
        lines.append(f"{float(r)!r},{float(om)!r},{float(rc)!r}")
    return "\n".join(lines) + "\n"


def _curve_to_json(c: CurvatureCurve) -> str:
    payload = {
        "profile": c.profile_label,
        "r": [float(v) for v in c.radii],
        "omega": [float(v) for v in c.omega],
        "ricci": [float(v) for v in c.ricci],
    }
    return json.dumps(payload, sort_keys=True, indent=2)


def export_result(res, path, format: str = "json") -> None:
    """Serialize a result, grid, or curve deterministically to ``path``."""
    if format not in ("json", "csv"):
        raise InvalidParams(f"format must be json or csv, got {format!r}")
    if isinstance(res, ExperimentResult):
        text = _result_to_json(res) if format == "json" else _result_to_csv(res)
    elif isinstance(res, BoundaryGrid):
        text = _grid_to_json(res) if format == "json" else _grid_to_csv(res)
    elif isinstance(res, CurvatureCurve):
        text = _curve_to_json(res) if format == "json" else _curve_to_csv(res)
    else:
        raise InvalidParams(f"cannot export {type(res).__name__}")
    Path(path).write_text(text)


def import_result_json(path) -> ExperimentResult:
    d = json.loads(Path(path).read_text())
    cfg = config_from_dict(d["config"])
    cells = [
        NoiseCell(
            float(c["noise"]),
            float(c["mean_accuracy"]),
            float(c["std_accuracy"]),
            [float(v) for v in c["per_seed"]],
        )
        for c in d["cells"]
    ]
    return ExperimentResult(cfg, cells)


def import_cells_csv(path) -> list:
    """Rebuild the numeric cells of an ExperimentResult csv export."""
    cells = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("noise,"):
            continue
        noise, mean, std, per = line.split(",")
        per_seed = [float(v) for v in per.split(";")] if per else []
        cells.append(NoiseCell(float(noise), float(mean), float(std), per_seed))
    return cells


def import_grid_csv(path) -> BoundaryGrid:
    meta = {}
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line == "x,y,decision,label":
            continue
        if line.startswith("#"):
            key, _, raw = line[1:].strip().partition("=")
            meta[key.strip()] = raw.strip()
            continue
        rows.append(line.split(","))
    res = int(meta["resolution"])
    x_lo, x_hi = (float(v) for v in meta["x_range"].split(";"))
    y_lo, y_hi = (float(v) for v in meta["y_range"].split(";"))
    dec = np.array([float(r[2]) for r in rows]).reshape(res, res)
    lab = np.array([int(r[3]) for r in rows]).reshape(res, res)
    return BoundaryGrid((x_lo, x_hi), (y_lo, y_hi), res, dec, lab)
