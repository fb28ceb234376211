"""Soft-margin SVM trained by sequential minimal optimization.

Solves the dual

    max_a  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j G_ij
    s.t.   0 <= a_i <= C,   sum_i a_i y_i = 0

by repeatedly optimizing the maximal-KKT-violating pair analytically.
Writing F_i = y_i - f_i with f_i = sum_j a_j y_j G_ij, the bias must satisfy
b >= F_i on one index set and b <= F_i on the other; training stops when the
gap between those bounds falls below ``tol``.  The pair update follows Platt's
closed form; directions with nonpositive curvature (eta <= 1e-12, possible
for indefinite Grams) step to whichever box end improves the objective.  When
the maximal pair cannot move, a deterministic full sweep over candidate pairs
(ordered by violation, then by |E_i - E_j|) looks for any ascent direction
before giving up.

Every accepted update strictly increases the dual objective; the running
objective, the equality residual, and the box violation are recorded so tests
can check feasibility after every single update.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidParams, SingleClassData
from .kernels import (
    GramMatrix,
    KernelSpec,
    cross_matrix,
    spec_from_dict,
    spec_to_dict,
)

__all__ = [
    "SvmModel",
    "TrainingReport",
    "train_smo",
    "dual_objective",
    "decision",
    "decision_many",
    "predict",
    "predict_many",
    "model_to_json",
    "model_from_json",
]

SUPPORT_THRESHOLD = 1e-10


@dataclass
class SvmModel:
    kernel: KernelSpec
    C: float
    alphas: np.ndarray
    bias: float
    labels: np.ndarray
    train_points: np.ndarray = field(repr=False)

    @property
    def support_indices(self) -> np.ndarray:
        return np.flatnonzero(self.alphas > SUPPORT_THRESHOLD)


@dataclass
class TrainingReport:
    iterations: int
    dual_objective: float
    kkt_violation: float
    converged: bool
    objective_trace: list = field(repr=False, default_factory=list)
    max_equality_residual: float = 0.0
    max_box_violation: float = 0.0


def dual_objective(alphas, g: GramMatrix, labels) -> float:
    a = np.asarray(alphas, float)
    y = np.asarray(labels, float)
    v = a * y
    return float(a.sum() - 0.5 * v @ g.values @ v)


def _validate_labels(labels, n: int) -> np.ndarray:
    y = np.asarray(labels, float)
    if y.shape != (n,):
        raise DimensionMismatch(f"expected {n} labels, got shape {y.shape}")
    if not np.all(np.abs(y) == 1.0):
        raise InvalidParams("labels must be +1 or -1")
    if np.all(y == y[0]):
        raise SingleClassData("training data contains a single class")
    return y


def train_smo(
    g: GramMatrix,
    labels,
    C: float = 1.0,
    tol: float = 1e-3,
    max_passes: int | None = None,
) -> tuple[SvmModel, TrainingReport]:
    """Train on a precomputed Gram matrix; returns (model, report).

    ``max_passes`` counts sweeps of n pair updates; the default 10*n sweeps
    is a safety budget rather than the practical stopping rule (the tol-based
    KKT gap fires first).  A model is always returned; ``report.converged``
    says whether the gap closed within budget.
    """
    if not C > 0:
        raise InvalidParams(f"C must be positive, got {C}")
    if g.points is None:
        raise InvalidParams("gram matrix must carry its training points")
    n = g.n
    y = _validate_labels(labels, n)
    G = g.values
    if max_passes is None:
        max_passes = 10 * n
    budget = max_passes * n

    alpha = np.zeros(n)
    f = np.zeros(n)  # f_i = sum_j alpha_j y_j G_ij, maintained incrementally
    eps_bound = 1e-10 * max(1.0, C)
    eps_step = 1e-14 * max(1.0, C)

    obj = 0.0
    trace: list = []
    eq_max = 0.0
    box_max = 0.0
    iterations = 0

    def masks():
        at_zero = alpha <= eps_bound
        at_c = alpha >= C - eps_bound
        free = ~at_zero & ~at_c
        lo = (at_zero & (y > 0)) | (at_c & (y < 0)) | free  # demand b >= F_i
        hi = (at_zero & (y < 0)) | (at_c & (y > 0)) | free  # demand b <= F_i
        return lo, hi, free

    def try_update(i: int, j: int) -> bool:
        nonlocal f, obj, eq_max, box_max
        if i == j:
            return False
        ai, aj = alpha[i], alpha[j]
        if y[i] != y[j]:
            lo_box, hi_box = max(0.0, aj - ai), min(C, C + aj - ai)
        else:
            lo_box, hi_box = max(0.0, ai + aj - C), min(C, ai + aj)
        if hi_box - lo_box <= eps_step:
            return False
        e_i = f[i] - y[i]
        e_j = f[j] - y[j]
        slope = y[j] * (e_i - e_j)
        eta = G[i, i] + G[j, j] - 2.0 * G[i, j]
        if eta > 1e-12:
            aj_new = min(max(aj + slope / eta, lo_box), hi_box)
        else:
            # flat or concave-up direction: pick the better box end
            d_lo, d_hi = lo_box - aj, hi_box - aj
            w_lo = d_lo * slope - 0.5 * eta * d_lo * d_lo
            w_hi = d_hi * slope - 0.5 * eta * d_hi * d_hi
            aj_new = lo_box if w_lo > w_hi else hi_box
        d = aj_new - aj
        if abs(d) <= eps_step:
            return False
        gain = d * slope - 0.5 * eta * d * d
        if not gain > 0.0:
            return False
        ai_new = min(max(ai + y[i] * y[j] * (aj - aj_new), 0.0), C)
        f += (ai_new - ai) * y[i] * G[i] + (aj_new - aj) * y[j] * G[j]
        alpha[i] = ai_new
        alpha[j] = aj_new
        obj += gain
        trace.append(obj)
        eq_max = max(eq_max, abs(float(alpha @ y)))
        box_max = max(box_max, float(max(0.0, -alpha.min(), alpha.max() - C)))
        return True

    viol = np.inf
    while iterations < budget:
        F = y - f
        lo, hi, _ = masks()
        if not lo.any() or not hi.any():
            viol = 0.0
            break
        lo_idx = np.flatnonzero(lo)
        hi_idx = np.flatnonzero(hi)
        i = int(lo_idx[np.argmax(F[lo_idx])])
        j = int(hi_idx[np.argmin(F[hi_idx])])
        viol = float(F[i] - F[j])
        if viol <= tol:
            break
        if not try_update(i, j):
            # deterministic fallback sweep: most violating first indices,
            # partners by decreasing |E_i - E_j|
            moved = False
            for i2 in lo_idx[np.argsort(-F[lo_idx], kind="stable")]:
                order = hi_idx[np.argsort(-np.abs(F[i2] - F[hi_idx]), kind="stable")]
                for j2 in order:
                    if try_update(int(i2), int(j2)):
                        moved = True
                        break
                if moved:
                    break
            if not moved:
                break  # no ascent direction anywhere
        iterations += 1

    # final KKT gap on fresh quantities
    F = y - f
    lo, hi, free = masks()
    if lo.any() and hi.any():
        b_lo = float(F[lo].max())
        b_hi = float(F[hi].min())
        viol = b_lo - b_hi
    else:
        b_lo = b_hi = 0.0
        viol = 0.0
    if free.any():
        bias = float(F[free].mean())
    else:
        bias = 0.5 * (b_lo + b_hi)

    model = SvmModel(
        kernel=g.kernel,
        C=float(C),
        alphas=alpha,
        bias=bias,
        labels=y.astype(int),
        train_points=np.asarray(g.points, float),
    )
    report = TrainingReport(
        iterations=iterations,
        dual_objective=dual_objective(alpha, g, y),
        kkt_violation=max(0.0, viol),
        converged=bool(viol <= tol),
        objective_trace=trace,
        max_equality_residual=eq_max,
        max_box_violation=box_max,
    )
    return model, report


def decision_many(m: SvmModel, points) -> np.ndarray:
    """Decision values f(x) = sum_sv a_i y_i k(x_i, x) + b for rows of x."""
    pts = np.asarray(points, float)
    if pts.ndim != 2 or pts.shape[1] != m.train_points.shape[1]:
        raise DimensionMismatch(
            f"expected (m, {m.train_points.shape[1]}) query points, got {pts.shape}"
        )
    sv = m.support_indices
    if sv.size == 0:
        return np.full(pts.shape[0], m.bias)
    K = cross_matrix(m.kernel, m.train_points[sv], pts)
    return (m.alphas[sv] * m.labels[sv]) @ K + m.bias


def decision(m: SvmModel, x) -> float:
    return float(decision_many(m, np.atleast_1d(np.asarray(x, float))[None, :])[0])


def predict_many(m: SvmModel, points) -> np.ndarray:
    """Signs of the decision values; exact zero maps to +1."""
    d = decision_many(m, points)
    return np.where(d >= 0.0, 1, -1)


def predict(m: SvmModel, x) -> int:
    return int(predict_many(m, np.atleast_1d(np.asarray(x, float))[None, :])[0])


def model_to_json(m: SvmModel) -> str:
    payload = {
        "kernel": spec_to_dict(m.kernel),
        "C": m.C,
        "alphas": [float(a) for a in m.alphas],
        "bias": m.bias,
        "labels": [int(v) for v in m.labels],
        "points": [[float(v) for v in row] for row in m.train_points],
    }
    return json.dumps(payload, sort_keys=True, indent=2)


def model_from_json(text: str) -> SvmModel:
    d = json.loads(text)
    return SvmModel(
        kernel=spec_from_dict(d["kernel"]),
        C=float(d["C"]),
        alphas=np.array(d["alphas"], dtype=float),
        bias=float(d["bias"]),
        labels=np.array(d["labels"], dtype=int),
        train_points=np.array(d["points"], dtype=float).reshape(len(d["labels"]), -1),
    )
