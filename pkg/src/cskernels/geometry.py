"""Geometry induced on the input plane by normalized feature embeddings.

A radially symmetric embedding with feature-norm profile N(r) pulls back a
conformally flat metric g = Omega(r) * (dx^2 + dy^2) whose factor is a quarter
of the planar Laplacian of the log of the squared norm:

    Omega(r) = 1/4 * (d^2/dr^2 + (1/r) d/dr) ln N(r)^2

Writing N(r)^2 = F(z) with z = r^2/s for a profile scale s, the chain rule
gives the closed form used here:

    Omega(r) = (F'/F)/s + (r^2/s^2) * (F''/F - (F'/F)^2)

evaluated with scaled series arithmetic so large arguments cannot overflow.
The scalar curvature of a conformal metric follows from its own log:

    R(r) = -(1/Omega) * (d^2/dr^2 + (1/r) d/dr) ln Omega

computed by central differences of the analytic Omega.

Two profiles are provided: the exponential profile N^2 = exp(r^2), whose
geometry is exactly flat (Omega = 1, R = 0), and the hypergeometric profile
N^2 = 0F3(; 1, b, b; r^2/k^2) with b = 2 - 1/k for deformation k < 0, whose
plane acquires negative curvature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import InvalidParams, NonConvergence, SeriesFailure
from .specfun import hyp0f3_derivatives_arrays

__all__ = [
    "CoherentProfile",
    "NlcsProfile",
    "NormProfile",
    "CurvatureCurve",
    "ricci_scalar",
    "curvature_curve",
    "curve_to_csv",
]


def _conformal_from_ratios(r, scale, ratio1, ratio2):
    # Omega = (F'/F)/s + (r^2/s^2)(F''/F - (F'/F)^2), s = scale
    return ratio1 / scale + (r * r) / (scale * scale) * (ratio2 - ratio1 * ratio1)


@dataclass(frozen=True)
class CoherentProfile:
    """Exponential norm profile N(r)^2 = exp(r^2): F'/F = F''/F = 1, s = 1."""

    @property
    def label(self) -> str:
        return "coherent"

    def conformal_factor(self, r) -> np.ndarray:
        rr = np.asarray(r, float)
        if np.any(rr < 0):
            raise InvalidParams("radius must be nonnegative")
        return _conformal_from_ratios(rr, 1.0, np.ones_like(rr), np.ones_like(rr))


@dataclass(frozen=True)
class NlcsProfile:
    """Hypergeometric norm profile N(r)^2 = 0F3(; 1, b, b; r^2/k^2), b = 2 - 1/k."""

    k: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k < 0):
            raise InvalidParams(f"deformation k must be finite and negative, got {self.k}")

    @property
    def label(self) -> str:
        return f"nlcs(k={self.k!r})"

    def conformal_factor(self, r) -> np.ndarray:
        rr = np.asarray(r, float)
        if np.any(rr < 0):
            raise InvalidParams("radius must be nonnegative")
        b = 2.0 - 1.0 / self.k
        z = (rr / self.k) ** 2
        try:
            (m0, e0), (m1, e1), (m2, e2) = hyp0f3_derivatives_arrays(1.0, b, b, z)
        except NonConvergence as exc:
            raise SeriesFailure(f"norm series failed at r up to {rr.max()}") from exc
        ratio1 = (m1 / m0) * np.exp2(e1 - e0)
        ratio2 = (m2 / m0) * np.exp2(e2 - e0)
        return _conformal_from_ratios(rr, self.k * self.k, ratio1, ratio2)


NormProfile = Union[CoherentProfile, NlcsProfile]


def ricci_scalar(profile: NormProfile, r, step: float | None = None) -> np.ndarray:
    """Scalar curvature at radii ``r`` by central differences of ln Omega.

    The stencil half-width defaults to max(1e-4, 1e-3 * r) and shrinks to r/2
    when the radius itself is smaller, keeping the left node positive.
    """
    rr = np.asarray(r, float)
    if np.any(rr <= 0):
        raise InvalidParams("curvature is defined for positive radii")
    if step is None:
        h = np.maximum(1e-4, 1e-3 * rr)
    else:
        if not step > 0:
            raise InvalidParams(f"step must be positive, got {step}")
        h = np.full_like(rr, float(step))
    h = np.where(rr <= h, rr / 2.0, h)
    om = profile.conformal_factor(rr)
    om_plus = profile.conformal_factor(rr + h)
    om_minus = profile.conformal_factor(rr - h)
    if np.any(om <= 0) or np.any(om_plus <= 0) or np.any(om_minus <= 0):
        raise SeriesFailure("conformal factor must stay positive")
    lo, lp, lm = np.log(om), np.log(om_plus), np.log(om_minus)
    d1 = (lp - lm) / (2.0 * h)
    d2 = (lp - 2.0 * lo + lm) / (h * h)
    return -(d2 + d1 / rr) / om


@dataclass
class CurvatureCurve:
    radii: np.ndarray
    omega: np.ndarray
    ricci: np.ndarray
    profile_label: str

    def __post_init__(self):
        self.radii = np.asarray(self.radii, float)
        self.omega = np.asarray(self.omega, float)
        self.ricci = np.asarray(self.ricci, float)
        if not (self.radii.shape == self.omega.shape == self.ricci.shape):
            raise InvalidParams("curve columns must share one shape")
        if not np.all(self.omega > 0):
            raise InvalidParams("conformal factor must be positive along the curve")


def curvature_curve(
    profile: NormProfile, r_min: float, r_max: float, samples: int
) -> CurvatureCurve:
    """Evaluate Omega and R on ``samples`` evenly spaced radii in [r_min, r_max]."""
    if not (0.0 < r_min < r_max):
        raise InvalidParams(f"need 0 < r_min < r_max, got [{r_min}, {r_max}]")
    if samples < 2:
        raise InvalidParams(f"need at least 2 samples, got {samples}")
    radii = np.linspace(r_min, r_max, samples)
    omega = profile.conformal_factor(radii)
    ricci = ricci_scalar(profile, radii)
    return CurvatureCurve(radii, omega, ricci, profile.label)


def curve_to_csv(curve: CurvatureCurve, path) -> None:
    """Write ``r,omega,ricci`` rows preceded by ``# key=value`` metadata."""
    lines = [
        f"# profile={curve.profile_label}",
        f"# samples={curve.radii.size}",
        "r,omega,ricci",
    ]
    for r, om, rc in zip(curve.radii, curve.omega, curve.ricci):
        lines.append(f"{float(r)!r},{float(om)!r},{float(rc)!r}")
    Path(path).write_text("\n".join(lines) + "\n")
