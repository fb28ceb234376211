"""Kernel functions built from coherent-state overlaps.

Three closed families plus one generic construction:

* ``RbfKernel``: exp(-||x - x'||^2 / (2 sigma^2)), the overlap of harmonic
  (Glauber) coherent states when sigma = 1.
* ``SqueezedKernel``: modulus of the squeezed-vacuum overlap product,
  per dimension sech^2(c) / (1 - e^{i(x_d - x'_d)} tanh^2(c)).
* ``NlcsKernel``: per dimension 0F3(; 1, 2-1/k, 2-1/k; x_d x'_d / k^2)
  normalized by the corresponding norms; k < 0.
* ``GeneralNlcsKernel``: truncated feature map sum_n (x_d x'_d)^n / rho_n^2
  for an arbitrary positive weight sequence rho.

Every kernel value is a product over input dimensions of per-dimension
factors in [-1, 1], so |K| <= 1 with K(x, x) = 1.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidParams,
    NonConvergence,
    SizeLimitExceeded,
)
from .specfun import hyp0f3_array

__all__ = [
    "RbfKernel",
    "SqueezedKernel",
    "NlcsKernel",
    "GeneralNlcsKernel",
    "KernelSpec",
    "DeformationSequence",
    "GramMatrix",
    "factorial_sequence",
    "hypergeometric_sequence",
    "rbf_eval",
    "squeezed_eval",
    "nlcs_norm",
    "nlcs_eval",
    "general_nlcs_eval",
    "kernel_eval",
    "cross_matrix",
    "gram",
    "min_eigenvalue",
    "gram_to_csv",
    "spec_label",
    "spec_to_dict",
    "spec_from_dict",
]

_GRAM_LIMIT = 4000
_EIG_LIMIT = 2000
_PAIR_CHUNK = 1_500_000


@dataclass(frozen=True)
class DeformationSequence:
    """Weights rho_n defining a deformed-oscillator feature map.

    ``rho`` maps n >= 0 to a positive real with rho(0) = 1 (checked at use).
    """

    rho: Callable[[int], float]
    name: str = "custom"


def factorial_sequence() -> DeformationSequence:
    """rho_n = sqrt(n!): the harmonic-oscillator weights (unit-width RBF)."""

    def rho(n: int) -> float:
        try:
            return math.exp(0.5 * math.lgamma(n + 1))
        except OverflowError:
            return math.inf

    return DeformationSequence(rho, name="factorial")


def hypergeometric_sequence(k: float) -> DeformationSequence:
    """rho_n = n! (-k)^n (2 - 1/k)_n for k < 0: the weights whose overlap sums
    to the 0F3 kernel."""
    if not k < 0:
        raise InvalidParams(f"deformation parameter must be negative, got {k}")
    b = 2.0 - 1.0 / k

    def rho(n: int) -> float:
        out = 1.0
        for i in range(n):
            out *= (i + 1) * (-k) * (b + i)
        return out

    return DeformationSequence(rho, name=f"hypergeometric(k={k!r})")


@dataclass(frozen=True)
class RbfKernel:
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidParams(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class SqueezedKernel:
    c: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.c):
            raise InvalidParams(f"squeezing parameter must be finite, got {self.c}")


@dataclass(frozen=True)
class NlcsKernel:
    k: float

    def __post_init__(self):
        if not self.k < 0:
            raise InvalidParams(f"deformation parameter must be negative, got {self.k}")


@dataclass(frozen=True)
class GeneralNlcsKernel:
    rho: DeformationSequence
    truncation: int

    def __post_init__(self):
        if self.truncation < 1:
            raise InvalidParams(
                f"truncation must be >= 1, got {self.truncation}"
            )


KernelSpec = Union[RbfKernel, SqueezedKernel, NlcsKernel, GeneralNlcsKernel]


def _as_points(x) -> np.ndarray:
    a = np.atleast_1d(np.asarray(x, dtype=float))
    if a.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D point, got shape {a.shape}")
    return a


def _check_pair(x: np.ndarray, x2: np.ndarray) -> None:
    if x.shape != x2.shape:
        raise DimensionMismatch(
            f"points disagree on dimension: {x.shape} vs {x2.shape}"
        )


# --- closed-form families -------------------------------------------------


def rbf_eval(x, x2, sigma: float = 1.0) -> float:
    """exp(-||x - x'||^2 / (2 sigma^2))."""
    if not sigma > 0:
        raise InvalidParams(f"sigma must be positive, got {sigma}")
    x, x2 = _as_points(x), _as_points(x2)
    _check_pair(x, x2)
    d = x - x2
    return float(np.exp(-(d @ d) / (2.0 * sigma * sigma)))


def _squeezed_factors(theta: np.ndarray, c: float) -> np.ndarray:
    # |sech^2 c / (1 - e^{i theta} tanh^2 c)| = |1 + s(1 - cos t) - i s sin t|^-1
    # with s = sinh^2 c (multiply through by cosh^2 c, cosh^2 - sinh^2 = 1);
    # the guards keep s * 0 = 0 when s overflows to inf at extreme c
    s = math.sinh(c) ** 2 if abs(c) < 710 else math.inf
    omc = 1.0 - np.cos(theta)
    sn = np.sin(theta)
    with np.errstate(invalid="ignore"):  # inf * 0 in the masked-off branch
        u = np.where(omc == 0.0, 0.0, s * omc)
        w = np.where(sn == 0.0, 0.0, s * sn)
    return ((1.0 + u) ** 2 + w**2) ** -0.25


def squeezed_eval(x, x2, c: float = 1.0) -> float:
    """Modulus of the squeezed-state overlap product, both squeezings equal."""
    x, x2 = _as_points(x), _as_points(x2)
    _check_pair(x, x2)
    return float(np.prod(_squeezed_factors(x - x2, c)))


# --- 0F3 family -----------------------------------------------------------


def _scaled_norm(mant: np.ndarray, exp2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Renormalize mantissa*2**exp2 so the mantissa lies in [0.5, 1)."""
    mf, ef = np.frexp(mant)
    return mf, ef.astype(np.int64) + exp2


def _nlcs_point_norms(pts: np.ndarray, k: float) -> tuple[np.ndarray, np.ndarray]:
    """Per point and dimension: sqrt of the normalization series, as
    (mantissa, half-exponent) with value = mantissa * 2**half_exp2."""
    b = 2.0 - 1.0 / k
    z = (pts / k) ** 2
    mant, exp2 = hyp0f3_array(1.0, b, b, z)
    mf, ef = _scaled_norm(mant, exp2)
    return np.sqrt(mf), 0.5 * ef


def _nlcs_pair_values(
    pa: np.ndarray,
    pb: np.ndarray,
    k: float,
    na: tuple[np.ndarray, np.ndarray],
    nb: tuple[np.ndarray, np.ndarray],
) -> np.ndarray:
    """Kernel values for matched point rows pa[i] vs pb[i] given their
    precomputed norms; all arrays are (n, d)."""
    b = 2.0 - 1.0 / k
    z = pa * pb / (k * k)
    mant, exp2 = hyp0f3_array(1.0, b, b, z)
    mf, ef = _scaled_norm(mant, exp2)
    # per-dimension factor is a unit-vector inner product, so the combined
    # exponent is at most ~1 and exp2 cannot overflow
    factors = mf / (na[0] * nb[0]) * np.exp2(ef - na[1] - nb[1])
    return np.prod(factors, axis=1)


def nlcs_norm(t: float, k: float) -> float:
    """Normalization sqrt(0F3(; 1, 2-1/k, 2-1/k; t^2 / k^2)) for one
    coordinate; may overflow to +inf for extreme t."""
    if not k < 0:
        raise InvalidParams(f"deformation parameter must be negative, got {k}")
    b = 2.0 - 1.0 / k
    mant, exp2 = hyp0f3_array(1.0, b, b, np.array([(float(t) / k) ** 2]))
    with np.errstate(over="ignore"):
        return float(np.sqrt(np.ldexp(mant[0], exp2[0])))


def nlcs_eval(x, x2, k: float) -> float:
    """Normalized 0F3 kernel: prod_d 0F3(z_d) / (N(x_d) N(x'_d)) with
    z_d = x_d x'_d / k^2."""
    if not k < 0:
        raise InvalidParams(f"deformation parameter must be negative, got {k}")
    x, x2 = _as_points(x), _as_points(x2)
    _check_pair(x, x2)
    pa, pb = x[None, :], x2[None, :]
    val = _nlcs_pair_values(
        pa, pb, k, _nlcs_point_norms(pa, k), _nlcs_point_norms(pb, k)
    )
    return float(val[0])


def general_nlcs_eval(
    x, x2, rho: DeformationSequence, truncation: int
) -> float:
    """Truncated feature-map kernel for an arbitrary weight sequence:

        prod_d S(x_d, x'_d) / sqrt(S(x_d, x_d) S(x'_d, x'_d)),
        S(a, b) = sum_{n=0}^{M} (a b)^n / rho_n^2.

    Power iterates that leave the double range truncate the sum early; use
    NlcsKernel for production-scale arguments.
    """
    if truncation < 1:
        raise InvalidParams(f"truncation must be >= 1, got {truncation}")
    x, x2 = _as_points(x), _as_points(x2)
    _check_pair(x, x2)
    w2 = []
    for n in range(truncation + 1):
        r = float(rho.rho(n))
        if n == 0 and r != 1.0:
            raise InvalidParams(f"rho_0 must be 1, got {r!r}")
        if not r > 0:
            raise InvalidParams(f"rho_{n} must be positive, got {r!r}")
        w2.append(r * r)

    def overlap(a: float, b: float) -> float:
        total, p = 0.0, 1.0
        for n in range(truncation + 1):
            if not math.isfinite(p):
                break
            if math.isfinite(w2[n]):
                total += p / w2[n]
            p *= a * b
        return total

    val = 1.0
    for xd, x2d in zip(x, x2):
        val *= overlap(xd, x2d) / math.sqrt(overlap(xd, xd) * overlap(x2d, x2d))
    return val


# --- dispatch and Gram assembly -------------------------------------------


def kernel_eval(spec: KernelSpec, x, x2) -> float:
    if isinstance(spec, RbfKernel):
        return rbf_eval(x, x2, spec.sigma)
    if isinstance(spec, SqueezedKernel):
        return squeezed_eval(x, x2, spec.c)
    if isinstance(spec, NlcsKernel):
        return nlcs_eval(x, x2, spec.k)
    if isinstance(spec, GeneralNlcsKernel):
        return general_nlcs_eval(x, x2, spec.rho, spec.truncation)
    raise InvalidParams(f"unknown kernel spec {spec!r}")


def _rows_eval(
    spec: KernelSpec,
    pa: np.ndarray,
    pb: np.ndarray,
    na=None,
    nb=None,
) -> np.ndarray:
    """Matched-row kernel values (pa[i] vs pb[i]); na/nb are cached 0F3
    point norms where applicable."""
    if isinstance(spec, RbfKernel):
        d = pa - pb
        return np.exp(-np.einsum("ij,ij->i", d, d) / (2.0 * spec.sigma**2))
    if isinstance(spec, SqueezedKernel):
        return np.prod(_squeezed_factors(pa - pb, spec.c), axis=1)
    if isinstance(spec, NlcsKernel):
        if na is None:
            na = _nlcs_point_norms(pa, spec.k)
        if nb is None:
            nb = _nlcs_point_norms(pb, spec.k)
        return _nlcs_pair_values(pa, pb, spec.k, na, nb)
    return np.array(
        [kernel_eval(spec, a, b) for a, b in zip(pa, pb)]
    )


def _take_norms(norms, idx):
    if norms is None:
        return None
    return norms[0][idx], norms[1][idx]


def cross_matrix(spec: KernelSpec, pts_a: np.ndarray, pts_b: np.ndarray) -> np.ndarray:
    """Dense kernel matrix K[i, j] = k(pts_a[i], pts_b[j])."""
    pts_a = np.asarray(pts_a, float)
    pts_b = np.asarray(pts_b, float)
    if pts_a.shape[1] != pts_b.shape[1]:
        raise DimensionMismatch(
            f"point sets disagree on dimension: {pts_a.shape} vs {pts_b.shape}"
        )
    na = nb = None
    if isinstance(spec, NlcsKernel):
        na = _nlcs_point_norms(pts_a, spec.k)
        nb = _nlcs_point_norms(pts_b, spec.k)
    out = np.empty((pts_a.shape[0], pts_b.shape[0]))
    ii, jj = np.unravel_index(np.arange(out.size), out.shape)
    for lo in range(0, out.size, _PAIR_CHUNK):
        hi = min(lo + _PAIR_CHUNK, out.size)
        i, j = ii[lo:hi], jj[lo:hi]
        out.reshape(-1)[lo:hi] = _rows_eval(
            spec, pts_a[i], pts_b[j], _take_norms(na, i), _take_norms(nb, j)
        )
    return out


@dataclass
class GramMatrix:
    n: int
    values: np.ndarray
    kernel: KernelSpec
    dataset_fingerprint: str
    points: np.ndarray = field(repr=False, default=None)


def _fingerprint(points: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(str(points.shape).encode())
    h.update(np.ascontiguousarray(points).tobytes())
    return h.hexdigest()[:16]


def gram(points: np.ndarray, spec: KernelSpec) -> GramMatrix:
    """Gram matrix over a point set; each unordered pair is evaluated once
    and mirrored, so the result is exactly symmetric."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise DimensionMismatch(f"expected (n, d) points, got {points.shape}")
    n = points.shape[0]
    if n > _GRAM_LIMIT:
        raise SizeLimitExceeded(f"gram supports at most {_GRAM_LIMIT} points, got {n}")
    norms = None
    if isinstance(spec, NlcsKernel):
        norms = _nlcs_point_norms(points, spec.k)
    iu, ju = np.triu_indices(n)
    vals = np.empty(iu.size)
    for lo in range(0, iu.size, _PAIR_CHUNK):
        hi = min(lo + _PAIR_CHUNK, iu.size)
        i, j = iu[lo:hi], ju[lo:hi]
        vals[lo:hi] = _rows_eval(
            spec, points[i], points[j], _take_norms(norms, i), _take_norms(norms, j)
        )
    values = np.zeros((n, n))
    values[iu, ju] = vals
    values[ju, iu] = vals
    return GramMatrix(n, values, spec, _fingerprint(points), points)


def min_eigenvalue(g: GramMatrix, *, max_sweeps: int = 60) -> float:
    """Smallest eigenvalue by cyclic Jacobi rotations; converged when the
    off-diagonal Frobenius norm falls below 1e-12 * ||G||_F."""
    n = g.n
    if n > _EIG_LIMIT:
        raise SizeLimitExceeded(
            f"min_eigenvalue supports at most {_EIG_LIMIT} points, got {n}"
        )
    A = np.array(g.values, dtype=float, copy=True)
    if n == 1:
        return float(A[0, 0])
    norm = float(np.linalg.norm(A))
    target = 1e-12 * norm
    if norm == 0.0:
        return 0.0
    skip = target / n

    def off_norm() -> float:
        # norm of the zero-diagonal copy; subtracting sums of squares would
        # cancel catastrophically near convergence
        B = A.copy()
        np.fill_diagonal(B, 0.0)
        return float(np.linalg.norm(B))

    for _ in range(max_sweeps):
        if off_norm() <= target:
            return float(np.min(np.diag(A)))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (
                    abs(theta) + math.sqrt(theta * theta + 1.0)
                )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                app, aqq = A[p, p], A[q, q]
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                new_p = col_p - s * (col_q + tau * col_p)
                new_q = col_q + s * (col_p - tau * col_q)
                A[:, p] = new_p
                A[p, :] = new_p
                A[:, q] = new_q
                A[q, :] = new_q
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = A[q, p] = 0.0
    if off_norm() <= target:
        return float(np.min(np.diag(A)))
    raise NonConvergence(
        f"Jacobi sweeps did not reduce the off-diagonal norm below {target!r}"
    )


# --- serialization ---------------------------------------------------------


def spec_label(spec: KernelSpec) -> str:
    if isinstance(spec, RbfKernel):
        return f"rbf(sigma={spec.sigma!r})"
    if isinstance(spec, SqueezedKernel):
        return f"squeezed(c={spec.c!r})"
    if isinstance(spec, NlcsKernel):
        return f"nlcs(k={spec.k!r})"
    if isinstance(spec, GeneralNlcsKernel):
        return f"general_nlcs(rho={spec.rho.name},M={spec.truncation})"
    raise InvalidParams(f"unknown kernel spec {spec!r}")


def spec_to_dict(spec: KernelSpec) -> dict:
    if isinstance(spec, RbfKernel):
        return {"kind": "rbf", "sigma": spec.sigma}
    if isinstance(spec, SqueezedKernel):
        return {"kind": "squeezed", "c": spec.c}
    if isinstance(spec, NlcsKernel):
        return {"kind": "nlcs", "k": spec.k}
    raise InvalidParams(
        f"kernel {spec_label(spec)} has no serializable form (callable weights)"
    )


def spec_from_dict(d: dict) -> KernelSpec:
    kind = d.get("kind")
    if kind == "rbf":
        return RbfKernel(sigma=float(d.get("sigma", 1.0)))
    if kind == "squeezed":
        return SqueezedKernel(c=float(d.get("c", 1.0)))
    if kind == "nlcs":
        return NlcsKernel(k=float(d["k"]))
    raise InvalidParams(f"unknown kernel kind {kind!r}")


def gram_to_csv(g: GramMatrix, path) -> None:
    """Row-major CSV dump with a provenance header line."""
    with open(path, "w") as fh:
        fh.write(f"# kernel={spec_label(g.kernel)} n={g.n}\n")
        for row in g.values:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
