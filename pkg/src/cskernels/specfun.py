"""Generalized hypergeometric series 0F3 and friends.

The kernel family in this package is built on

    0F3(; b1, b2, b3; z) = sum_n z^n / (n! (b1)_n (b2)_n (b3)_n),

an entire function of z, summed by direct term recurrence

    t_0 = 1,   t_{n+1} = t_n * z / ((n+1)(b1+n)(b2+n)(b3+n))

with Kahan-compensated accumulation.  A term is accepted as the last one when
|t_n| <= rel_tol * |S_n| for two consecutive terms and n >= 4; the floor of
four terms guards against spurious early exits when a single coefficient
vanishes.  Partial sums approaching the double-precision ceiling are rescaled
by 2**-1024 and the accumulated binary exponent is carried separately, so
callers that only need ratios (kernel normalizations) stay finite.

Derivatives are term-wise differentiated series.  Both reduce to the same
recurrence with shifted lower parameters:

    d/dz   0F3(b; z) = c1 * 0F3(b+1; z),  c1 = 1/(b1 b2 b3)
    d2/dz2 0F3(b; z) = c2 * 0F3(b+2; z),  c2 = 1/((b1)_2 (b2)_2 (b3)_2)

so one vectorized summer serves all three.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, NonConvergence

__all__ = [
    "SeriesResult",
    "ScaledSeries",
    "pochhammer",
    "hyp0f3",
    "hyp0f3_scaled",
    "hyp0f3_array",
    "hyp0f3_derivatives",
    "hyp0f3_derivatives_arrays",
]

_RESCALE_LIMIT = 1e300
_RESCALE_EXP = 1024


@dataclass(frozen=True)
class SeriesResult:
    """Outcome of a scalar series evaluation."""

    value: float
    terms_used: int
    converged: bool


@dataclass(frozen=True)
class ScaledSeries:
    """Series value in the form mantissa * 2**exp2 (exp2 = 0 unless the
    running sum had to be rescaled away from overflow)."""

    mantissa: float
    exp2: int
    terms_used: int
    converged: bool

    @property
    def value(self) -> float:
        with np.errstate(over="ignore"):
            return float(np.ldexp(self.mantissa, self.exp2))


def pochhammer(u: float, n: int) -> float:
    """Rising factorial (u)_n = u (u+1) ... (u+n-1), with (u)_0 = 1.

    Overflow follows IEEE semantics and returns +/-inf.
    """
    if n < 0:
        raise InvalidParams(f"pochhammer order must be >= 0, got {n}")
    out = 1.0
    for i in range(n):
        out *= u + i
    return out


def _is_pole(b: float) -> bool:
    return not np.isfinite(b) or (b <= 0 and b == np.floor(b))


def _check_params(b1: float, b2: float, b3: float) -> None:
    for b in (b1, b2, b3):
        if _is_pole(b):
            raise InvalidParams(
                f"lower parameter {b} is a non-positive integer (series pole)"
            )


def _sum_series(
    b1: float,
    b2: float,
    b3: float,
    z: np.ndarray,
    first: float,
    rel_tol: float,
    max_terms: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Sum first * 0F3(; b1, b2, b3; z) lane-wise over a flat z array.

    Returns (mantissa, exp2, terms_used, converged) arrays.  Finished lanes
    have their running term frozen at zero so the loop only pays for the
    slowest lane's extra iterations.
    """
    lanes = z.shape[0]
    total = np.full(lanes, first)
    comp = np.zeros(lanes)
    term = np.full(lanes, first)
    exp2 = np.zeros(lanes, dtype=np.int64)
    streak = np.zeros(lanes, dtype=np.int16)
    active = np.ones(lanes, dtype=bool)
    terms_used = np.full(lanes, max_terms, dtype=np.int64)

    def rescale(mask):
        nonlocal total, comp, term, exp2
        total = np.where(mask, np.ldexp(total, -_RESCALE_EXP), total)
        comp = np.where(mask, np.ldexp(comp, -_RESCALE_EXP), comp)
        term = np.where(mask, np.ldexp(term, -_RESCALE_EXP), term)
        exp2 = np.where(mask, exp2 + _RESCALE_EXP, exp2)

    m = 0
    while active.any() and m < max_terms - 1:
        factor = z / ((m + 1.0) * (b1 + m) * (b2 + m) * (b3 + m))
        # a single multiply can jump by |factor|, so rescale lanes where the
        # product would leave the double range before it happens
        pre = np.abs(term) > _RESCALE_LIMIT / np.maximum(1.0, np.abs(factor))
        if pre.any():
            rescale(pre)
        term = term * factor
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        m += 1

        small = np.abs(term) <= rel_tol * np.abs(total)
        streak = np.where(small, streak + 1, 0)
        if m >= 4:
            newly = active & (streak >= 2)
            if newly.any():
                terms_used[newly] = m + 1
                active &= ~newly
                term = np.where(newly, 0.0, term)

        post = np.abs(total) > _RESCALE_LIMIT
        if post.any():
            rescale(post)

    return total, exp2, terms_used, ~active


def hyp0f3_array(
    b1: float,
    b2: float,
    b3: float,
    z: np.ndarray,
    *,
    rel_tol: float = 1e-15,
    max_terms: int = 10000,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized 0F3 in scaled form: returns (mantissa, exp2) arrays.

    Raises NonConvergence if any lane exhausts max_terms.
    """
    _check_params(b1, b2, b3)
    z = np.ascontiguousarray(z, dtype=float)
    flat = z.reshape(-1)
    mant, exp2, _, converged = _sum_series(b1, b2, b3, flat, 1.0, rel_tol, max_terms)
    if not converged.all():
        bad = flat[~converged]
        raise NonConvergence(
            f"0F3 series did not converge within {max_terms} terms "
            f"for {bad.size} argument(s), first z={bad[0]!r}"
        )
    return mant.reshape(z.shape), exp2.reshape(z.shape)


def hyp0f3_scaled(
    b1: float,
    b2: float,
    b3: float,
    z: float,
    *,
    rel_tol: float = 1e-15,
    max_terms: int = 10000,
) -> ScaledSeries:
    """Scalar 0F3 kept in mantissa * 2**exp2 form (never overflows for
    convergent sums); raises NonConvergence on budget exhaustion."""
    _check_params(b1, b2, b3)
    zz = np.array([float(z)])
    mant, exp2, used, converged = _sum_series(b1, b2, b3, zz, 1.0, rel_tol, max_terms)
    if not converged[0]:
        raise NonConvergence(
            f"0F3 series did not converge within {max_terms} terms at z={z!r}"
        )
    return ScaledSeries(float(mant[0]), int(exp2[0]), int(used[0]), True)


def hyp0f3(
    b1: float,
    b2: float,
    b3: float,
    z: float,
    *,
    rel_tol: float = 1e-15,
    max_terms: int = 10000,
) -> SeriesResult:
    """0F3(; b1, b2, b3; z) as a plain double.

    Values beyond the double range come back as +/-inf per floating-point
    semantics; use hyp0f3_scaled when only ratios are needed.
    """
    s = hyp0f3_scaled(b1, b2, b3, z, rel_tol=rel_tol, max_terms=max_terms)
    return SeriesResult(s.value, s.terms_used, s.converged)


def hyp0f3_derivatives_arrays(
    b1: float,
    b2: float,
    b3: float,
    z: np.ndarray,
    *,
    rel_tol: float = 1e-15,
    max_terms: int = 10000,
) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Vectorized (F, F', F'') in scaled form: three (mantissa, exp2) pairs."""
    _check_params(b1, b2, b3)
    z = np.ascontiguousarray(z, dtype=float)
    flat = z.reshape(-1)
    out = []
    for shift, first in (
        (0, 1.0),
        (1, 1.0 / (b1 * b2 * b3)),
        (2, 1.0 / (pochhammer(b1, 2) * pochhammer(b2, 2) * pochhammer(b3, 2))),
    ):
        mant, exp2, _, converged = _sum_series(
            b1 + shift, b2 + shift, b3 + shift, flat, first, rel_tol, max_terms
        )
        if not converged.all():
            raise NonConvergence(
                f"0F3 derivative series (shift {shift}) did not converge "
                f"within {max_terms} terms"
            )
        out.append((mant.reshape(z.shape), exp2.reshape(z.shape)))
    return tuple(out)


def hyp0f3_derivatives(
    b1: float,
    b2: float,
    b3: float,
    z: float,
    *,
    rel_tol: float = 1e-15,
    max_terms: int = 10000,
) -> tuple[float, float, float]:
    """(F, dF/dz, d2F/dz2) at a scalar argument, as plain doubles."""
    parts = hyp0f3_derivatives_arrays(
        b1, b2, b3, np.array([float(z)]), rel_tol=rel_tol, max_terms=max_terms
    )
    with np.errstate(over="ignore"):
        return tuple(float(np.ldexp(m[0], e[0])) for m, e in parts)
