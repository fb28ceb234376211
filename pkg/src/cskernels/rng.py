"""Deterministic random streams for dataset generation and splitting.

Every stochastic step in this package draws from a Philox-4x64-10 counter
generator keyed directly by a 64-bit seed (no seed-sequence scrambling), so a
seed fully determines the stream.  Derived quantities are defined on top of
the raw uniform stream:

* uniforms: one 64-bit word per draw, mapped to [0, 1) as ``(w >> 11) * 2**-53``
  (numpy's native double path for Philox);
* normals: Box-Muller pairs, both outputs consumed in order
  ``r*cos(theta), r*sin(theta)``;
* permutations: Fisher-Yates, swapping index ``i`` (descending from n-1) with
  ``j = floor(u * (i + 1))``;
* Bernoulli: ``u < p``.

``ALGORITHM_ID`` names this exact construction and is recorded in dataset and
experiment metadata.  Streams are not compatible with Mersenne-Twister
consumers; reproducibility is defined by this module, not by sklearn.
"""

from __future__ import annotations

import numpy as np

ALGORITHM_ID = "philox4x64-10/u53/box-muller/fisher-yates"

_MASK64 = 0xFFFFFFFFFFFFFFFF


def splitmix64(x: int) -> int:
    """One step of the SplitMix64 mixing function."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Mix a base seed with a task index into an independent 64-bit subseed.

    Defined as ``splitmix64(splitmix64(seed) + index)`` so that nearby
    (seed, index) pairs land far apart in key space.
    """
    return splitmix64((splitmix64(seed & _MASK64) + (index & _MASK64)) & _MASK64)


class RandomStream:
    """A seeded Philox stream exposing only the documented draw primitives."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._gen = np.random.Generator(np.random.Philox(key=self.seed))

    def uniforms(self, n: int) -> np.ndarray:
        return self._gen.random(n)

    def normals(self, n: int) -> np.ndarray:
        """n standard normals via Box-Muller; draws 2*ceil(n/2) uniforms."""
        pairs = (n + 1) // 2
        u = self.uniforms(2 * pairs)
        u1, u2 = u[0::2], u[1::2]
        # 1 - u1 keeps the log argument in (0, 1], avoiding log(0)
        r = np.sqrt(-2.0 * np.log1p(-u1))
        theta = 2.0 * np.pi * u2
        out = np.empty(2 * pairs)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:n]

    def bernoulli(self, p: float, n: int) -> np.ndarray:
        return self.uniforms(n) < p

    def permutation(self, n: int) -> np.ndarray:
        """Fisher-Yates permutation of range(n) consuming n-1 uniforms."""
        idx = np.arange(n)
        if n < 2:
            return idx
        u = self.uniforms(n - 1)
        for pos, i in enumerate(range(n - 1, 0, -1)):
            j = int(u[pos] * (i + 1))
            idx[i], idx[j] = idx[j], idx[i]
        return idx
