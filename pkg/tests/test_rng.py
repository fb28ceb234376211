"""Random stream tests: documented construction is reproducible bit for bit."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cskernels.rng import ALGORITHM_ID, RandomStream, derive_seed, splitmix64


class TestSplitmix:
    def test_published_first_output(self):
        # first output of the SplitMix64 sequence seeded at 0
        assert splitmix64(0) == 0xE220A8397B1DCDAF

    @given(st.integers(0, 2**64 - 1))
    def test_stays_in_64_bits(self, x):
        assert 0 <= splitmix64(x) < 2**64

    def test_derive_seed_distinct_stages(self):
        seeds = [derive_seed(42, i) for i in range(4)]
        assert len(set(seeds)) == 4
        assert all(0 <= s < 2**64 for s in seeds)

    @given(st.integers(0, 2**63), st.integers(0, 100))
    def test_derive_seed_deterministic(self, seed, index):
        assert derive_seed(seed, index) == derive_seed(seed, index)


class TestStreamDeterminism:
    def test_same_seed_same_stream(self):
        a = RandomStream(123).uniforms(100)
        b = RandomStream(123).uniforms(100)
        np.testing.assert_array_equal(a, b)

    def test_different_seeds_differ(self):
        a = RandomStream(1).uniforms(32)
        b = RandomStream(2).uniforms(32)
        assert not np.array_equal(a, b)

    def test_uniform_snapshot(self):
        # frozen stream head for seed 42; any change breaks stored datasets
        expected = np.array([
            float.fromhex("0x1.a3f102fa9ac51p-1"),
            float.fromhex("0x1.839335b2e643cp-3"),
            float.fromhex("0x1.bc3e09cfe109dp-1"),
            float.fromhex("0x1.940d2a39e3346p-2"),
        ])
        np.testing.assert_array_equal(RandomStream(42).uniforms(4), expected)

    def test_uniforms_in_unit_interval(self):
        u = RandomStream(7).uniforms(10000)
        assert np.all(u >= 0.0) and np.all(u < 1.0)


class TestDerivedDraws:
    def test_normals_match_documented_box_muller(self):
        n = RandomStream(99).normals(6)
        u = RandomStream(99).uniforms(6)
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        theta = 2.0 * np.pi * u[1::2]
        manual = np.empty(6)
        manual[0::2] = r * np.cos(theta)
        manual[1::2] = r * np.sin(theta)
        np.testing.assert_array_equal(n, manual)

    def test_normals_odd_count_drops_last(self):
        np.testing.assert_array_equal(
            RandomStream(5).normals(5), RandomStream(5).normals(6)[:5]
        )

    def test_normals_moments(self):
        z = RandomStream(1234).normals(200_000)
        assert abs(z.mean()) < 0.01
        assert abs(z.std() - 1.0) < 0.01

    def test_bernoulli_matches_uniform_threshold(self):
        mask = RandomStream(11).bernoulli(0.3, 50)
        u = RandomStream(11).uniforms(50)
        np.testing.assert_array_equal(mask, u < 0.3)

    def test_bernoulli_rate(self):
        mask = RandomStream(17).bernoulli(0.2, 100_000)
        assert abs(mask.mean() - 0.2) < 0.005


class TestPermutation:
    @pytest.mark.parametrize("n", [0, 1, 2, 5, 100])
    def test_is_a_permutation(self, n):
        p = RandomStream(3).permutation(n)
        np.testing.assert_array_equal(np.sort(p), np.arange(n))

    def test_matches_documented_fisher_yates(self):
        n = 10
        p = RandomStream(21).permutation(n)
        u = RandomStream(21).uniforms(n - 1)
        idx = list(range(n))
        for pos, i in enumerate(range(n - 1, 0, -1)):
            j = int(u[pos] * (i + 1))
            idx[i], idx[j] = idx[j], idx[i]
        np.testing.assert_array_equal(p, idx)

    def test_small_case_covers_all_orders(self):
        seen = set()
        for seed in range(300):
            seen.add(tuple(RandomStream(seed).permutation(3)))
        assert len(seen) == 6


def test_algorithm_id_names_the_construction():
    assert "philox" in ALGORITHM_ID
    assert "fisher-yates" in ALGORITHM_ID
