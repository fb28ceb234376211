"""Dataset generator tests: exact noise-free geometry, noise statistics,
flip/split/fold behavior, and csv round-trips."""

import math

import numpy as np
import pytest

from cskernels.datasets import (
    Dataset,
    FoldPlan,
    flip_labels,
    load_csv,
    make_circles,
    make_moons,
    save_csv,
    split,
    stratified_folds,
)
from cskernels.errors import (
    DegenerateSplit,
    DimensionMismatch,
    InvalidFactor,
    InvalidParams,
    InvalidSize,
    TooManyFolds,
)
from cskernels.rng import ALGORITHM_ID


class TestMoons:
    def test_four_point_noise_free_geometry(self):
        ds = make_moons(4, noise=0.0, seed=0)
        expected = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 0.5], [2.0, 0.5]])
        np.testing.assert_allclose(ds.points, expected, atol=1e-15)
        np.testing.assert_array_equal(ds.labels, [-1, -1, 1, 1])

    def test_odd_count_gives_outer_arc_the_extra_point(self):
        ds = make_moons(7, noise=0.0)
        assert (ds.labels == -1).sum() == 4
        assert (ds.labels == 1).sum() == 3

    def test_noise_free_points_lie_on_the_two_arcs(self):
        ds = make_moons(40, noise=0.0)
        outer = ds.points[ds.labels == -1]
        inner = ds.points[ds.labels == 1]
        np.testing.assert_allclose(np.hypot(outer[:, 0], outer[:, 1]), 1.0, atol=1e-12)
        r_in = np.hypot(inner[:, 0] - 1.0, inner[:, 1] + 0.5 - 1.0)
        np.testing.assert_allclose(r_in, 1.0, atol=1e-12)
        assert np.all(outer[:, 1] >= -1e-12)

    def test_noise_statistics(self):
        clean = make_moons(20000, noise=0.0, seed=9).points
        noisy = make_moons(20000, noise=0.3, seed=9).points
        delta = (noisy - clean).ravel()
        assert abs(delta.mean()) < 0.01
        assert abs(delta.std() - 0.3) < 0.01

    def test_seed_determinism(self):
        a = make_moons(50, noise=0.2, seed=5)
        b = make_moons(50, noise=0.2, seed=5)
        c = make_moons(50, noise=0.2, seed=6)
        np.testing.assert_array_equal(a.points, b.points)
        assert not np.array_equal(a.points, c.points)

    def test_metadata(self):
        ds = make_moons(10, noise=0.1, seed=3)
        assert ds.meta["generator"] == "moons"
        assert ds.meta["n_samples"] == 10
        assert ds.meta["noise"] == 0.1
        assert ds.meta["flip_y"] == 0.0
        assert ds.meta["seed"] == 3
        assert ds.meta["rng"] == ALGORITHM_ID
        assert ds.meta["n_informative"] == 2

    def test_size_validation(self):
        with pytest.raises(InvalidSize):
            make_moons(1)
        with pytest.raises(InvalidSize):
            make_moons(2.5)
        with pytest.raises(InvalidParams):
            make_moons(10, noise=-0.1)


class TestCircles:
    def test_noise_free_radii(self):
        ds = make_circles(8, noise=0.0, factor=0.5)
        radii = np.hypot(ds.points[:, 0], ds.points[:, 1])
        np.testing.assert_allclose(radii[ds.labels == -1], 1.0, atol=1e-15)
        np.testing.assert_allclose(radii[ds.labels == 1], 0.5, atol=1e-15)

    def test_angles_evenly_spaced_without_endpoint(self):
        ds = make_circles(8, noise=0.0, factor=0.3)
        outer = ds.points[ds.labels == -1]
        angles = np.mod(np.arctan2(outer[:, 1], outer[:, 0]), 2 * math.pi)
        np.testing.assert_allclose(
            np.sort(angles), np.arange(4) * math.pi / 2, atol=1e-12
        )

    def test_factor_validation(self):
        for bad in (0.0, 1.0, -0.3, 1.7):
            with pytest.raises(InvalidFactor):
                make_circles(10, factor=bad)

    def test_factor_recorded_in_metadata(self):
        ds = make_circles(10, factor=0.25, seed=1)
        assert ds.meta["factor"] == 0.25
        assert ds.meta["generator"] == "circles"

    def test_class_split_counts(self):
        ds = make_circles(9, factor=0.5)
        assert (ds.labels == -1).sum() == 5
        assert (ds.labels == 1).sum() == 4


class TestFlipLabels:
    def test_zero_rate_is_identity(self):
        ds = make_moons(30, seed=1)
        flipped = flip_labels(ds, 0.0, seed=2)
        np.testing.assert_array_equal(flipped.labels, ds.labels)

    def test_unit_rate_flips_everything(self):
        ds = make_moons(30, seed=1)
        flipped = flip_labels(ds, 1.0, seed=2)
        np.testing.assert_array_equal(flipped.labels, -ds.labels)

    def test_same_seed_flip_is_an_involution(self):
        ds = make_moons(50, seed=4)
        twice = flip_labels(flip_labels(ds, 0.4, seed=7), 0.4, seed=7)
        np.testing.assert_array_equal(twice.labels, ds.labels)

    def test_flip_rate_statistics(self):
        ds = make_moons(100_000, seed=0)
        flipped = flip_labels(ds, 0.2, seed=3)
        rate = (flipped.labels != ds.labels).mean()
        assert abs(rate - 0.2) < 0.005

    def test_points_untouched_and_meta_updated(self):
        ds = make_moons(20, noise=0.1, seed=5)
        flipped = flip_labels(ds, 0.3, seed=6)
        np.testing.assert_array_equal(flipped.points, ds.points)
        assert flipped.meta["flip_y"] == 0.3
        assert ds.meta["flip_y"] == 0.0

    def test_rate_validation(self):
        ds = make_moons(10)
        with pytest.raises(InvalidParams):
            flip_labels(ds, -0.1, seed=0)
        with pytest.raises(InvalidParams):
            flip_labels(ds, 1.5, seed=0)


class TestSplit:
    def test_sixty_forty_sizes(self):
        train, test = split(make_moons(10, noise=0.1, seed=0), 0.6, seed=1)
        assert train.n == 6
        assert test.n == 4

    def test_partition_preserves_all_points(self):
        ds = make_moons(25, noise=0.2, seed=2)
        train, test = split(ds, 0.6, seed=3)
        merged = np.vstack([train.points, test.points])
        assert merged.shape == ds.points.shape
        orig = {tuple(row) for row in ds.points}
        assert {tuple(row) for row in merged} == orig

    def test_split_determinism(self):
        ds = make_moons(40, noise=0.1, seed=0)
        t1, _ = split(ds, 0.5, seed=9)
        t2, _ = split(ds, 0.5, seed=9)
        np.testing.assert_array_equal(t1.points, t2.points)

    def test_degenerate_split_rejected(self):
        ds = Dataset(np.arange(8.0).reshape(4, 2), np.array([1, 1, 1, -1]))
        with pytest.raises(DegenerateSplit):
            split(ds, 0.25, seed=0)  # 1-point train side is single-class

    def test_fraction_validation(self):
        ds = make_moons(10)
        for bad in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(InvalidParams):
                split(ds, bad, seed=0)


class TestStratifiedFolds:
    def test_balanced_five_folds(self):
        ds = make_moons(20, noise=0.1, seed=1)
        plan = stratified_folds(ds, 5, seed=2)
        assert isinstance(plan, FoldPlan)
        assert plan.n_folds == 5
        for fold in plan.fold_indices:
            assert fold.size == 4
            assert (ds.labels[fold] == 1).sum() == 2
            assert (ds.labels[fold] == -1).sum() == 2

    def test_folds_partition_everything(self):
        ds = make_moons(23, noise=0.1, seed=1)
        plan = stratified_folds(ds, 5, seed=2)
        merged = np.sort(np.concatenate(plan.fold_indices))
        np.testing.assert_array_equal(merged, np.arange(23))

    def test_splits_are_complementary(self):
        ds = make_moons(20, seed=0)
        plan = stratified_folds(ds, 4, seed=1)
        for train, val in plan.splits():
            assert np.intersect1d(train, val).size == 0
            np.testing.assert_array_equal(
                np.sort(np.concatenate([train, val])), np.arange(20)
            )

    def test_every_fold_sees_both_classes(self):
        ds = make_circles(17, factor=0.5, seed=3)
        plan = stratified_folds(ds, 5, seed=4)
        for fold in plan.fold_indices:
            assert set(np.unique(ds.labels[fold])) == {-1, 1}

    def test_too_many_folds(self):
        pts = np.arange(20.0).reshape(10, 2)
        labels = np.array([1] * 7 + [-1] * 3)
        ds = Dataset(pts, labels)
        with pytest.raises(TooManyFolds):
            stratified_folds(ds, 4, seed=0)

    def test_single_fold_contains_everything(self):
        plan = stratified_folds(make_moons(10), 1, seed=0)
        np.testing.assert_array_equal(plan.fold_indices[0], np.arange(10))

    def test_fold_count_validation(self):
        with pytest.raises(InvalidParams):
            stratified_folds(make_moons(10), 0, seed=0)

    def test_fold_proportions_track_unbalanced_classes(self):
        ds = flip_labels(make_moons(200, noise=0.1, seed=1), 0.2, seed=2)
        plan = stratified_folds(ds, 5, seed=3)
        for cls in (-1, 1):
            total = (ds.labels == cls).sum()
            for fold in plan.fold_indices:
                got = (ds.labels[fold] == cls).sum()
                assert abs(got - total / 5) <= 1.0

    def test_fold_determinism(self):
        ds = make_moons(30, noise=0.1, seed=5)
        p1 = stratified_folds(ds, 3, seed=6)
        p2 = stratified_folds(ds, 3, seed=6)
        for a, b in zip(p1.fold_indices, p2.fold_indices):
            np.testing.assert_array_equal(a, b)


class TestCsv:
    def test_round_trip_is_exact(self, tmp_path):
        ds = make_circles(15, noise=0.2, factor=0.4, seed=8)
        path = tmp_path / "data.csv"
        save_csv(ds, path)
        loaded = load_csv(path)
        np.testing.assert_array_equal(loaded.points, ds.points)
        np.testing.assert_array_equal(loaded.labels, ds.labels)
        assert loaded.meta == ds.meta

    def test_file_format(self, tmp_path):
        ds = make_moons(4, seed=0)
        path = tmp_path / "data.csv"
        save_csv(ds, path)
        lines = path.read_text().splitlines()
        meta_lines = [ln for ln in lines if ln.startswith("#")]
        assert len(meta_lines) == len(ds.meta)
        assert all("=" in ln for ln in meta_lines)
        assert lines[len(meta_lines)] == "x1,x2,label"
        assert len(lines) == len(meta_lines) + 1 + 4

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# generator=moons\n1.0,2.0,1\n")
        with pytest.raises(InvalidParams):
            load_csv(path)


class TestDatasetValidation:
    def test_label_values_checked(self):
        with pytest.raises(InvalidParams):
            Dataset(np.zeros((2, 2)), np.array([0, 1]))

    def test_shape_mismatch_checked(self):
        with pytest.raises(DimensionMismatch):
            Dataset(np.zeros((3, 2)), np.array([1, -1]))

    def test_subset_copies(self):
        ds = make_moons(10, seed=0)
        sub = ds.subset([0, 2, 4])
        sub.points[0, 0] = 99.0
        assert ds.points[0, 0] != 99.0
