"""CLI tests: subcommand behavior, file outputs, and exit-code mapping
(0 success, 2 bad input, 3 numerical failure, 4 I/O)."""

import json

import numpy as np
import pytest

import cskernels.cli as cli
from cskernels.cli import main
from cskernels.datasets import flip_labels, load_csv, make_moons
from cskernels.experiments import STAGE_FLIP, STAGE_GENERATE, import_grid_csv, import_result_json
from cskernels.rng import derive_seed
from cskernels.svm import model_from_json, predict_many


def gen(tmp_path, name="data.csv", dataset="circles", n=40, noise=0.0, seed=1, extra=()):
    path = tmp_path / name
    code = main(
        [
            "gen-data",
            "--dataset",
            dataset,
            "--n",
            str(n),
            "--noise",
            str(noise),
            "--seed",
            str(seed),
            *extra,
            "-o",
            str(path),
        ]
    )
    assert code == 0
    return path


class TestGenData:
    def test_writes_loadable_csv(self, tmp_path, capsys):
        path = gen(tmp_path, n=30)
        assert "wrote 30 points" in capsys.readouterr().out
        ds = load_csv(path)
        assert ds.n == 30
        assert set(ds.labels) == {-1, 1}

    def test_matches_experiment_harness_stage_seeds(self, tmp_path):
        path = gen(tmp_path, dataset="moons", n=24, noise=0.1, seed=7)
        expected = make_moons(24, noise=0.1, seed=derive_seed(7, STAGE_GENERATE))
        expected = flip_labels(expected, 0.0, derive_seed(7, STAGE_FLIP))
        ds = load_csv(path)
        np.testing.assert_array_equal(ds.points, expected.points)
        np.testing.assert_array_equal(ds.labels, expected.labels)

    def test_factor_controls_inner_radius(self, tmp_path):
        path = gen(tmp_path, n=20, extra=("--factor", "0.25"))
        ds = load_csv(path)
        radii = np.hypot(ds.points[:, 0], ds.points[:, 1])
        np.testing.assert_allclose(np.unique(np.round(radii, 12)), [0.25, 1.0])

    def test_flip_fraction_recorded_and_applied(self, tmp_path):
        plain = gen(tmp_path, "a.csv", n=30, seed=2)
        flipped = gen(tmp_path, "b.csv", n=30, seed=2, extra=("--flip-y", "1.0"))
        a, b = load_csv(plain), load_csv(flipped)
        np.testing.assert_array_equal(a.labels, -b.labels)
        assert b.meta["flip_y"] == 1.0

    def test_too_few_samples_exits_2(self, tmp_path, capsys):
        code = main(
            ["gen-data", "--dataset", "moons", "--n", "1", "--noise", "0",
             "--seed", "1", "-o", str(tmp_path / "x.csv")]
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_dataset_is_an_argparse_error(self, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            main(["gen-data", "--dataset", "blobs", "--n", "10", "--noise", "0",
                  "--seed", "1", "-o", str(tmp_path / "x.csv")])
        assert excinfo.value.code == 2

    def test_unwritable_output_exits_4(self, tmp_path):
        code = main(
            ["gen-data", "--dataset", "moons", "--n", "10", "--noise", "0",
             "--seed", "1", "-o", str(tmp_path / "no" / "dir" / "x.csv")]
        )
        assert code == 4


class TestTrain:
    def test_trains_and_writes_model(self, tmp_path, capsys):
        data = gen(tmp_path)
        model_path = tmp_path / "model.json"
        code = main(["train", "--data", str(data), "--kernel", "rbf",
                     "--C", "10.0", "-o", str(model_path)])
        assert code == 0
        out = capsys.readouterr().out
        assert "converged: True" in out
        model = model_from_json(model_path.read_text())
        ds = load_csv(data)
        assert np.array_equal(predict_many(model, ds.points), ds.labels)

    def test_kernel_flags_reach_the_model_file(self, tmp_path):
        data = gen(tmp_path)
        model_path = tmp_path / "model.json"
        assert main(["train", "--data", str(data), "--kernel", "nlcs",
                     "--k", "-0.01", "-o", str(model_path)]) == 0
        assert json.loads(model_path.read_text())["kernel"] == {"kind": "nlcs", "k": -0.01}

    def test_nonconvergence_exits_3_but_writes_model(self, tmp_path, capsys):
        data = gen(tmp_path, n=30, noise=1.5, seed=3)
        model_path = tmp_path / "model.json"
        code = main(["train", "--data", str(data), "--kernel", "nlcs", "--k", "-0.001",
                     "--C", "1000", "--tol", "1e-12", "-o", str(model_path)])
        assert code == 3
        assert "above tolerance" in capsys.readouterr().err
        assert model_path.exists()

    def test_missing_data_file_exits_4(self, tmp_path):
        code = main(["train", "--data", str(tmp_path / "nope.csv"), "--kernel", "rbf",
                     "-o", str(tmp_path / "m.json")])
        assert code == 4

    def test_bad_kernel_parameter_exits_2(self, tmp_path):
        data = gen(tmp_path)
        code = main(["train", "--data", str(data), "--kernel", "nlcs",
                     "--k", "0.5", "-o", str(tmp_path / "m.json")])
        assert code == 2


class TestExperimentCommand:
    def config(self, tmp_path, **overrides):
        cfg = {
            "dataset": "circles",
            "n_samples": 80,
            "noise_levels": [0.0],
            "kernel": {"kind": "rbf", "sigma": 1.0},
            "seeds": [1, 2],
        }
        cfg.update(overrides)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_runs_and_reports_cells(self, tmp_path, capsys):
        cfg = self.config(tmp_path)
        out = tmp_path / "res.json"
        assert main(["experiment", "--config", str(cfg), "-o", str(out)]) == 0
        stdout = capsys.readouterr().out
        assert "noise=0 mean=" in stdout
        res = import_result_json(out)
        assert res.config.dataset == "circles"
        assert len(res.cells[0].per_seed) == 2

    def test_repeat_runs_are_byte_identical(self, tmp_path):
        cfg = self.config(tmp_path)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["experiment", "--config", str(cfg), "-o", str(a)]) == 0
        assert main(["experiment", "--config", str(cfg), "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_malformed_json_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["experiment", "--config", str(bad), "-o", str(tmp_path / "o.json")]) == 2

    def test_missing_field_exits_2(self, tmp_path, capsys):
        cfg = self.config(tmp_path)
        raw = json.loads(cfg.read_text())
        del raw["kernel"]
        cfg.write_text(json.dumps(raw))
        assert main(["experiment", "--config", str(cfg), "-o", str(tmp_path / "o.json")]) == 2
        assert "field" in capsys.readouterr().err

    def test_missing_config_file_exits_4(self, tmp_path):
        assert main(["experiment", "--config", str(tmp_path / "nope.json"),
                     "-o", str(tmp_path / "o.json")]) == 4


class TestBoundary:
    def test_grid_csv_round_trips(self, tmp_path):
        data = gen(tmp_path)
        model_path = tmp_path / "model.json"
        assert main(["train", "--data", str(data), "--kernel", "rbf",
                     "-o", str(model_path)]) == 0
        grid_path = tmp_path / "grid.csv"
        assert main(["boundary", "--model", str(model_path), "--grid", "12",
                     "-o", str(grid_path)]) == 0
        grid = import_grid_csv(grid_path)
        assert grid.resolution == 12
        assert grid.decision_values.shape == (12, 12)

    def test_malformed_model_exits_2(self, tmp_path):
        bad = tmp_path / "model.json"
        bad.write_text("{}")
        assert main(["boundary", "--model", str(bad), "-o", str(tmp_path / "g.csv")]) == 2


class TestCurvature:
    def test_flat_profile_tabulates_unit_metric(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        assert main(["curvature", "--profile", "coherent", "--r-min", "0.1",
                     "--r-max", "2.0", "--samples", "4", "-o", str(out)]) == 0
        assert "ricci range:" in capsys.readouterr().out
        rows = [l for l in out.read_text().splitlines() if not l.startswith("#")][1:]
        for row in rows:
            _, omega, ricci = (float(v) for v in row.split(","))
            assert abs(omega - 1.0) < 1e-10
            assert abs(ricci) < 1e-6

    def test_deformed_profile_writes_header_and_rows(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert main(["curvature", "--profile", "nlcs", "--k", "-0.5", "--r-min", "0.5",
                     "--r-max", "1.5", "--samples", "3", "-o", str(out)]) == 0
        text = out.read_text()
        assert text.startswith("# profile=nlcs(k=-0.5)")
        assert "r,omega,ricci" in text

    def test_invalid_parameters_exit_2(self, tmp_path):
        out = str(tmp_path / "c.csv")
        assert main(["curvature", "--profile", "nlcs", "--k", "0.1", "--r-min", "0.1",
                     "--r-max", "2", "--samples", "4", "-o", out]) == 2
        assert main(["curvature", "--profile", "coherent", "--r-min", "2", "--r-max", "1",
                     "--samples", "4", "-o", out]) == 2
        assert main(["curvature", "--profile", "coherent", "--r-min", "0.1", "--r-max", "2",
                     "--samples", "1", "-o", out]) == 2


class TestGramCheck:
    def test_psd_gram_passes(self, tmp_path, capsys):
        data = gen(tmp_path)
        assert main(["gram-check", "--data", str(data), "--kernel", "rbf"]) == 0
        out = capsys.readouterr().out
        assert "min eigenvalue:" in out
        assert "PASS" in out

    def test_negative_eigenvalue_fails_with_exit_3(self, tmp_path, capsys, monkeypatch):
        data = gen(tmp_path)
        monkeypatch.setattr(cli, "min_eigenvalue", lambda g: -1.0)
        assert main(["gram-check", "--data", str(data), "--kernel", "rbf"]) == 3
        assert "FAIL" in capsys.readouterr().out


class TestParser:
    def test_no_arguments_is_an_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2

    def test_unknown_subcommand_is_an_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 2
