"""Command-line interface.

Subcommands cover the full pipeline: dataset generation (``gen-data``),
single-model training (``train``), noise/seed sweeps (``experiment``),
decision-boundary grids (``boundary``), feature-space curvature profiles
(``curvature``), and Gram positive-semidefiniteness checks (``gram-check``).

Exit codes: 0 success, 2 invalid arguments or malformed inputs, 3 numerical
failure (non-convergence, series breakdown, failed PSD check), 4 I/O errors.

``gen-data --seed N`` derives its generator and flip seeds exactly like the
experiment harness does for harness seed N, so the emitted CSV matches the
dataset of the corresponding experiment cell.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .datasets import flip_labels, load_csv, make_circles, make_moons, save_csv
from .errors import CsKernelsError, InvalidParams, NonConvergence, SeriesFailure
from .experiments import (
    STAGE_FLIP,
    STAGE_GENERATE,
    boundary_grid,
    config_from_dict,
    default_ranges,
    export_result,
    run_experiment,
)
from .geometry import CoherentProfile, NlcsProfile, curvature_curve
from .kernels import NlcsKernel, RbfKernel, SqueezedKernel, gram, min_eigenvalue, spec_label
from .rng import derive_seed
from .svm import model_from_json, model_to_json, train_smo

PSD_THRESHOLD = -1e-8


def _add_kernel_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kernel", required=True, choices=("rbf", "squeezed", "nlcs"))
    p.add_argument("--sigma", type=float, default=1.0, help="rbf width (default 1.0)")
    p.add_argument(
        "--c-squeeze", type=float, default=1.0, help="squeezing strength (default 1.0)"
    )
    p.add_argument(
        "--k", type=float, default=-0.1, help="deformation parameter, < 0 (default -0.1)"
    )


def _spec_from_args(args):
    if args.kernel == "rbf":
        return RbfKernel(args.sigma)
    if args.kernel == "squeezed":
        return SqueezedKernel(args.c_squeeze)
    return NlcsKernel(args.k)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cskernels",
        description="Coherent-state kernel toolkit: datasets, SVM training, "
        "experiments, boundaries, curvature.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a labeled 2-d dataset as csv")
    p.add_argument("--dataset", required=True, choices=("moons", "circles"))
    p.add_argument("--n", required=True, type=int, help="number of samples")
    p.add_argument("--noise", required=True, type=float, help="gaussian noise std")
    p.add_argument(
        "--factor", type=float, default=0.5, help="radius ratio (circles only, default 0.5)"
    )
    p.add_argument("--flip-y", type=float, default=0.0, help="label flip fraction")
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("-o", dest="out", required=True, metavar="PATH")

    p = sub.add_parser("train", help="train a soft-margin SVM on a csv dataset")
    p.add_argument("--data", required=True, help="csv produced by gen-data")
    _add_kernel_args(p)
    p.add_argument("--C", type=float, default=1.0, help="box constraint (default 1.0)")
    p.add_argument("--tol", type=float, default=1e-3, help="KKT tolerance (default 1e-3)")
    p.add_argument("-o", dest="out", required=True, metavar="MODEL_JSON")

    p = sub.add_parser("experiment", help="run a noise/seed sweep from a json config")
    p.add_argument("--config", required=True, help="json form of ExperimentConfig")
    p.add_argument("-o", dest="out", required=True, metavar="OUT_JSON")

    p = sub.add_parser("boundary", help="evaluate a model's decision surface on a mesh")
    p.add_argument("--model", required=True, help="model json written by train")
    p.add_argument("--grid", type=int, default=300, help="mesh resolution (default 300)")
    p.add_argument("-o", dest="out", required=True, metavar="GRID_CSV")

    p = sub.add_parser("curvature", help="tabulate the feature-space metric and curvature")
    p.add_argument("--profile", required=True, choices=("nlcs", "coherent"))
    p.add_argument(
        "--k", type=float, default=-0.1, help="deformation parameter for nlcs (default -0.1)"
    )
    p.add_argument("--r-min", required=True, type=float)
    p.add_argument("--r-max", required=True, type=float)
    p.add_argument("--samples", required=True, type=int)
    p.add_argument("-o", dest="out", required=True, metavar="CSV")

    p = sub.add_parser("gram-check", help="verify a dataset's Gram matrix is PSD")
    p.add_argument("--data", required=True, help="csv produced by gen-data")
    _add_kernel_args(p)

    return parser


def _cmd_gen_data(args) -> int:
    gen_seed = derive_seed(args.seed, STAGE_GENERATE)
    if args.dataset == "moons":
        ds = make_moons(args.n, noise=args.noise, seed=gen_seed)
    else:
        ds = make_circles(args.n, noise=args.noise, factor=args.factor, seed=gen_seed)
    ds = flip_labels(ds, args.flip_y, derive_seed(args.seed, STAGE_FLIP))
    save_csv(ds, args.out)
    print(f"wrote {ds.n} points to {args.out}")
    return 0


def _cmd_train(args) -> int:
    ds = load_csv(args.data)
    spec = _spec_from_args(args)
    model, report = train_smo(gram(ds.points, spec), ds.labels, C=args.C, tol=args.tol)
    Path(args.out).write_text(model_to_json(model))
    print(f"kernel: {spec_label(spec)}")
    print(f"points: {ds.n}")
    print(f"support vectors: {model.support_indices.size}")
    print(f"dual objective: {report.dual_objective!r}")
    print(f"iterations: {report.iterations}")
    print(f"converged: {report.converged}")
    print(f"wrote model to {args.out}")
    if not report.converged:
        print(
            f"error: training stopped with KKT gap {report.kkt_violation:.3g} "
            f"above tolerance {args.tol:g}",
            file=sys.stderr,
        )
        return 3
    return 0


def _cmd_experiment(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidParams(f"config is not valid json: {exc}") from exc
    try:
        cfg = config_from_dict(raw)
    except (KeyError, TypeError) as exc:
        raise InvalidParams(f"config is missing or mistypes a field: {exc}") from exc
    res = run_experiment(cfg)
    for cell in res.cells:
        print(
            f"noise={cell.noise:g} mean={cell.mean_accuracy:.4f} "
            f"std={cell.std_accuracy:.4f}"
        )
    export_result(res, args.out, format="json")
    print(f"wrote results to {args.out}")
    return 0


def _cmd_boundary(args) -> int:
    try:
        model = model_from_json(Path(args.model).read_text())
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InvalidParams(f"model file is malformed: {exc}") from exc
    x_range, y_range = default_ranges(model.train_points)
    grid = boundary_grid(model, x_range, y_range, resolution=args.grid)
    export_result(grid, args.out, format="csv")
    print(f"wrote {args.grid}x{args.grid} grid to {args.out}")
    return 0


def _cmd_curvature(args) -> int:
    profile = CoherentProfile() if args.profile == "coherent" else NlcsProfile(args.k)
    curve = curvature_curve(profile, args.r_min, args.r_max, args.samples)
    export_result(curve, args.out, format="csv")
    print(f"profile: {curve.profile_label}")
    print(f"ricci range: [{float(curve.ricci.min())!r}, {float(curve.ricci.max())!r}]")
    print(f"wrote {args.samples}-sample curve to {args.out}")
    return 0


def _cmd_gram_check(args) -> int:
    ds = load_csv(args.data)
    spec = _spec_from_args(args)
    lam = min_eigenvalue(gram(ds.points, spec))
    print(f"kernel: {spec_label(spec)}")
    print(f"min eigenvalue: {lam:.12e}")
    if lam >= PSD_THRESHOLD:
        print(f"PASS (threshold {PSD_THRESHOLD:g})")
        return 0
    print(f"FAIL (threshold {PSD_THRESHOLD:g})")
    return 3


_HANDLERS = {
    "gen-data": _cmd_gen_data,
    "train": _cmd_train,
    "experiment": _cmd_experiment,
    "boundary": _cmd_boundary,
    "curvature": _cmd_curvature,
    "gram-check": _cmd_gram_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (NonConvergence, SeriesFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (CsKernelsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
