#!/usr/bin/env python3
"""Train one model per kernel on a reference dataset and export its decision
surface as a mesh CSV for external plotting."""

import argparse
from pathlib import Path

from cskernels.datasets import make_circles, make_moons
from cskernels.experiments import boundary_grid, default_ranges, export_result
from cskernels.kernels import NlcsKernel, RbfKernel, SqueezedKernel, gram, spec_label
from cskernels.svm import train_smo


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results", help="directory for grid CSVs")
    ap.add_argument("--dataset", default="moons", choices=("moons", "circles"))
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--noise", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--grid", type=int, default=300, help="mesh resolution per axis")
    ap.add_argument("--k", type=float, default=-0.001, help="deformation parameter")
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.dataset == "moons":
        ds = make_moons(args.n, noise=args.noise, seed=args.seed)
    else:
        ds = make_circles(args.n, noise=args.noise, seed=args.seed)
    x_range, y_range = default_ranges(ds.points)

    for spec in (RbfKernel(1.0), SqueezedKernel(1.0), NlcsKernel(args.k)):
        model, report = train_smo(gram(ds.points, spec), ds.labels, C=1.0)
        grid = boundary_grid(model, x_range, y_range, resolution=args.grid)
        stem = spec_label(spec).replace("(", "_").rstrip(")").replace("=", "")
        path = out_dir / f"boundary_{args.dataset}_{stem}.csv"
        export_result(grid, path, format="csv")
        print(
            f"{spec_label(spec):18s} support={model.support_indices.size:3d} "
            f"converged={report.converged} -> {path}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
