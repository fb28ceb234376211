#!/usr/bin/env python3
"""Run the full accuracy sweep (3 kernels x 2 datasets x 3 noise levels),
print the aggregate table, and write one result JSON per combination."""

import argparse
from pathlib import Path

from cskernels.experiments import ExperimentConfig, export_result, run_experiment
from cskernels.kernels import NlcsKernel, RbfKernel, SqueezedKernel, spec_label


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results", help="directory for result JSON files")
    ap.add_argument("--n", type=int, default=200, help="samples per dataset")
    ap.add_argument("--seeds", type=int, default=20, help="number of seeds (1..N)")
    ap.add_argument("--flip-y", type=float, default=0.0, help="label flip fraction")
    ap.add_argument("--k", type=float, default=-0.001, help="deformation parameter")
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    noise_levels = (0.1, 0.4, 0.7)
    kernels = (RbfKernel(1.0), SqueezedKernel(1.0), NlcsKernel(args.k))
    seeds = tuple(range(1, args.seeds + 1))

    header = f"{'dataset':8s} {'kernel':18s}" + "".join(
        f"  noise={v:<6g}" for v in noise_levels
    )
    print(header)
    print("-" * len(header))
    for dataset in ("moons", "circles"):
        for spec in kernels:
            cfg = ExperimentConfig(
                dataset=dataset,
                n_samples=args.n,
                noise_levels=noise_levels,
                kernel=spec,
                seeds=seeds,
                flip_y=args.flip_y,
            )
            res = run_experiment(cfg)
            row = "".join(
                f"  {c.mean_accuracy:.3f}±{c.std_accuracy:.3f}" for c in res.cells
            )
            print(f"{dataset:8s} {spec_label(spec):18s}{row}")
            name = f"{dataset}_{spec_label(spec).replace('(', '_').rstrip(')')}.json"
            export_result(res, out_dir / name.replace("=", ""))
    print(f"\nwrote result files to {out_dir}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
