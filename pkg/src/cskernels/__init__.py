"""Coherent-state kernel methods: hypergeometric kernels, an SMO-trained
soft-margin SVM, synthetic benchmark datasets, an experiment harness, and
feature-space geometry diagnostics."""

from .datasets import Dataset, flip_labels, load_csv, make_circles, make_moons, save_csv, split
from .experiments import (
    BoundaryGrid,
    ExperimentConfig,
    ExperimentResult,
    boundary_grid,
    cross_val_accuracy,
    export_result,
    run_experiment,
)
from .geometry import CoherentProfile, NlcsProfile, curvature_curve, ricci_scalar
from .kernels import (
    GeneralNlcsKernel,
    GramMatrix,
    NlcsKernel,
    RbfKernel,
    SqueezedKernel,
    cross_matrix,
    gram,
    kernel_eval,
    min_eigenvalue,
)
from .specfun import hyp0f3, hyp0f3_derivatives
from .svm import SvmModel, TrainingReport, decision_many, predict_many, train_smo

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "flip_labels",
    "load_csv",
    "make_circles",
    "make_moons",
    "save_csv",
    "split",
    "BoundaryGrid",
    "ExperimentConfig",
    "ExperimentResult",
    "boundary_grid",
    "cross_val_accuracy",
    "export_result",
    "run_experiment",
    "CoherentProfile",
    "NlcsProfile",
    "curvature_curve",
    "ricci_scalar",
    "GeneralNlcsKernel",
    "GramMatrix",
    "NlcsKernel",
    "RbfKernel",
    "SqueezedKernel",
    "cross_matrix",
    "gram",
    "kernel_eval",
    "min_eigenvalue",
    "hyp0f3",
    "hyp0f3_derivatives",
    "SvmModel",
    "TrainingReport",
    "decision_many",
    "predict_many",
    "train_smo",
    "__version__",
]
