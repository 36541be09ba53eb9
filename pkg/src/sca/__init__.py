"""Sufficient component analysis: supervised linear dimension reduction.

The package learns an orthonormal projection that maximizes a squared-loss
mutual information estimate between projected inputs and outputs. Both the
dependence estimate (a least-squares density-ratio fit) and its maximization
(a symmetric eigenproblem) are analytic, so fitting needs no gradient steps.
"""

from .baselines import SirConfig, sir_fit
from .core import (
    FitTrace,
    Projection,
    ScaConfig,
    compute_d_matrix,
    fit,
    initialize,
    maximize_trace,
    transform,
)
from .datasets import SyntheticSpec, generate
from .kernels import (
    KernelKind,
    KernelSpec,
    epanechnikov,
    gaussian,
    gram,
    label_correlation,
    median_pairwise_distance,
)
from .lsmi import CvReport, DensityRatioModel, HyperGrid
from .metrics import frobenius_subspace_error, multilabel_error, one_nn_predict

__version__ = "0.1.0"

__all__ = [
    "CvReport",
    "DensityRatioModel",
    "FitTrace",
    "HyperGrid",
    "KernelKind",
    "KernelSpec",
    "Projection",
    "ScaConfig",
    "SirConfig",
    "SyntheticSpec",
    "compute_d_matrix",
    "epanechnikov",
    "fit",
    "frobenius_subspace_error",
    "gaussian",
    "generate",
    "gram",
    "initialize",
    "label_correlation",
    "maximize_trace",
    "median_pairwise_distance",
    "multilabel_error",
    "one_nn_predict",
    "sir_fit",
    "transform",
]
