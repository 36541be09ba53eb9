"""Sufficient component analysis: the alternating estimation/maximization loop.

The algorithm searches for an orthonormal-row projection W that maximizes a
squared-loss mutual information estimate between z = W x and the outputs.
With the Epanechnikov kernel on z the estimate becomes a quadratic form
0.5 tr(W D W^T) - 0.5, where D is assembled from the fitted ratio
coefficients and pairwise input differences inside the kernel support.
Freezing D at the previous iterate turns each maximization step into a
symmetric eigenproblem, so every iteration is analytic: fit the ratio model,
rebuild D, take its top eigenvectors, repeat until the estimate stops
improving.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist

from . import lsmi
from .kernels import KernelKind, KernelSpec, gram, median_pairwise_distance
from .lsmi import DensityRatioModel, HyperGrid, _as_matrix

STIEFEL_ATOL = 1e-10


@dataclass(frozen=True)
class Projection:
    """An m x d transformation matrix with orthonormal rows (W W^T = I_m)."""

    W: np.ndarray

    def __post_init__(self):
        W = np.array(self.W, dtype=float)
        if W.ndim != 2:
            raise ValueError("W must be a 2-d matrix")
        m, d = W.shape
        if m > d:
            raise ValueError(f"reduced dimension {m} exceeds input dimension {d}")
        gap = np.max(np.abs(W @ W.T - np.eye(m)))
        if gap > STIEFEL_ATOL:
            raise ValueError(f"rows are not orthonormal (max deviation {gap:.3e})")
        W.flags.writeable = False
        object.__setattr__(self, "W", W)

    @property
    def m(self) -> int:
        return self.W.shape[0]

    @property
    def d(self) -> int:
        return self.W.shape[1]


@dataclass(frozen=True)
class ScaConfig:
    """Settings for the alternating fit.

    Kernel-width candidates are multiplicative scales applied to the median
    pairwise distance of whatever space is being fitted (inputs during
    initialization, current projections during iterations), so the grid
    re-anchors as the projection evolves. ``max_centers`` caps the number of
    kernel centers used by the ratio model during loop iterations; None keeps
    every sample. ``init_max_centers`` is the separate cap for the
    initialization fit, which runs in the full input space where the
    compactly supported kernel needs dense centers (a cap that is harmless on
    one- or two-dimensional projections can starve it there).
    """

    m: int
    tol: float = 1e-6
    max_iters: int = 100
    sigma_scales: tuple[float, ...] = lsmi.DEFAULT_SIGMA_SCALES
    lambda_candidates: tuple[float, ...] = lsmi.DEFAULT_LAMBDAS
    folds: int = lsmi.DEFAULT_FOLDS
    reselect_each_iter: bool = True
    seed: int = 0
    y_kernel: KernelKind = KernelKind.GAUSSIAN
    max_centers: int | None = None
    init_max_centers: int | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass(frozen=True)
class FitTrace:
    """Per-iteration record of the alternating fit.

    ``smi_per_iter[t]`` is the dependence estimate for the projection held at
    the start of iteration t+1; ``best_iter`` indexes the estimate belonging
    to the returned projection. Iterations whose D matrix collapsed to a
    multiple of the identity (no kernel support beyond self-pairs) are listed
    in ``degenerate_iters`` and keep the previous projection.
    """

    smi_per_iter: tuple[float, ...]
    converged: bool
    iters: int
    selected_hypers_per_iter: tuple[tuple, ...]
    degenerate_iters: tuple[int, ...] = ()
    best_iter: int | None = None

    def __post_init__(self):
        if self.iters != len(self.smi_per_iter):
            raise ValueError("iters must equal the number of recorded estimates")


def transform(X, projection: Projection) -> np.ndarray:
    """Project samples: returns X W^T with one row per sample."""
    X = _as_matrix(X)
    if X.shape[1] != projection.d:
        raise ValueError(f"X has {X.shape[1]} columns but the projection expects {projection.d}")
    return X @ projection.W.T


def _d_matrix(X, Y, alpha, Z, m: int, sigma_z: float, kernel_y: KernelSpec,
              center_index: np.ndarray | None):
    """Assemble D plus a flag for whether any non-self pair fell in support.

    The pair weights C[i, l] = alpha_l L(y_i, y_l) are zeroed outside the
    Epanechnikov support (strict inequality), after which the weighted sum of
    difference outer products expands into four small Gram terms.
    """
    n, d = X.shape
    if center_index is None:
        Xc, Yc, Zc = X, Y, Z
    else:
        Xc, Yc, Zc = X[center_index], Y[center_index], Z[center_index]
    alpha = np.asarray(alpha, dtype=float).ravel()
    if alpha.shape[0] != Xc.shape[0]:
        raise ValueError("alpha must hold one coefficient per center")

    D2 = cdist(Z, Zc, "sqeuclidean")
    support = D2 < 2.0 * sigma_z**2
    has_offdiag = bool(np.any(support & (D2 > 0.0)))

    L = gram(Y, Yc, kernel_y)
    C = np.where(support, L * alpha[None, :], 0.0)

    total = C.sum()
    row_w = C.sum(axis=1)
    col_w = C.sum(axis=0)
    cross = X.T @ C @ Xc
    outer_sum = (X.T @ (X * row_w[:, None])) - cross - cross.T + (Xc.T @ (Xc * col_w[:, None]))

    D = ((total / m) * np.eye(d) - outer_sum / (2.0 * sigma_z**2)) / n
    return D, has_offdiag


def compute_d_matrix(X, Y, alpha, W: Projection, sigma_z: float, kernel_y: KernelSpec,
                     m: int | None = None, center_index=None) -> np.ndarray:
    """Quadratic-form matrix D of the dependence estimate 0.5 tr(W D W^T) - 0.5.

    ``alpha`` holds one ratio coefficient per center (all samples unless
    ``center_index`` selects a subset); the Epanechnikov support indicator is
    evaluated on the projections under ``W``. ``m`` defaults to W's row count
    and only scales the identity component.
    """
    X, Y = _as_matrix(X), _as_matrix(Y)
    if not sigma_z > 0:
        raise ValueError("sigma_z must be positive")
    if X.shape[1] != W.d:
        raise ValueError("X columns must match the projection dimension")
    ci = None if center_index is None else np.asarray(center_index)
    Z = X @ W.W.T
    D, _ = _d_matrix(X, Y, alpha, Z, m if m is not None else W.m, sigma_z, kernel_y, ci)
    return D


def _descending_eigvectors(S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a symmetric matrix, deterministically ordered.

    Columns are sign-fixed so each eigenvector's largest-magnitude entry is
    positive; ties in eigenvalue are broken lexicographically on the vector
    entries so the ordering does not depend on LAPACK internals.
    """
    vals, vecs = scipy.linalg.eigh(S)
    for j in range(vecs.shape[1]):
        k = int(np.argmax(np.abs(vecs[:, j])))
        if vecs[k, j] < 0:
            vecs[:, j] = -vecs[:, j]
    order = sorted(range(vals.shape[0]), key=lambda j: (-vals[j], tuple(vecs[:, j])))
    return vals[order], vecs[:, order]


def maximize_trace(D, m: int) -> Projection:
    """Orthonormal rows maximizing tr(W D W^T): the top-m eigenvectors of D.

    D is symmetrized as (D + D^T) / 2 before decomposition. The achieved
    trace equals the sum of the m largest eigenvalues.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError("D must be square")
    if not np.all(np.isfinite(D)):
        raise ValueError("D contains non-finite entries")
    if not 1 <= m <= D.shape[0]:
        raise ValueError(f"m must be in [1, {D.shape[0]}]")
    S = (D + D.T) / 2.0
    _, vecs = _descending_eigvectors(S)
    return Projection(vecs[:, :m].T)


def _anchored_grid(points, Y_sigmas, config: ScaConfig) -> HyperGrid:
    med = median_pairwise_distance(points, seed=config.seed)
    return HyperGrid(
        sigma_z_candidates=tuple(med * s for s in config.sigma_scales),
        sigma_y_candidates=Y_sigmas,
        lambda_candidates=config.lambda_candidates,
        folds=config.folds,
    )


def _y_sigma_candidates(Y, config: ScaConfig) -> tuple[float, ...]:
    # The output kernel grid never changes across iterations; the correlation
    # kernel carries no width so a placeholder keeps the grid valid.
    if config.y_kernel is KernelKind.LABEL_CORRELATION:
        return (1.0,)
    med = median_pairwise_distance(Y, seed=config.seed)
    return tuple(med * s for s in config.sigma_scales)


def initialize(X, Y, config: ScaConfig) -> tuple[Projection, DensityRatioModel]:
    """Dependence maximization without dimension reduction.

    Fits the ratio model in the original input space (Epanechnikov kernel on
    x, width cross-validated) and takes the top-m eigenvectors of the
    resulting D matrix. This is the zero-iteration solution and the starting
    point of :func:`fit`.
    """
    X, Y = _as_matrix(X), _as_matrix(Y)
    n, d = X.shape
    if n < 2:
        raise ValueError("need at least two samples")
    grid = _anchored_grid(X, _y_sigma_candidates(Y, config), config)
    model, _, report = lsmi.fit(X, Y, grid, seed=config.seed,
                                y_kernel=config.y_kernel,
                                max_centers=config.init_max_centers)
    sigma_x = report.best[0]
    D0, _ = _d_matrix(X, Y, np.maximum(model.alpha, 0.0), X, config.m, sigma_x,
                      model.kernel_y, model.center_index)
    S = (D0 + D0.T) / 2.0
    _, vecs = _descending_eigvectors(S)
    return Projection(vecs[:, : config.m].T), model


def fit(X, Y, config: ScaConfig) -> tuple[Projection, FitTrace]:
    """Alternate dependence estimation and maximization from the analytic start.

    Each iteration projects with the current W, fits the ratio model on
    (z, y) (re-selecting hyperparameters unless ``reselect_each_iter`` is
    off, in which case the first iteration's selection is reused), rebuilds D
    with the current iterate frozen inside the indicator and coefficients,
    and replaces W by the top eigenvectors of D. Coefficients are clamped at
    zero inside the D build (a density ratio is nonnegative; sign-indefinite
    pair weights let sampling noise in the orthogonal directions dominate the
    eigenproblem). The loop stops when the dependence estimate improves by
    less than ``tol`` or after ``max_iters`` iterations; because the frozen-D
    surrogate is not guaranteed to ascend, the projection with the highest
    recorded estimate is returned.
    """
    X, Y = _as_matrix(X), _as_matrix(Y)
    n, d = X.shape
    if Y.shape[0] != n:
        raise ValueError("X and Y must have the same number of rows")
    if config.m > d:
        raise ValueError(f"m={config.m} exceeds input dimension {d}")
    if n < config.folds:
        raise ValueError("need at least as many samples as CV folds")

    W_init, _ = initialize(X, Y, config)
    if config.m == d:
        # Nothing to reduce: any orthonormal basis spans the whole space.
        return W_init, FitTrace((), True, 0, (), (), None)

    y_sigmas = _y_sigma_candidates(Y, config)
    current = W_init
    smis: list[float] = []
    hypers: list[tuple] = []
    degenerate: list[int] = []
    evaluated: list[Projection] = []
    converged = False

    for it in range(1, config.max_iters + 1):
        Z = X @ current.W.T
        if config.reselect_each_iter or not hypers:
            grid = _anchored_grid(Z, y_sigmas, config)
            model, smi, report = lsmi.fit(Z, Y, grid, seed=config.seed,
                                          y_kernel=config.y_kernel,
                                          max_centers=config.max_centers)
            selected = report.best
        else:
            selected = hypers[0]
            model, smi = lsmi.fit_with_hypers(Z, Y, *selected,
                                              y_kernel=config.y_kernel,
                                              max_centers=config.max_centers,
                                              seed=config.seed)
        smis.append(smi)
        hypers.append(selected)
        evaluated.append(current)

        # Absolute improvement: the surrogate is non-monotone, so a signed
        # test would confuse a transient dip mid-climb with convergence.
        if len(smis) >= 2 and abs(smis[-1] - smis[-2]) < config.tol:
            converged = True
            break

        sigma_z = selected[0]
        D, has_offdiag = _d_matrix(X, Y, np.maximum(model.alpha, 0.0), Z, config.m,
                                   sigma_z, model.kernel_y, model.center_index)
        if not has_offdiag:
            # D is a multiple of the identity; keep the current projection
            # rather than jumping to an arbitrary eigenbasis.
            degenerate.append(it)
        else:
            current = maximize_trace(D, config.m)

    best = int(np.argmax(smis))
    trace = FitTrace(
        smi_per_iter=tuple(smis),
        converged=converged,
        iters=len(smis),
        selected_hypers_per_iter=tuple(hypers),
        degenerate_iters=tuple(degenerate),
        best_iter=best,
    )
    return evaluated[best], trace
