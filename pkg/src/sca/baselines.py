"""Sliced inverse regression, a classical comparator for the benchmarks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import Projection, _descending_eigvectors
from .lsmi import _as_matrix

_EIG_FLOOR = 1e-12


@dataclass(frozen=True)
class SirConfig:
    m: int
    slices: int = 10

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.slices < 2:
            raise ValueError("need at least 2 slices")


def _inverse_sqrt_cov(X: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    cov = X.T @ X / n
    vals, vecs = scipy.linalg.eigh(cov)
    if vals.min() <= _EIG_FLOOR:
        raise ValueError(
            "sample covariance is numerically singular; regularize the inputs "
            "or drop collinear features"
        )
    return (vecs / np.sqrt(vals)) @ vecs.T


def sir_fit(X, y, cfg: SirConfig) -> Projection:
    """Estimate the central subspace by slicing the response.

    Standardizes the inputs, groups samples into equal-frequency slices by
    response order (the last slice absorbs any remainder), eigendecomposes
    the proportion-weighted outer products of slice means, and maps the top
    directions back to the original coordinates.
    """
    X = _as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    n, d = X.shape
    if y.shape[0] != n:
        raise ValueError("X and y must have the same number of rows")
    if cfg.m > d:
        raise ValueError(f"m={cfg.m} exceeds input dimension {d}")
    if n < 2 * cfg.slices:
        raise ValueError("need at least two samples per slice")
    if np.all(y == y[0]):
        raise ValueError("response is constant, so all slice means coincide and "
                         "the between-slice covariance vanishes")

    Xc = X - X.mean(axis=0)
    inv_sqrt = _inverse_sqrt_cov(Xc)
    X_std = Xc @ inv_sqrt

    order = np.argsort(y, kind="stable")
    base = n // cfg.slices
    M = np.zeros((d, d))
    for s in range(cfg.slices):
        start = s * base
        stop = (s + 1) * base if s < cfg.slices - 1 else n
        idx = order[start:stop]
        mean = X_std[idx].mean(axis=0)
        M += (idx.size / n) * np.outer(mean, mean)

    vals, vecs = _descending_eigvectors(M)
    if vals[0] <= _EIG_FLOOR:
        raise ValueError("between-slice covariance vanished (is the response constant?)")

    directions = vecs[:, : cfg.m].T @ inv_sqrt
    # Back-transformed rows lose orthonormality; restore it with a sign-fixed QR.
    q, r = np.linalg.qr(directions.T)
    q = q * np.sign(np.diag(r))
    return Projection(q.T)
