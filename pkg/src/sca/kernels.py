"""Kernel functions and Gram-matrix construction shared by estimation and maximization.

Three kernel families are supported: the compactly supported Epanechnikov
kernel used on projected inputs, a Gaussian kernel for real-valued outputs,
and a centered-cosine correlation kernel for binary multi-label outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial.distance import cdist, pdist


class KernelKind(Enum):
    EPANECHNIKOV = "epanechnikov"
    GAUSSIAN = "gaussian"
    LABEL_CORRELATION = "label_correlation"


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family plus its hyperparameters.

    ``width`` is the bandwidth sigma for Epanechnikov and Gaussian kernels
    (for the Gaussian it enters the exponent as ``2 * width``, i.e. it plays
    the role of a squared bandwidth). ``label_mean`` is the training-set
    label mean required by the correlation kernel and must never be computed
    from held-out data.
    """

    kind: KernelKind
    width: float | None = None
    label_mean: np.ndarray | None = None

    def __post_init__(self):
        if self.kind in (KernelKind.EPANECHNIKOV, KernelKind.GAUSSIAN):
            if self.width is None or not self.width > 0:
                raise ValueError(f"{self.kind.value} kernel requires width > 0, got {self.width}")
        elif self.kind is KernelKind.LABEL_CORRELATION:
            if self.label_mean is None:
                raise ValueError("label correlation kernel requires label_mean")
            mean = np.asarray(self.label_mean, dtype=float)
            if mean.ndim != 1:
                raise ValueError("label_mean must be a 1-d vector")
            object.__setattr__(self, "label_mean", mean)


def _check_pair(u, v):
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if u.shape != v.shape:
        raise ValueError(f"vectors have mismatched lengths {u.shape[0]} and {v.shape[0]}")
    return u, v


def epanechnikov(u, v, sigma: float) -> float:
    """Truncated negative quadratic kernel max(0, 1 - ||u-v||^2 / (2 sigma^2))."""
    u, v = _check_pair(u, v)
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    d2 = float(np.dot(u - v, u - v))
    return max(0.0, 1.0 - d2 / (2.0 * sigma**2))


def gaussian(u, v, sigma: float) -> float:
    """Gaussian kernel exp(-||u-v||^2 / (2 sigma)).

    The denominator is ``2 * sigma`` with sigma acting as a squared
    bandwidth; cross-validation grids select sigma on that scale directly.
    """
    u, v = _check_pair(u, v)
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    d2 = float(np.dot(u - v, u - v))
    return float(np.exp(-d2 / (2.0 * sigma)))


def label_correlation(y, y_other, mean) -> float:
    """Cosine similarity of mean-centered label vectors, in [-1, 1]."""
    y, y_other = _check_pair(y, y_other)
    mean = np.asarray(mean, dtype=float).ravel()
    if mean.shape != y.shape:
        raise ValueError("mean must have the same length as the label vectors")
    a = y - mean
    b = y_other - mean
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("degenerate label vector: centered norm is zero")
    return float(np.dot(a, b) / (na * nb))


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise ValueError("points must form an (n, d) matrix")
    return pts


def gram(points_a, points_b, spec: KernelSpec) -> np.ndarray:
    """Kernel matrix with entry (i, j) = k(points_a[i], points_b[j])."""
    a = _as_points(points_a)
    b = _as_points(points_b)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"column mismatch: {a.shape[1]} vs {b.shape[1]}")
    if spec.kind is KernelKind.EPANECHNIKOV:
        d2 = cdist(a, b, "sqeuclidean")
        return np.maximum(0.0, 1.0 - d2 / (2.0 * spec.width**2))
    if spec.kind is KernelKind.GAUSSIAN:
        d2 = cdist(a, b, "sqeuclidean")
        return np.exp(-d2 / (2.0 * spec.width))
    mean = spec.label_mean
    if mean.shape[0] != a.shape[1]:
        raise ValueError("label_mean length does not match label dimension")
    ca = a - mean
    cb = b - mean
    na = np.linalg.norm(ca, axis=1)
    nb = np.linalg.norm(cb, axis=1)
    if np.any(na == 0.0) or np.any(nb == 0.0):
        raise ValueError("degenerate label vector: centered norm is zero")
    return (ca @ cb.T) / np.outer(na, nb)


def median_pairwise_distance(points, sample_cap: int = 1000, seed: int = 0) -> float:
    """Median Euclidean distance over all pairs of (at most ``sample_cap``) rows.

    Rows are subsampled deterministically from ``seed`` when there are more
    than ``sample_cap`` of them, so the result is reproducible.
    """
    pts = _as_points(points)
    n = pts.shape[0]
    if n < 2:
        raise ValueError("need at least two rows")
    if sample_cap < 2:
        raise ValueError("sample_cap must be at least 2")
    if n > sample_cap:
        idx = np.sort(np.random.default_rng(seed).choice(n, size=sample_cap, replace=False))
        pts = pts[idx]
    dists = pdist(pts)
    if np.all(dists == 0.0):
        raise ValueError("all rows are identical; pairwise distances are degenerate")
    return float(np.median(dists))
