"""Evaluation metrics: subspace recovery error and multi-label 1-NN accuracy."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

_ORTHO_ATOL = 1e-6


def _check_stiefel(W: np.ndarray, name: str):
    gap = np.max(np.abs(W @ W.T - np.eye(W.shape[0])))
    if gap > _ORTHO_ATOL:
        raise ValueError(f"{name} does not have orthonormal rows (max deviation {gap:.3e})")


def frobenius_subspace_error(W_hat, W_star) -> float:
    """Projection-matrix distance (1/sqrt(2m)) ||W_hat^T W_hat - W_star^T W_star||_F.

    Takes values in [0, 1]; zero exactly when the row spaces coincide. Both
    arguments must be orthonormal-row matrices of the same shape.
    """
    W_hat = np.asarray(W_hat, dtype=float)
    W_star = np.asarray(W_star, dtype=float)
    if W_hat.ndim != 2 or W_hat.shape != W_star.shape:
        raise ValueError(f"shape mismatch: {W_hat.shape} vs {W_star.shape}")
    _check_stiefel(W_hat, "W_hat")
    _check_stiefel(W_star, "W_star")
    m = W_hat.shape[0]
    diff = W_hat.T @ W_hat - W_star.T @ W_star
    return float(np.linalg.norm(diff, "fro") / np.sqrt(2.0 * m))


def multilabel_error(Y_hat, Y_true) -> float:
    """Fraction of label cells on which the two binary matrices disagree."""
    Y_hat = np.asarray(Y_hat)
    Y_true = np.asarray(Y_true)
    if Y_hat.shape != Y_true.shape:
        raise ValueError(f"shape mismatch: {Y_hat.shape} vs {Y_true.shape}")
    return float(np.mean(Y_hat != Y_true))


def one_nn_predict(Z_train, Y_train, Z_test) -> np.ndarray:
    """Assign each test row the labels of its Euclidean-nearest training row.

    Distance ties resolve to the lowest training index.
    """
    Z_train = np.atleast_2d(np.asarray(Z_train, dtype=float))
    Z_test = np.atleast_2d(np.asarray(Z_test, dtype=float))
    Y_train = np.asarray(Y_train)
    if Z_train.shape[0] == 0:
        raise ValueError("training set is empty")
    if Y_train.shape[0] != Z_train.shape[0]:
        raise ValueError("Z_train and Y_train must have the same number of rows")
    nearest = np.argmin(cdist(Z_test, Z_train), axis=1)
    return Y_train[nearest]
