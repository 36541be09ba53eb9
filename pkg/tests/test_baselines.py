import numpy as np
import pytest

from sca.baselines import SirConfig, sir_fit
from sca.datasets import SyntheticSpec, generate
from sca.metrics import frobenius_subspace_error


def test_config_validation():
    with pytest.raises(ValueError):
        SirConfig(m=0)
    with pytest.raises(ValueError):
        SirConfig(m=1, slices=1)


def test_linear_link_recovers_direction():
    errs = []
    for seed in range(5):
        X, Y, W_star = generate(SyntheticSpec("data1", 1000, seed=seed))
        P = sir_fit(X, Y, SirConfig(m=1))
        errs.append(frobenius_subspace_error(P.W, W_star))
    assert np.mean(errs) < 0.45


def test_symmetric_quadratic_link_fails():
    X, Y, W_star = generate(SyntheticSpec("data2", 1000, seed=0))
    P = sir_fit(X, Y, SirConfig(m=1))
    assert frobenius_subspace_error(P.W, W_star) > 0.2


def test_output_is_stiefel():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((200, 6))
    y = X @ rng.standard_normal(6) + 0.1 * rng.standard_normal(200)
    P = sir_fit(X, y, SirConfig(m=2))
    assert np.max(np.abs(P.W @ P.W.T - np.eye(2))) <= 1e-10


def test_constant_response_rejected():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((100, 3))
    with pytest.raises(ValueError):
        sir_fit(X, np.ones(100), SirConfig(m=1))


def test_singular_covariance_rejected():
    rng = np.random.default_rng(3)
    base = rng.standard_normal((80, 2))
    X = np.column_stack([base, base[:, 0]])  # exactly collinear
    y = rng.standard_normal(80)
    with pytest.raises(ValueError, match="singular"):
        sir_fit(X, y, SirConfig(m=1))


def test_too_few_samples_rejected():
    rng = np.random.default_rng(4)
    with pytest.raises(ValueError):
        sir_fit(rng.standard_normal((15, 2)), rng.standard_normal(15), SirConfig(m=1, slices=10))


def test_equivariance_under_linear_maps():
    X, Y, _ = generate(SyntheticSpec("data1", 1000, seed=5), noise_scale=0.0)
    rng = np.random.default_rng(5)
    A = np.eye(4) + 0.3 * rng.standard_normal((4, 4))
    W_x = sir_fit(X, Y, SirConfig(m=1)).W
    W_ax = sir_fit(X @ A.T, Y, SirConfig(m=1)).W
    mapped = W_ax @ A
    mapped /= np.linalg.norm(mapped)
    assert frobenius_subspace_error(mapped, W_x) <= 1e-6
