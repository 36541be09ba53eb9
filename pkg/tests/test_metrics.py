import numpy as np
import pytest

from sca.metrics import frobenius_subspace_error, multilabel_error, one_nn_predict


def random_stiefel(rng, m, d):
    q, r = np.linalg.qr(rng.standard_normal((d, m)))
    return (q * np.sign(np.diag(r))).T


class TestFrobeniusSubspaceError:
    def test_identical(self):
        W = np.eye(3)[:2]
        assert frobenius_subspace_error(W, W) == pytest.approx(0.0)

    def test_orthogonal_subspaces(self):
        e1 = np.array([[1.0, 0.0]])
        e2 = np.array([[0.0, 1.0]])
        assert frobenius_subspace_error(e1, e2) == pytest.approx(1.0)

    def test_45_degrees(self):
        theta = np.pi / 4
        W_hat = np.array([[np.cos(theta), np.sin(theta)]])
        W_star = np.array([[1.0, 0.0]])
        # direct evaluation of the defining formula at 45 degrees
        diff = W_hat.T @ W_hat - W_star.T @ W_star
        expected = np.linalg.norm(diff, "fro") / np.sqrt(2.0)
        assert expected == pytest.approx(np.sqrt(2.0) / 2.0)
        assert frobenius_subspace_error(W_hat, W_star) == pytest.approx(expected)

    def test_rotation_invariance_and_symmetry(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            d = int(rng.integers(2, 7))
            m = int(rng.integers(1, d))
            A = random_stiefel(rng, m, d)
            B = random_stiefel(rng, m, d)
            R = random_stiefel(rng, m, m)  # m x m orthogonal
            base = frobenius_subspace_error(A, B)
            assert frobenius_subspace_error(R @ A, B) == pytest.approx(base, abs=1e-10)
            assert frobenius_subspace_error(B, A) == pytest.approx(base, abs=1e-12)
            assert 0.0 <= base <= 1.0 + 1e-12

    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            frobenius_subspace_error(np.array([[1.0, 1.0]]), np.array([[1.0, 0.0]]))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            frobenius_subspace_error(np.eye(2), np.eye(3))


class TestMultilabelError:
    def test_identical(self):
        Y = np.array([[0, 1], [1, 0]])
        assert multilabel_error(Y, Y) == 0.0

    def test_all_flipped(self):
        Y = np.array([[0, 1], [1, 0]])
        assert multilabel_error(1 - Y, Y) == 1.0

    def test_one_cell(self):
        A = np.array([[0, 1], [1, 0]])
        B = np.array([[0, 1], [1, 1]])
        assert multilabel_error(A, B) == pytest.approx(0.25)

    def test_symmetric(self):
        rng = np.random.default_rng(1)
        A = rng.integers(0, 2, (10, 6))
        B = rng.integers(0, 2, (10, 6))
        assert multilabel_error(A, B) == multilabel_error(B, A)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            multilabel_error(np.zeros((2, 2)), np.zeros((2, 3)))


class TestOneNnPredict:
    def test_exact_match_returns_its_labels(self):
        Z_train = np.array([[0.0], [1.0], [2.0]])
        Y_train = np.array([[1, 0], [0, 1], [1, 1]])
        pred = one_nn_predict(Z_train, Y_train, np.array([[1.0]]))
        assert np.array_equal(pred, [[0, 1]])

    def test_single_training_sample(self):
        pred = one_nn_predict(np.array([[0.0, 0.0]]), np.array([[1, 0, 1]]),
                              np.random.default_rng(2).standard_normal((5, 2)))
        assert np.array_equal(pred, np.tile([1, 0, 1], (5, 1)))

    def test_matches_exhaustive_distances(self):
        rng = np.random.default_rng(3)
        Z_train = rng.standard_normal((3, 2))
        Y_train = rng.integers(0, 2, (3, 4))
        Z_test = rng.standard_normal((6, 2))
        pred = one_nn_predict(Z_train, Y_train, Z_test)
        for q in range(6):
            dists = [np.linalg.norm(Z_test[q] - row) for row in Z_train]
            assert np.array_equal(pred[q], Y_train[int(np.argmin(dists))])

    def test_tie_breaks_to_lowest_index(self):
        Z_train = np.array([[1.0], [-1.0]])
        Y_train = np.array([[1], [0]])
        pred = one_nn_predict(Z_train, Y_train, np.array([[0.0]]))
        assert pred[0, 0] == 1

    def test_empty_training_rejected(self):
        with pytest.raises(ValueError):
            one_nn_predict(np.zeros((0, 2)), np.zeros((0, 1)), np.zeros((1, 2)))
