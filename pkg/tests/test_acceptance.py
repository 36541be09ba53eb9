"""Acceptance suite: every exit criterion, one printed PASS/FAIL line each.

The benchmark-backed criteria run 20 seeded trials per dataset at n=1000
(several minutes of single-core compute; threaded BLAS machines are much
faster). Set SCA_ACCEPT_TRIALS to smoke-test with fewer trials; the official
run uses the default.
"""

import os
import sys
import time

import numpy as np
import pytest

import sca
import sca.cli as cli
from sca import lsmi
from sca.core import ScaConfig, compute_d_matrix, initialize, maximize_trace
from sca.datasets import SyntheticSpec, generate
from sca.kernels import KernelKind, KernelSpec, epanechnikov, gaussian
from sca.metrics import frobenius_subspace_error, multilabel_error, one_nn_predict

N_BENCH = 1000
TRIALS = int(os.environ.get("SCA_ACCEPT_TRIALS", "20"))
BASE_SEED = 20
ERROR_TOLERANCES = {"data1": 0.15, "data2": 0.05, "data3": 0.15, "data4": 0.20}
STIEFEL_TOL = 1e-10

BENCH_CONFIG = dict(tol=1e-4, max_iters=12, max_centers=250)


def report(criterion, ok, detail):
    line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    print("\n" + line)
    if sys.stdout is not sys.__stdout__:  # bypass pytest capture so the
        print(line, file=sys.__stdout__)  # verdict lands in the run log too
    return ok


def random_stiefel(rng, m, d):
    q, r = np.linalg.qr(rng.standard_normal((d, m)))
    return (q * np.sign(np.diag(r))).T


@pytest.fixture(scope="module")
def bench():
    """Seeded benchmark trials shared by criteria 1-3 and 6."""
    results = {}
    max_gap = 0.0
    for dataset in ("data1", "data2", "data3", "data4"):
        methods = ("sca", "sca0", "sir") if dataset == "data2" else ("sca",)
        for method in methods:
            errors, seconds = [], []
            for trial in range(TRIALS):
                seed = BASE_SEED + trial
                X, Y, W_star = generate(SyntheticSpec(dataset, N_BENCH, seed=seed))
                start = time.perf_counter()
                if method == "sir":
                    projection = sca.sir_fit(X, Y, sca.SirConfig(m=W_star.shape[0]))
                else:
                    config = ScaConfig(m=W_star.shape[0], seed=seed, **BENCH_CONFIG)
                    if method == "sca0":
                        projection, _ = initialize(X, Y, config)
                    else:
                        projection, _ = sca.fit(X, Y, config)
                seconds.append(time.perf_counter() - start)
                W = projection.W
                max_gap = max(max_gap, np.max(np.abs(W @ W.T - np.eye(W.shape[0]))))
                errors.append(frobenius_subspace_error(W, W_star))
            results[dataset, method] = (np.asarray(errors), np.asarray(seconds))
    results["max_stiefel_gap"] = max_gap
    return results


def test_criterion_1_table_reproduction(bench):
    details = []
    ok = True
    for dataset, tol in ERROR_TOLERANCES.items():
        errors, _ = bench[dataset, "sca"]
        mean = float(np.mean(errors))
        details.append(f"{dataset} mean {mean:.3f} (tol {tol})")
        ok = ok and mean <= tol
    assert report("1 (benchmark table, SCA)", ok, "; ".join(details))


def test_data1_direction_recovery_rate(bench):
    # Companion invariant to criterion 1: the learned span contains the true
    # direction (error <= 0.15) in at least 18 of 20 seeded trials.
    errors, _ = bench["data1", "sca"]
    hits = int(np.sum(errors <= 0.15))
    need = int(np.ceil(0.9 * TRIALS))
    ok = hits >= need
    assert report(
        "1b (data1 per-trial recovery)",
        ok,
        f"{hits}/{TRIALS} trials with error <= 0.15 (need {need})",
    )


def test_criterion_2_initialization_quality(bench):
    errors0, _ = bench["data2", "sca0"]
    mean_err = float(np.mean(errors0))

    # The wall-clock comparison is meaningful only when both phases run the
    # same estimation configuration (the benchmark config deliberately caps
    # kernel centers during loop iterations, which shrinks the loop cost but
    # not the initialization's). Measure the ratio with library defaults
    # (no caps, per-iteration reselection) on a seed subsample.
    ratio_trials = max(2, TRIALS // 5)
    init_secs, full_secs = [], []
    for trial in range(ratio_trials):
        seed = BASE_SEED + trial
        X, Y, W_star = generate(SyntheticSpec("data2", N_BENCH, seed=seed))
        config = ScaConfig(m=1, seed=seed, tol=1e-4, max_iters=8)
        start = time.perf_counter()
        initialize(X, Y, config)
        init_secs.append(time.perf_counter() - start)
        start = time.perf_counter()
        sca.fit(X, Y, config)
        full_secs.append(time.perf_counter() - start)
    ratio = float(np.mean(init_secs) / np.mean(full_secs))

    ok = mean_err <= 0.15 and ratio <= 0.2
    assert report(
        "2 (zero-iteration solution)",
        ok,
        f"data2 mean error {mean_err:.3f} over {TRIALS} trials (tol 0.15); "
        f"wall-clock ratio {ratio:.3f} over {ratio_trials} trials (tol 0.2)",
    )


def test_criterion_3_beats_baseline(bench):
    sca_mean = float(np.mean(bench["data2", "sca"][0]))
    sir_mean = float(np.mean(bench["data2", "sir"][0]))
    ok = sca_mean < sir_mean and (sir_mean - sca_mean) > 0.1
    assert report(
        "3 (improvement over SIR)",
        ok,
        f"data2 SCA {sca_mean:.3f} vs SIR {sir_mean:.3f}, gap {sir_mean - sca_mean:.3f} (> 0.1)",
    )


def quadratic_term_oracle(Z, Y, Zc, Yc, sz, sy):
    n, b = Z.shape[0], Zc.shape[0]
    H = np.zeros((b, b))
    for l in range(b):
        for lp in range(b):
            acc = 0.0
            for i in range(n):
                for j in range(n):
                    acc += (
                        epanechnikov(Z[i], Zc[l], sz)
                        * epanechnikov(Z[i], Zc[lp], sz)
                        * gaussian(Y[j], Yc[l], sy)
                        * gaussian(Y[j], Yc[lp], sy)
                    )
            H[l, lp] = acc / n**2
    return H


def d_matrix_oracle(X, Y, alpha, W, sz, sy, m):
    n, d = X.shape
    D = np.zeros((d, d))
    for i in range(n):
        for l in range(n):
            diff = W @ (X[i] - X[l])
            if float(diff @ diff) / (2.0 * sz**2) < 1.0:
                xd = X[i] - X[l]
                D += alpha[l] * gaussian(Y[i], Y[l], sy) * (
                    np.eye(d) / m - np.outer(xd, xd) / (2.0 * sz**2)
                )
    return D / n


def test_criterion_4_oracle_equivalence():
    rng = np.random.default_rng(4)

    dev_h = 0.0
    for _ in range(50):
        n = int(rng.integers(5, 21))
        b = int(rng.integers(2, min(n, 10) + 1))
        Z = rng.standard_normal((n, 2))
        Y = rng.standard_normal((n, 1))
        idx = rng.choice(n, size=b, replace=False)
        sz, sy = float(rng.uniform(0.5, 2.0)), float(rng.uniform(0.3, 1.5))
        H = lsmi.compute_H_hat(
            Z, Y, (Z[idx], Y[idx]),
            KernelSpec(KernelKind.EPANECHNIKOV, width=sz),
            KernelSpec(KernelKind.GAUSSIAN, width=sy),
        )
        dev_h = max(dev_h, float(np.max(np.abs(H - quadratic_term_oracle(Z, Y, Z[idx], Y[idx], sz, sy)))))

    dev_d = 0.0
    for _ in range(50):
        n = int(rng.integers(6, 31))
        d = int(rng.integers(2, 5))
        m = int(rng.integers(1, d + 1))
        X = rng.standard_normal((n, d))
        Y = rng.standard_normal((n, 1))
        alpha = rng.standard_normal(n)
        W = random_stiefel(rng, m, d)
        sz, sy = float(rng.uniform(0.4, 1.5)), float(rng.uniform(0.3, 1.5))
        D = compute_d_matrix(X, Y, alpha, sca.Projection(W), sz,
                             KernelSpec(KernelKind.GAUSSIAN, width=sy), m=m)
        dev_d = max(dev_d, float(np.max(np.abs(D - d_matrix_oracle(X, Y, alpha, W, sz, sy, m)))))

    dev_s = 0.0
    for _ in range(50):
        b = int(rng.integers(2, 12))
        A = rng.standard_normal((b, b))
        H = A @ A.T
        h = rng.standard_normal(b)
        lam = float(rng.uniform(1e-3, 1.0))
        alpha = lsmi.solve_alpha(H, h, lam)
        ref = np.linalg.solve(H + lam * np.eye(b), h)
        dev_s = max(dev_s, float(np.max(np.abs(alpha - ref)) / max(1.0, np.linalg.norm(ref))))

    ok = dev_h <= 1e-10 and dev_d <= 1e-10 and dev_s <= 1e-10
    assert report(
        "4 (oracle equivalence)",
        ok,
        f"quadratic-term dev {dev_h:.2e}; D-matrix dev {dev_d:.2e}; solver dev {dev_s:.2e} (all <= 1e-10)",
    )


def test_criterion_5_eigen_maximizer_optimality():
    rng = np.random.default_rng(5)
    worst_gap = np.inf
    eig_dev = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 9))
        m = int(rng.integers(1, min(3, d) + 1))
        A = rng.standard_normal((d, d))
        D = (A + A.T) / 2.0
        P = maximize_trace(D, m)
        achieved = float(np.trace(P.W @ D @ P.W.T))
        top = float(np.linalg.eigvalsh(D)[-m:].sum())
        eig_dev = max(eig_dev, abs(achieved - top))
        samples = rng.standard_normal((10_000, d, m))
        Q = np.linalg.qr(samples)[0]
        traces = np.einsum("bij,ik,bkj->b", Q, D, Q)
        worst_gap = min(worst_gap, achieved - float(traces.max()))
    ok = eig_dev <= 1e-10 and worst_gap >= -1e-10
    assert report(
        "5 (eigen-maximizer optimality)",
        ok,
        f"trace vs top-m eigenvalue sum dev {eig_dev:.2e}; "
        f"min margin over 10k random Stiefel samples {worst_gap:.2e}",
    )


def test_criterion_6_invariant_suite(bench):
    rng = np.random.default_rng(6)

    gap = bench["max_stiefel_gap"]
    stiefel_ok = gap <= STIEFEL_TOL

    metric_ok = True
    for _ in range(100):
        d = int(rng.integers(2, 7))
        m = int(rng.integers(1, d))
        A = random_stiefel(rng, m, d)
        B = random_stiefel(rng, m, d)
        R = random_stiefel(rng, m, m)
        base = frobenius_subspace_error(A, B)
        metric_ok = metric_ok and abs(frobenius_subspace_error(R @ A, B) - base) <= 1e-10
        metric_ok = metric_ok and abs(frobenius_subspace_error(B, A) - base) <= 1e-12

    kernel_ok = True
    for _ in range(1000):
        dim = int(rng.integers(1, 5))
        u, v = rng.standard_normal(dim), rng.standard_normal(dim)
        s = float(rng.uniform(0.1, 3.0))
        e, g = epanechnikov(u, v, s), gaussian(u, v, s)
        kernel_ok = kernel_ok and e == epanechnikov(v, u, s) and 0.0 <= e <= 1.0
        kernel_ok = kernel_ok and g == gaussian(v, u, s) and 0.0 < g <= 1.0

    ok = stiefel_ok and metric_ok and kernel_ok
    assert report(
        "6 (invariant suite)",
        ok,
        f"max Stiefel gap over all emitted projections {gap:.2e} (<= 1e-10); "
        f"metric invariances {'ok' if metric_ok else 'violated'}; "
        f"kernel symmetry/range {'ok' if kernel_ok else 'violated'}",
    )


def test_criterion_6b_multilabel_smoke():
    wins = 0
    seeds = range(10)
    for seed in seeds:
        rng = np.random.default_rng(1000 + seed)
        d, m, c, n_train, n_test = 10, 2, 20, 150, 200
        directions = rng.standard_normal((2, c))
        offsets = 0.3 * rng.standard_normal(c)

        def labels(X):
            return (X[:, :2] @ directions + offsets > 0).astype(float)

        X_train = rng.standard_normal((n_train, d))
        X_test = rng.standard_normal((n_test, d))
        Y_train, Y_test = labels(X_train), labels(X_test)

        config = ScaConfig(m=m, seed=seed, tol=1e-4, max_iters=6,
                           y_kernel=KernelKind.LABEL_CORRELATION)
        projection, trace = sca.fit(X_train, Y_train, config)
        assert trace.iters >= 1  # fit completes

        pred = one_nn_predict(sca.transform(X_train, projection), Y_train,
                              sca.transform(X_test, projection))
        err_learned = multilabel_error(pred, Y_test)

        W_rand = random_stiefel(np.random.default_rng(5000 + seed), m, d)
        pred = one_nn_predict(X_train @ W_rand.T, Y_train, X_test @ W_rand.T)
        err_random = multilabel_error(pred, Y_test)
        wins += int(err_learned < err_random)

    ok = wins > len(seeds) // 2
    assert report(
        "6b (multi-label smoke test)",
        ok,
        f"learned projection beat a random one on {wins}/10 seeds (majority required)",
    )


def test_criterion_7_independence_sanity():
    indep, dep = [], []
    for seed in range(10):
        rng = np.random.default_rng(seed)
        Z = rng.standard_normal((200, 1))
        Y = rng.standard_normal((200, 1))
        _, smi, _ = lsmi.fit(Z, Y, seed=seed)
        indep.append(smi)
        _, smi, _ = lsmi.fit(Z, Z.copy(), seed=seed)
        dep.append(smi)
    mean_abs = float(np.mean(np.abs(indep)))
    mean_dep = float(np.mean(dep))
    ok = mean_abs < 0.1 and mean_dep > 0.2
    assert report(
        "7 (independence sanity)",
        ok,
        f"independent mean |smi| {mean_abs:.4f} (< 0.1); identical-variable mean smi "
        f"{mean_dep:.3f} (> 0.2)",
    )


def test_criterion_8_cli_determinism(tmp_path):
    x_path, y_path = tmp_path / "x.csv", tmp_path / "y.csv"
    assert cli.main(["gen-data", "--dataset", "data1", "--n", "150", "--seed", "3",
                     "--out-x", str(x_path), "--out-y", str(y_path)]) == 0

    models = []
    for tag in ("a", "b"):
        out = tmp_path / f"model_{tag}.json"
        assert cli.main(["fit", "--x", str(x_path), "--y", str(y_path), "--m", "1",
                         "--out", str(out), "--seed", "9", "--tol", "1e-3",
                         "--max-iters", "3"]) == 0
        models.append(out.read_bytes())

    trials = []
    for tag in ("a", "b"):
        out = tmp_path / f"trials_{tag}.csv"
        assert cli.main(["benchmark", "--datasets", "data1", "--methods", "sca0,sir",
                         "--n", "100", "--trials", "2", "--seed", "4",
                         "--out-csv", str(out)]) == 0
        trials.append(out.read_bytes())

    ok = models[0] == models[1] and trials[0] == trials[1]
    assert report(
        "8 (CLI determinism)",
        ok,
        "fit model files byte-identical: %s; benchmark per-trial CSVs byte-identical: %s"
        % (models[0] == models[1], trials[0] == trials[1]),
    )
