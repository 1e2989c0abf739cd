import numpy as np
import pytest

import wavescale.fbm as fbm_mod
from wavescale import (
    ConfigurationError,
    EstimationError,
    FbmSpec,
    fbm_from_fgn,
    fgn_autocovariance,
    fgn_sample,
    run_estimator_benchmark,
)


# ------------------------------------------------------------------- spec

def test_spec_validation():
    with pytest.raises(ConfigurationError):
        FbmSpec(hurst=0.0, length=64, seed=1)
    with pytest.raises(ConfigurationError):
        FbmSpec(hurst=1.0, length=64, seed=1)
    with pytest.raises(ConfigurationError):
        FbmSpec(hurst=0.5, length=48, seed=1)
    with pytest.raises(ConfigurationError):
        FbmSpec(hurst=0.5, length=4, seed=1)


# -------------------------------------------------------------- generator

def test_h_half_autocovariance_vanishes():
    k = np.arange(1, 20)
    np.testing.assert_allclose(fgn_autocovariance(0.5, k), 0.0, atol=1e-12)
    assert fgn_autocovariance(0.5, np.array([0]))[0] == pytest.approx(1.0)


def test_same_seed_same_vector():
    spec = FbmSpec(hurst=0.7, length=256, seed=123)
    np.testing.assert_array_equal(fgn_sample(spec), fgn_sample(spec))
    other = fgn_sample(FbmSpec(hurst=0.7, length=256, seed=124))
    assert not np.array_equal(fgn_sample(spec), other)


@pytest.mark.parametrize("hurst", [0.2, 0.5, 0.8])
def test_sample_autocovariance_matches_closed_form(hurst):
    # Monte-Carlo oracle against the closed-form autocovariance: each lag
    # estimate must land within 3 standard errors
    n = 64
    n_draws = 10_000
    rng = np.random.default_rng(2024)
    draws = np.array([fbm_mod._fgn(hurst, n, rng) for _ in range(n_draws)])
    gamma = fgn_autocovariance(hurst, np.arange(6))
    for lag in range(6):
        prods = (draws[:, : n - lag] * draws[:, lag:]).mean(axis=1)
        m = prods.mean()
        se = prods.std(ddof=1) / np.sqrt(n_draws)
        assert abs(m - gamma[lag]) < 3.0 * se, (lag, m, gamma[lag], se)


def test_cholesky_fallback_matches_covariance():
    rng = np.random.default_rng(7)
    n = 32
    hurst = 0.75
    draws = np.array([fbm_mod._sample_cholesky(hurst, n, rng)
                      for _ in range(6000)])
    gamma = fgn_autocovariance(hurst, np.arange(3))
    for lag in range(3):
        prods = (draws[:, : n - lag] * draws[:, lag:]).mean(axis=1)
        se = prods.std(ddof=1) / np.sqrt(len(prods))
        assert abs(prods.mean() - gamma[lag]) < 3.5 * se


# ------------------------------------------------------------------- fbm

def test_fbm_is_cumulative_sum():
    np.testing.assert_allclose(fbm_from_fgn([1.0, 1.0, 1.0]), [1.0, 2.0, 3.0])
    assert fbm_from_fgn([]).size == 0


def test_fbm_increments_roundtrip():
    noise = fgn_sample(FbmSpec(hurst=0.3, length=128, seed=5))
    path = fbm_from_fgn(noise)
    # cumulative-sum rounding keeps this at float precision, not bit-exact
    np.testing.assert_allclose(np.diff(path), noise[1:], atol=1e-12)
    assert path[0] == noise[0]


@pytest.mark.parametrize("hurst", [0.3, 0.7])
def test_increment_variance_self_similarity(hurst):
    # Var(B[t+l] - B[t]) = l**(2H); a log-log fit over l in {1,2,4,8}
    # averaged across draws recovers H
    n = 256
    lags = np.array([1, 2, 4, 8])
    acc = np.zeros(len(lags))
    n_draws = 200
    for rep in range(n_draws):
        path = fbm_from_fgn(fgn_sample(FbmSpec(hurst, n, 300 + rep)))
        for i, lag in enumerate(lags):
            inc = path[lag:] - path[:-lag]
            acc[i] += np.mean(inc ** 2)
    acc /= n_draws
    slope = np.polyfit(np.log2(lags), np.log2(acc), 1)[0]
    assert slope / 2.0 == pytest.approx(hurst, abs=0.1)


# -------------------------------------------------------------- benchmark

def test_benchmark_shape_and_determinism():
    kwargs = dict(h_grid=[0.3, 0.7], n_reps=25, length=64,
                  methods=("dwt", "wang", "jones"), master_seed=99)
    r1 = run_estimator_benchmark(**kwargs)
    r2 = run_estimator_benchmark(**kwargs)
    assert r1 == r2
    assert len(r1.entries) == 6
    cell = r1.cell(0.3, "wang")
    assert cell.n == 25 and cell.failures == 0
    assert cell.std >= 0.0


def test_benchmark_thread_count_does_not_change_results():
    kwargs = dict(h_grid=[0.5], n_reps=16, length=64, methods=("dwt",),
                  master_seed=7)
    r1 = run_estimator_benchmark(threads=1, **kwargs)
    r4 = run_estimator_benchmark(threads=4, **kwargs)
    assert r1 == r4


def test_benchmark_counts_failures(monkeypatch):
    calls = {"n": 0}
    real = fbm_mod.scaling_descriptor

    def flaky(method, tree, levels=None):
        calls["n"] += 1
        if calls["n"] % 3 == 0:
            raise EstimationError("synthetic failure")
        return real(method, tree, levels)

    monkeypatch.setattr(fbm_mod, "scaling_descriptor", flaky)
    report = run_estimator_benchmark([0.5], n_reps=12, length=64,
                                     methods=("dwt",), master_seed=1)
    cell = report.cell(0.5, "dwt")
    assert cell.failures == 4
    assert cell.n == 8


def test_benchmark_rejects_bad_arguments():
    with pytest.raises(ConfigurationError):
        run_estimator_benchmark([0.5], n_reps=0, length=64)
    with pytest.raises(ConfigurationError):
        run_estimator_benchmark([0.5], n_reps=5, length=64, methods=("rs",))
    with pytest.raises(ConfigurationError):
        run_estimator_benchmark([0.5], n_reps=5, length=60)


def test_benchmark_csv_bytes_deterministic(tmp_path):
    report = run_estimator_benchmark([0.4], n_reps=10, length=64,
                                     methods=("dwt", "jones"), master_seed=3)
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    report.write_csv(p1)
    report.write_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()
    header = p1.read_text().splitlines()[0]
    assert header == "H,method,mean,std,n,failures"
