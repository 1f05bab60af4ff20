import numpy as np
import pytest

from aopt_subdata.simgen import (
    CaseSpec,
    TrueModelSpec,
    covariance_sigma1,
    covariance_sigma2,
    gen_covariates,
    gen_response,
    gen_true_model,
    stream,
)


def test_covariances_p2_coincide():
    expect = np.array([[1.0, 0.5], [0.5, 1.0]])
    np.testing.assert_array_equal(covariance_sigma1(2), expect)
    np.testing.assert_array_equal(covariance_sigma2(2), expect)


def test_covariances_p3():
    assert covariance_sigma1(3)[0, 2] == 0.25
    assert covariance_sigma2(3)[0, 2] == 0.5


@pytest.mark.parametrize("p", [1, 4, 7, 12])
def test_covariance_diag_and_pd(p):
    for S in (covariance_sigma1(p), covariance_sigma2(p)):
        np.testing.assert_array_equal(np.diag(S), 1.0)
        np.testing.assert_array_equal(S, S.T)
        assert np.all(np.linalg.eigvalsh(S) > 0)


def test_case1_covariance():
    X = gen_covariates(CaseSpec(1, 50_000, 3, seed=0))
    assert np.max(np.abs(np.cov(X, rowvar=False) - covariance_sigma1(3))) <= 0.05


def test_case2_covariance():
    X = gen_covariates(CaseSpec(2, 50_000, 3, seed=0))
    assert np.max(np.abs(np.cov(X, rowvar=False) - covariance_sigma2(3))) <= 0.05


def test_case3_mixture_covariance():
    X = gen_covariates(CaseSpec(3, 50_000, 3, seed=0))
    mix = 0.5 * (covariance_sigma1(3) + covariance_sigma2(3))
    assert np.max(np.abs(np.cov(X, rowvar=False) - mix)) <= 0.05


@pytest.mark.parametrize("case", [1, 2, 3, 4, 5])
def test_centered_cases_mean(case):
    X = gen_covariates(CaseSpec(case, 50_000, seed=1))
    assert np.max(np.abs(X.mean(axis=0))) <= 0.05


def test_case6_positive_lognormal_mean():
    X = gen_covariates(CaseSpec(6, 50_000, seed=2))
    assert np.all(X > 0)
    assert np.max(np.abs(X.mean(axis=0) - np.exp(0.5))) <= 0.1


def test_heavy_tails():
    def median_kurtosis(case):
        X = gen_covariates(CaseSpec(case, 50_000, seed=3))[:, 0]
        batches = X.reshape(50, 1000)
        z = (batches - batches.mean(axis=1, keepdims=True)) / batches.std(axis=1, keepdims=True)
        return np.median((z**4).mean(axis=1))

    assert median_kurtosis(4) > median_kurtosis(1)
    assert median_kurtosis(5) > median_kurtosis(2)


def test_covariates_reproducible():
    a = gen_covariates(CaseSpec(4, 300, seed=(5, 2)))
    b = gen_covariates(CaseSpec(4, 300, seed=(5, 2)))
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, gen_covariates(CaseSpec(4, 300, seed=(5, 3))))


def test_bad_case():
    with pytest.raises(ValueError):
        CaseSpec(9, 10)


@pytest.mark.parametrize("seed", [0, 1, 17, (3, 4, 5)])
def test_true_model_ranges(seed):
    m = gen_true_model(seed)
    assert np.all((m.beta[:2] >= 0.5) & (m.beta[:2] <= 1))
    assert np.all((m.beta[2:4] >= 0.05) & (m.beta[2:4] <= 0.1))
    np.testing.assert_array_equal(m.beta[4:], 0.0)
    assert m.active_set == (0, 1, 2, 3)
    assert m.beta0 == 0.25 and m.sigma == 1.0
    np.testing.assert_array_equal(gen_true_model(seed).beta, m.beta)


def test_response_noiseless():
    X = np.random.default_rng(0).normal(size=(20, 7))
    spec = TrueModelSpec(gen_true_model(0).beta, sigma=0.0)
    y, mu = gen_response(X, spec, 0)
    np.testing.assert_array_equal(y, mu)


def test_response_constant_mean():
    X = np.random.default_rng(0).normal(size=(20, 7))
    _, mu = gen_response(X, TrueModelSpec(np.zeros(7)), 0)
    np.testing.assert_array_equal(mu, 0.25)


def test_noise_variance():
    X = np.zeros((100_000, 7))
    y, mu = gen_response(X, gen_true_model(1), 1)
    assert abs(np.var(y - mu) - 1.0) <= 0.05


def test_seed_isolation():
    seed = (1, 2, 3)
    X1 = gen_covariates(CaseSpec(1, 50, seed=seed))
    # drawing slopes and noise does not touch the covariate stream
    gen_true_model(seed)
    gen_response(X1, gen_true_model(seed), seed)
    np.testing.assert_array_equal(gen_covariates(CaseSpec(1, 50, seed=seed)), X1)
    a = stream(seed, "noise").random(5)
    b = stream(seed, "covariates").random(5)
    assert not np.array_equal(a, b)
