import itertools

import numpy as np
import pytest

from bayesmix.errors import ConfigurationError, NumericalError, PreconditionError
from bayesmix.models import Dataset, MixtureState, RandomK, make_prior, mixture_log_likelihood
from bayesmix.models.prior import DynamicGamma, FixedGamma, FixedK
from bayesmix.pipeline.init import init_from_kmeans
from bayesmix.pipeline.steps import (
    compact_filled,
    log_posterior_K,
    permute_labels_random,
    sample_component_covariance,
    sample_component_mean,
    step_add_empty,
    step_classify,
    step_component_params,
    step_hyper,
    step_sample_K,
    step_weights,
)


def _make_prior_1d(k_prior=None, gamma_spec=None):
    return make_prior(
        b0=np.zeros(1),
        B0=np.eye(1) * 4.0,
        S=np.ones(1),
        c=2.5,
        phi=0.75,
        k_prior=k_prior,
        gamma_spec=gamma_spec,
    )


def _make_state(counts: list[int], r: int = 1) -> MixtureState:
    K = len(counts)
    S = np.repeat(np.arange(K), counts)
    return MixtureState.from_assignments(
        eta=np.full(K, 1.0 / K),
        mu=np.arange(K, dtype=float)[:, None] * np.ones((K, r)),
        Sigma=np.stack([np.eye(r)] * K),
        C0=np.eye(r),
        S=S,
    )


# --- Initialization ---


def test_init_single_component(blobs, rng):
    prior = make_prior(np.zeros(2), np.eye(2), np.array([1.0, 2.0]), k_prior=FixedK(1))
    state = init_from_kmeans(blobs, 1, prior, rng)
    np.testing.assert_allclose(state.mu[0], blobs.y.mean(axis=0))
    assert np.all(state.S == 0)
    np.testing.assert_allclose(state.eta, [1.0])


def test_init_covariances_equal_phi_s(blobs, rng):
    S = np.array([1.0, 2.0])
    prior = make_prior(np.zeros(2), np.eye(2), S, phi=0.75, k_prior=FixedK(3))
    state = init_from_kmeans(blobs, 3, prior, rng)
    for k in range(3):
        np.testing.assert_allclose(state.Sigma[k], 0.75 * np.diag(S))
    np.testing.assert_allclose(state.eta, np.full(3, 1 / 3))
    np.testing.assert_allclose(state.C0, prior.C0_init)
    assert state.K_plus == 3


# --- Classification ---


def test_classify_single_component(rng):
    data = Dataset(y=np.linspace(-1, 1, 5))
    state = _make_state([5])
    step_classify(data, state, rng)
    assert np.all(state.S == 0)
    np.testing.assert_array_equal(state.counts, [5])


def test_classify_identical_components_split_evenly(rng):
    data = Dataset(y=np.zeros(20_000))
    state = _make_state([10_000, 10_000])
    state.mu[:] = 0.0
    step_classify(data, state, rng)
    assert np.mean(state.S == 0) == pytest.approx(0.5, abs=0.02)
    assert state.counts.sum() == 20_000


def test_classify_prefers_close_tight_component(rng):
    data = Dataset(y=np.zeros(200))
    state = _make_state([100, 100])
    state.mu[:, 0] = [0.0, 10.0]
    state.Sigma[:] = 0.01
    step_classify(data, state, rng)
    assert np.all(state.S == 0)
    assert state.K_plus == 1


def test_classify_reports_underflowing_observation(rng):
    data = Dataset(y=np.array([0.0, 1e200, 0.5]))
    state = _make_state([1, 2])
    with pytest.raises(NumericalError) as exc:
        step_classify(data, state, rng)
    assert exc.value.observation == 1


# --- Weights ---


def test_weights_single_component(rng):
    state = _make_state([4])
    step_weights(state, 1.0, rng)
    np.testing.assert_array_equal(state.eta, [1.0])


def test_weights_prior_recovery_on_empty_components(rng):
    state = _make_state([0, 0])
    draws = [step_weights(state, 1.0, rng).eta[0] for _ in range(40_000)]
    assert np.mean(draws) == pytest.approx(0.5, abs=0.01)


def test_weights_posterior_mean(rng):
    state = _make_state([90, 10])
    draws = [step_weights(state, 1.0, rng).eta[0] for _ in range(20_000)]
    assert np.mean(draws) == pytest.approx(91 / 102, abs=0.005)


# --- Component parameters ---


def test_empty_component_mean_is_prior_draw(rng):
    b0 = np.array([1.0, -1.0])
    B0 = np.array([[2.0, 0.3], [0.3, 1.0]])
    draws = sample_component_mean(
        np.empty((0, 2)), np.eye(2), b0, np.linalg.inv(B0), rng, size=100_000
    )
    np.testing.assert_allclose(draws.mean(axis=0), b0, atol=0.02)
    np.testing.assert_allclose(np.cov(draws.T), B0, atol=0.05)


def test_component_mean_matches_conjugate_posterior(rng):
    y = np.array([[4.2], [5.1], [3.8], [4.9], [5.5]])
    sigma2, b0, B0 = 0.8, 0.0, 10.0
    B_k = 1.0 / (1.0 / B0 + len(y) / sigma2)
    b_k = B_k * (b0 / B0 + y.sum() / sigma2)
    draws = sample_component_mean(
        y, np.array([[sigma2]]), np.array([b0]), np.array([[1.0 / B0]]), rng, size=100_000
    )
    assert draws.mean() == pytest.approx(b_k, rel=0.02)
    assert draws.var() == pytest.approx(B_k, rel=0.02)


def test_component_covariance_matches_inverse_wishart_mean(rng):
    y = np.array([[4.2], [5.1], [3.8], [4.9], [5.5]])
    mu = np.array([4.7])
    c0, C0 = 3.5, np.array([[1.2]])
    draws = sample_component_covariance(y, mu, c0, C0, rng, size=100_000)
    c_k = c0 + len(y) / 2
    C_k = C0 + 0.5 * ((y - mu).T @ (y - mu))
    expected = 2 * C_k / (2 * c_k - 1 - 1)
    assert draws.mean() == pytest.approx(expected[0, 0], rel=0.03)


def test_component_params_touch_only_selected(rng):
    data = Dataset(y=np.array([0.0, 0.2, 5.0, 5.1]))
    state = _make_state([2, 2, 0])
    prior = _make_prior_1d(k_prior=FixedK(3))
    before = state.copy()
    step_component_params(data, state, prior, rng, components=np.array([1]))
    np.testing.assert_array_equal(state.mu[[0, 2]], before.mu[[0, 2]])
    np.testing.assert_array_equal(state.Sigma[[0, 2]], before.Sigma[[0, 2]])
    assert state.mu[1, 0] != before.mu[1, 0]


# --- Hyperparameter ---


def test_hyper_without_filled_components_fails(rng):
    state = _make_state([0, 0])
    with pytest.raises(PreconditionError):
        step_hyper(state, _make_prior_1d(), rng, filled_only=True)


def test_hyper_mean_single_component(rng):
    prior = _make_prior_1d()
    state = _make_state([3])
    draws = [step_hyper(state, prior, rng).C0[0, 0] for _ in range(20_000)]
    expected = (prior.g0 + prior.c0) / (prior.G0[0, 0] + 1.0)
    assert np.mean(draws) == pytest.approx(expected, rel=0.03)


def test_hyper_filled_only_matches_when_all_filled():
    prior = _make_prior_1d()
    a = step_hyper(_make_state([2, 3]), prior, np.random.default_rng(1), filled_only=True)
    b = step_hyper(_make_state([2, 3]), prior, np.random.default_rng(1), filled_only=False)
    np.testing.assert_array_equal(a.C0, b.C0)


# --- Number of components ---


def test_sample_k_single_observation_recovers_prior():
    k_prior = RandomK(1.0, 4.0, 3.0, k_max=100)
    prior = _make_prior_1d(k_prior=k_prior, gamma_spec=FixedGamma(1.0))
    Ks, log_p = log_posterior_K(np.array([1]), prior)
    posterior = np.exp(log_p - log_p.max())
    posterior /= posterior.sum()
    prior_pmf = np.exp(k_prior.log_pmf(Ks))
    np.testing.assert_allclose(posterior, prior_pmf / prior_pmf.sum(), rtol=1e-9)


def test_sample_k_single_observation_draws(rng):
    k_prior = RandomK(1.0, 4.0, 3.0, k_max=100)
    prior = _make_prior_1d(k_prior=k_prior, gamma_spec=FixedGamma(1.0))
    state = _make_state([1])
    draws = np.array([step_sample_K(state, prior, rng) for _ in range(50_000)])
    truncated = np.exp(k_prior.log_pmf(np.arange(1, 101))).sum()
    assert np.mean(draws == 1) == pytest.approx((4 / 7) / truncated, abs=0.01)
    assert draws.min() >= 1 and draws.max() <= 100


def test_sample_k_dynamic_gamma_single_observation():
    k_prior = RandomK(1.0, 4.0, 3.0, k_max=100)
    prior = _make_prior_1d(k_prior=k_prior, gamma_spec=DynamicGamma(0.5))
    Ks, log_p = log_posterior_K(np.array([1]), prior)
    posterior = np.exp(log_p - log_p.max())
    posterior /= posterior.sum()
    expected = Ks * np.exp(k_prior.log_pmf(Ks))
    np.testing.assert_allclose(posterior, expected / expected.sum(), rtol=1e-9)


def test_sample_k_dynamic_mfm_has_heavy_tail(rng):
    prior = _make_prior_1d(k_prior=RandomK(1.0, 4.0, 3.0), gamma_spec=DynamicGamma(0.5))
    counts = np.array([28, 33, 84])
    Ks, log_p = log_posterior_K(counts, prior)
    posterior = np.exp(log_p - log_p.max())
    posterior /= posterior.sum()
    assert Ks[0] == 3
    assert posterior[Ks > 20].sum() > 0.01
    state = _make_state([28, 33, 84])
    draws = [step_sample_K(state, prior, rng) for _ in range(2000)]
    assert max(draws) > 20
    assert min(draws) >= 3


def test_sample_k_requires_room_above_k_plus(rng):
    prior = _make_prior_1d(k_prior=RandomK(k_max=2))
    with pytest.raises(ConfigurationError):
        step_sample_K(_make_state([1, 1, 1]), prior, rng)


def test_sample_k_requires_random_k_prior(rng):
    with pytest.raises(ConfigurationError):
        step_sample_K(_make_state([1, 1]), _make_prior_1d(k_prior=FixedK(2)), rng)


# --- Compaction and empty components ---


def test_compact_filled_keeps_order():
    state = _make_state([5, 0, 3, 0, 2])
    compact_filled(state)
    assert state.K == 3
    np.testing.assert_array_equal(state.counts, [5, 3, 2])
    np.testing.assert_array_equal(state.mu[:, 0], [0.0, 2.0, 4.0])
    np.testing.assert_array_equal(np.bincount(state.S), [5, 3, 2])


def test_add_empty_noop_when_k_equals_k_plus(rng):
    state = _make_state([2, 2])
    before = state.copy()
    step_add_empty(state, 2, _make_prior_1d(), rng)
    np.testing.assert_array_equal(state.mu, before.mu)
    assert state.K == 2


def test_add_empty_components(rng):
    prior = _make_prior_1d()
    state = _make_state([2, 2])
    state.C0 = np.array([[1.5]])
    step_add_empty(state, 20_002, prior, rng)
    assert state.K == 20_002
    assert state.K_plus == 2
    np.testing.assert_array_equal(state.counts[2:], 0)
    expected = 2 * 1.5 / (2 * prior.c0 - 1 - 1)
    assert state.Sigma[2:, 0, 0].mean() == pytest.approx(expected, rel=0.03)


def test_add_empty_covariances_centred_on_c0(rng):
    prior = make_prior(b0=np.zeros(2), B0=np.eye(2) * 4.0, S=np.ones(2), c=2.5, phi=0.75)
    state = _make_state([3, 3], r=2)
    state.C0 = np.array([[1.5, 0.4], [0.4, 0.8]])
    step_add_empty(state, 20_002, prior, rng)
    expected = 2 * state.C0 / (2 * prior.c0 - prior.r - 1)
    mean = state.Sigma[2:].mean(axis=0)
    np.testing.assert_allclose(np.diag(mean), np.diag(expected), rtol=0.03)
    assert mean[0, 1] == pytest.approx(expected[0, 1], abs=0.02)


def test_add_empty_cannot_shrink(rng):
    with pytest.raises(PreconditionError):
        step_add_empty(_make_state([1, 1, 1]), 2, _make_prior_1d(), rng)


# --- Random permutation ---


def test_permutation_single_component(rng):
    state = _make_state([3])
    before = state.copy()
    permute_labels_random(state, rng)
    np.testing.assert_array_equal(state.S, before.S)
    np.testing.assert_array_equal(state.mu, before.mu)


def test_permutation_keeps_likelihood(rng):
    data = Dataset(y=np.array([0.0, 0.3, 1.1, 2.0, 2.2]))
    state = _make_state([2, 1, 2])
    state.eta = np.array([0.2, 0.3, 0.5])
    before = mixture_log_likelihood(data, state)
    members_before = [set(np.flatnonzero(state.S == k)) for k in range(3)]
    for _ in range(20):
        permute_labels_random(state, rng)
        assert mixture_log_likelihood(data, state) == before
    members_after = [set(np.flatnonzero(state.S == k)) for k in range(3)]
    assert sorted(map(sorted, members_after)) == sorted(map(sorted, members_before))
    np.testing.assert_array_equal(np.bincount(state.S, minlength=3), state.counts)


def test_permutation_uniform(rng):
    state = _make_state([1, 1, 1])
    state.eta = np.array([0.2, 0.3, 0.5])
    seen = {perm: 0 for perm in itertools.permutations([0.2, 0.3, 0.5])}
    for _ in range(10_000):
        trial = state.copy()
        permute_labels_random(trial, rng)
        seen[tuple(trial.eta)] += 1
    for count in seen.values():
        assert count / 10_000 == pytest.approx(1 / 6, abs=0.02)
