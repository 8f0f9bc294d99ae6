"""Bayesian projective-measurement attack: likelihoods, posteriors, success probabilities."""

import inspect
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpke import bayes
from qpke.bayes import (
    ImpossibleOutcomeError,
    MeasurementOutcome,
    PosteriorDistribution,
    bloch_estimate,
    bound_U,
    codeword_bound,
    codeword_success,
    evidence,
    information_gain,
    likelihood,
    mean_success,
    optimal_collective,
    outcome_prob_single,
    posterior,
    posterior_density,
    required_codeword_length,
    success_by_key,
    success_given_key,
    success_given_outcome,
)
from qpke.protocol import elementary_angle
from qpke.symspace import eigendecompose, holevo_bound_tight, prior_density, von_neumann_entropy


def uniform_posterior(T, n):
    size = 1 << n
    return PosteriorDistribution(np.full(size, 1.0 / size), MeasurementOutcome(0, 0), T, n)


def delta_posterior(k, T, n):
    p = np.zeros(1 << n)
    p[k] = 1.0
    return PosteriorDistribution(p, MeasurementOutcome(0, 0), T, n)


def test_outcome_prob_single_examples():
    assert outcome_prob_single("z", 0, 0, 3) == pytest.approx(1.0, abs=1e-15)
    assert outcome_prob_single("x", 0, 0, 3) == pytest.approx(0.5, abs=1e-15)
    assert outcome_prob_single("z", 0, 2, 2) == pytest.approx(0.0, abs=1e-15)


def test_outcome_probs_sum_to_one_exactly():
    for n in (1, 2, 4):
        for k in range(1 << n):
            for basis in ("z", "x"):
                p0 = outcome_prob_single(basis, 0, k, n)
                p1 = outcome_prob_single(basis, 1, k, n)
                assert p0 + p1 == 1.0
                assert 0.0 <= p0 <= 1.0


def test_outcome_prob_single_validation():
    with pytest.raises(ValueError):
        outcome_prob_single("y", 0, 0, 2)
    with pytest.raises(ValueError):
        outcome_prob_single("z", 2, 0, 2)
    with pytest.raises(ValueError):
        outcome_prob_single("z", 0, 4, 2)


def test_likelihood_certain_z_factor():
    # k = 0 at n = 1 gives "0" in the z basis with certainty, so only the
    # x-basis binomial factor remains
    assert likelihood(MeasurementOutcome(1, 0), 0, 1, 1) == pytest.approx(0.5, abs=1e-15)
    assert likelihood(MeasurementOutcome(1, 1), 0, 1, 1) == pytest.approx(0.5, abs=1e-15)


def test_likelihood_zero_on_impossible_count():
    # the k with angle pi never yields "0" in the z basis
    assert likelihood(MeasurementOutcome(2, 1), 2, 2, 2) == 0.0


def test_likelihood_normalization_exhaustive():
    T, n = 4, 3
    for k in range(1 << n):
        total = sum(
            likelihood(MeasurementOutcome(a, b), k, T, n)
            for a in range(T + 1)
            for b in range(T + 1)
        )
        assert total == pytest.approx(1.0, abs=1e-10)


def test_likelihood_log_space_path_matches_direct():
    # T above the log-space switch against a small-T product rescaled by hand
    T, n = 40, 3
    p0z, p0x = bayes._prob0_tables(n)
    for k in (0, 1, 5):
        out = MeasurementOutcome(17, 23)
        direct = (
            math.comb(T, out.t0z) * p0z[k] ** out.t0z * (1 - p0z[k]) ** (T - out.t0z)
            * math.comb(T, out.t0x) * p0x[k] ** out.t0x * (1 - p0x[k]) ** (T - out.t0x)
        )
        assert likelihood(out, k, T, n) == pytest.approx(direct, rel=1e-10)


def test_evidence_frozen_value():
    # independent hand sum: z factor is 1 for k=0 and 0 for k=1; x factor 1/2
    assert evidence(MeasurementOutcome(1, 0), 1, 1) == pytest.approx(0.25, abs=1e-15)


def test_evidence_grid_sums_to_one():
    T, n = 8, 10
    total = sum(
        evidence(MeasurementOutcome(a, b), T, n) for a in range(T + 1) for b in range(T + 1)
    )
    assert total == pytest.approx(1.0, abs=1e-12)


def test_evidence_reflection_symmetry():
    # k -> -k mirrors the state family about z, flipping only the x counts
    T, n = 5, 6
    for a in range(T + 1):
        for b in range(T + 1):
            left = evidence(MeasurementOutcome(a, b), T, n)
            right = evidence(MeasurementOutcome(a, T - b), T, n)
            assert left == pytest.approx(right, abs=1e-12)


def test_posterior_resolves_states_at_minimal_resolution():
    for t0x in (0, 1):
        post = posterior(MeasurementOutcome(1, t0x), 1, 1)
        assert post.probabilities == pytest.approx([1.0, 0.0], abs=1e-15)


def test_posterior_normalized_everywhere():
    T, n = 8, 10
    for a in range(T + 1):
        for b in range(T + 1):
            post = posterior(MeasurementOutcome(a, b), T, n)
            assert float(np.sum(post.probabilities)) == pytest.approx(1.0, abs=1e-12)


def test_posterior_impossible_outcome_raises():
    # at n = 1 the z outcomes are deterministic, so mixed counts cannot occur
    with pytest.raises(ImpossibleOutcomeError):
        posterior(MeasurementOutcome(1, 0), 2, 1)


def test_posterior_peaks_at_consistent_state():
    post = posterior(MeasurementOutcome(8, 4), 8, 10)
    assert int(np.argmax(post.probabilities)) == 0


def test_posteriors_average_back_to_uniform_prior():
    T, n = 3, 6
    size = 1 << n
    total = np.zeros(size)
    for a in range(T + 1):
        for b in range(T + 1):
            out = MeasurementOutcome(a, b)
            total += evidence(out, T, n) * posterior(out, T, n).probabilities
    assert np.allclose(total, 1.0 / size, atol=1e-10)


def test_information_gain_examples():
    assert information_gain(1, 1) == pytest.approx(1.0, abs=1e-12)
    assert information_gain(0, 5) == 0.0


def test_information_gain_within_bounds():
    n = 10
    for T in (1, 2, 4, 8):
        gain = information_gain(T, n)
        assert 0.0 <= gain <= n
        assert gain < holevo_bound_tight(2 * T)


def test_posterior_density_uniform_reduces_to_prior():
    tau, T, n = 3, 2, 4
    rho = posterior_density(tau, uniform_posterior(T, n))
    assert np.allclose(rho.matrix, prior_density(tau, n).matrix, atol=1e-14)


def test_posterior_density_delta_is_pure():
    rho = posterior_density(2, delta_posterior(3, 2, 3))
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-10)


def test_posterior_density_from_measurement_is_valid():
    post = posterior(MeasurementOutcome(1, 1), 2, 3)
    rho = posterior_density(2, post)
    assert np.trace(rho.matrix) == pytest.approx(1.0, abs=1e-12)
    assert eigendecompose(rho).eigenvalues.min() >= -1e-10


def test_bloch_estimate_examples():
    n = 4
    theta = elementary_angle(n)
    for k in (0, 3, 9):
        est = bloch_estimate(delta_posterior(k, 1, n))
        assert est.z == pytest.approx(math.cos(k * theta), abs=1e-12)
        assert est.x == pytest.approx(math.sin(k * theta), abs=1e-12)
        assert est.norm == pytest.approx(1.0, abs=1e-12)

    est = bloch_estimate(uniform_posterior(1, 5))
    assert est.norm < 1e-12

    p = np.zeros(1 << n)
    p[0] = p[1 << (n - 1)] = 0.5  # equal weight on two opposite states
    est = bloch_estimate(PosteriorDistribution(p, MeasurementOutcome(0, 0), 1, n))
    assert est.norm < 1e-12


def test_bloch_estimate_from_measurement_is_subunit():
    # a genuine posterior mixes several states, so the averaged vector shrinks
    est = bloch_estimate(posterior(MeasurementOutcome(2, 1), 2, 4))
    assert 0.0 < est.norm < 1.0


def test_success_given_outcome_examples():
    n = 4
    assert success_given_outcome(5, delta_posterior(5, 1, n)) == pytest.approx(1.0, abs=1e-12)
    opposite = (5 + (1 << (n - 1))) % (1 << n)
    assert success_given_outcome(5, delta_posterior(opposite, 1, n)) == pytest.approx(0.0, abs=1e-12)
    assert success_given_outcome(5, uniform_posterior(1, n)) == 0.5


def test_success_given_key_exact_at_minimal_resolution():
    for k in (0, 1):
        assert success_given_key(k, 1, 1) == pytest.approx(1.0, abs=1e-12)


def test_success_given_key_reflection_symmetry():
    T, n = 3, 6
    table = success_by_key(T, n)
    size = 1 << n
    for k in range(size):
        assert table[k] == pytest.approx(table[(size - k) % size], abs=1e-10)
    assert success_given_key(5, T, n) == pytest.approx(table[5], abs=1e-15)


def test_success_oscillation_shrinks_with_more_copies():
    spans = [float(np.ptp(success_by_key(T, 10))) for T in (2, 4, 8)]
    assert spans[0] > spans[1] > spans[2]


def test_mean_success_examples():
    assert mean_success(1, 1) == pytest.approx(1.0, abs=1e-12)
    assert mean_success(2, 10) <= 11.0 / 12.0
    for T in (2, 4, 8):
        assert mean_success(T, 10) <= bound_U(T) + 1e-9


def test_mean_success_below_collective_optimum():
    for T in (1, 2, 5):
        assert mean_success(T, 10) <= optimal_collective(T)


def test_bound_U_values():
    assert bound_U(2) == pytest.approx(11.0 / 12.0, abs=1e-15)
    assert bound_U(10) == pytest.approx(59.0 / 60.0, abs=1e-15)
    bounds = [bound_U(T) for T in range(2, 20)]
    assert all(a < b for a, b in zip(bounds, bounds[1:]))
    with pytest.raises(ValueError):
        bound_U(1)


def test_optimal_collective_values():
    assert optimal_collective(1) == pytest.approx(0.5 + math.sqrt(2) / 4, abs=1e-15)
    # frozen from a direct evaluation: 1/2 + (1 + sqrt(6)) / 8
    assert optimal_collective(2) == pytest.approx(0.9311862178478973, abs=1e-12)
    assert optimal_collective(2) > bound_U(2)


def test_optimal_collective_large_T_scaling():
    for T in (50, 100, 200):
        assert abs(optimal_collective(T) - (1.0 - 1.0 / (8.0 * T))) < 0.1 / T**2


def test_success_given_key_is_bit_independent_by_construction():
    # the estimate basis cannot depend on the encrypted bit: the operation
    # takes no bit argument at all
    assert list(inspect.signature(success_given_key).parameters) == ["k", "T", "n"]


@pytest.mark.parametrize("s", [1, 2, 5])
def test_codeword_success_trivial(s):
    assert codeword_success(1.0, s) == pytest.approx(1.0, abs=1e-15)
    assert codeword_success(0.5, s) == pytest.approx(0.5, abs=1e-15)


def test_codeword_success_frozen_example():
    # brute force over the 4 error patterns of s=2: (3/4)^2 + (1/4)^2 = 0.625
    assert codeword_success(0.75, 2) == pytest.approx(0.625, abs=1e-15)


def brute_force_parity_success(p, s):
    total = 0.0
    for pattern in range(1 << s):
        wrong = bin(pattern).count("1")
        if wrong % 2 == 0:
            total += (1.0 - p) ** wrong * p ** (s - wrong)
    return total


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0), st.integers(min_value=1, max_value=12))
def test_codeword_success_matches_brute_force_and_closed_form(p, s):
    value = codeword_success(p, s)
    assert value == pytest.approx(brute_force_parity_success(p, s), abs=1e-12)
    assert value == pytest.approx(0.5 + (2.0 * p - 1.0) ** s / 2.0, abs=1e-12)


def test_codeword_bound_values():
    assert codeword_bound(2, 1) == pytest.approx(11.0 / 12.0, abs=1e-15)
    assert codeword_bound(2, 4000) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError):
        codeword_bound(1, 3)


def test_codeword_bound_dominates_success():
    for T in (2, 4, 8):
        per_bit = mean_success(T, 10)
        for s in (1, 5, 20, 50):
            assert codeword_success(per_bit, s) <= codeword_bound(T, s) + 1e-9


def test_required_codeword_length_examples():
    assert required_codeword_length(0.5, 2) == (0, 0)
    assert required_codeword_length(2.0 ** -5, 2) == (16, 24)
    for exponent in (3, 5, 8):
        for T in (2, 4, 8):
            s_exact, s_simple = required_codeword_length(2.0 ** -exponent, T)
            assert s_simple >= s_exact
    with pytest.raises(ValueError):
        required_codeword_length(0.6, 2)
    with pytest.raises(ValueError):
        required_codeword_length(0.0, 2)
    with pytest.raises(ValueError):
        required_codeword_length(0.1, 1)


def test_module_resolution_cap():
    with pytest.raises(ValueError):
        information_gain(2, 15)
    with pytest.raises(ValueError):
        mean_success(2, 15)


def test_posterior_distribution_validation():
    with pytest.raises(ValueError):
        PosteriorDistribution(np.array([0.7, 0.7]), MeasurementOutcome(0, 0), 1, 1)
    with pytest.raises(ValueError):
        PosteriorDistribution(np.array([0.5, 0.5, 0.0]), MeasurementOutcome(0, 0), 1, 1)
