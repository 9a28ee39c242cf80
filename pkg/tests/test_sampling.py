import numpy as np
import pytest
from scipy.stats import binom, chisquare

from l1conc.errors import ValidationError
from l1conc.sampling import (
    CountVector,
    SimplexVector,
    StreamKey,
    empirical_frequency,
    sample_dirichlet,
    sample_dirichlet_batch,
    sample_multinomial,
    sample_multinomial_batch,
    sample_standard_normal_vector,
)

KEY = StreamKey(20240817, 0)


class TestSimplexVector:
    def test_valid(self):
        v = SimplexVector(np.array([0.25, 0.25, 0.5]))
        assert len(v) == 3

    def test_negative_entry_rejected(self):
        with pytest.raises(ValidationError):
            SimplexVector(np.array([1.2, -0.2]))

    def test_bad_sum_rejected(self):
        with pytest.raises(ValidationError):
            SimplexVector(np.array([0.5, 0.4]))

    def test_uniform(self):
        u = SimplexVector.uniform(4)
        assert np.allclose(u.entries, 0.25)


class TestCountVector:
    def test_sum_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            CountVector(np.array([1, 2]), 4)

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            CountVector(np.array([-1, 5]), 4)


class TestMultinomial:
    def test_degenerate(self):
        for i in range(5):
            c = sample_multinomial([1.0, 0.0], 5, KEY.child(i))
            assert list(c.counts) == [5, 0]

    def test_zero_trials(self):
        c = sample_multinomial([0.5, 0.5], 0, KEY)
        assert list(c.counts) == [0, 0]

    def test_counts_sum_to_n(self):
        rng = np.random.default_rng(3)
        for i in range(20):
            S = rng.integers(2, 8)
            p = rng.dirichlet(np.ones(S))
            n = int(rng.integers(0, 500))
            c = sample_multinomial(p, n, KEY.child(i))
            assert int(c.counts.sum()) == n

    def test_deterministic(self):
        a = sample_multinomial([0.2, 0.3, 0.5], 100, KEY)
        b = sample_multinomial([0.2, 0.3, 0.5], 100, KEY)
        assert np.array_equal(a.counts, b.counts)

    def test_batch_matches_invariants(self):
        batch = sample_multinomial_batch([0.1, 0.4, 0.5], 37, 1000, KEY)
        assert batch.shape == (1000, 3)
        assert np.all(batch.sum(axis=1) == 37)

    def test_fair_coin_frequency(self):
        # P(counts = (1,1)) for n=2, p=(1/2,1/2) is exactly 1/2
        N = 20_000
        batch = sample_multinomial_batch([0.5, 0.5], 2, N, KEY.child(7))
        freq = np.mean(batch[:, 0] == 1)
        se = np.sqrt(0.25 / N)
        assert abs(freq - 0.5) <= 3 * se

    def test_marginal_chisquare(self):
        # counts[0] ~ Binomial(n, p0); goodness of fit at significance 1e-3
        n, p0, N = 10, 0.3, 100_000
        batch = sample_multinomial_batch([p0, 1 - p0], n, N, KEY.child(11))
        observed = np.bincount(batch[:, 0], minlength=n + 1)
        expected = binom.pmf(np.arange(n + 1), n, p0) * N
        _, pvalue = chisquare(observed, expected)
        assert pvalue > 1e-3

    def test_invalid_simplex_rejected(self):
        with pytest.raises(ValidationError):
            sample_multinomial([0.7, 0.7], 10, KEY)
        with pytest.raises(ValidationError):
            sample_multinomial([0.5, 0.5], -1, KEY)


class TestEmpiricalFrequency:
    def test_trivial(self):
        f = empirical_frequency(CountVector(np.array([5, 0]), 5))
        assert np.allclose(f.entries, [1.0, 0.0])
        f = empirical_frequency(CountVector(np.array([1, 1, 2]), 4))
        assert np.allclose(f.entries, [0.25, 0.25, 0.5])

    def test_zero_n_rejected(self):
        with pytest.raises(ValidationError):
            empirical_frequency(CountVector(np.array([0, 0]), 0))


class TestDirichlet:
    def test_single_entry_is_point(self):
        for i in range(3):
            v = sample_dirichlet([2.5], KEY.child(i))
            assert v.entries[0] == 1.0

    def test_uniform_alpha_mean(self):
        # Dirichlet(1,1) first coordinate is Uniform(0,1), mean 1/2
        N = 20_000
        x = sample_dirichlet_batch([1.0, 1.0], N, KEY.child(4))
        se = np.sqrt(1.0 / 12.0 / N)
        assert abs(x[:, 0].mean() - 0.5) <= 3 * se

    def test_scaled_uniform_alpha_mean(self):
        # alpha = (n/S, ..., n/S) with S=2, n=10: each mean is 1/2
        N = 20_000
        x = sample_dirichlet_batch([5.0, 5.0], N, KEY.child(5))
        se = x[:, 0].std() / np.sqrt(N)
        assert abs(x[:, 0].mean() - 0.5) <= 3 * se

    def test_output_on_simplex(self):
        x = sample_dirichlet_batch([0.01, 0.5, 3.0], 500, KEY.child(6))
        assert np.all(x >= 0)
        assert np.allclose(x.sum(axis=1), 1.0, atol=1e-12)

    def test_bad_alpha_rejected(self):
        with pytest.raises(ValidationError):
            sample_dirichlet([1.0, 0.0], KEY)
        with pytest.raises(ValidationError):
            sample_dirichlet([-1.0], KEY)


class TestStandardNormal:
    def test_deterministic(self):
        a = sample_standard_normal_vector(3, KEY)
        b = sample_standard_normal_vector(3, KEY)
        assert np.array_equal(a, b)

    def test_moments(self):
        N = 10**6
        x = sample_standard_normal_vector(N, KEY.child(9))
        assert abs(x.mean()) <= 3.0 / np.sqrt(N)
        assert abs(x.var(ddof=1) - 1.0) <= 0.01

    def test_zero_dim_rejected(self):
        with pytest.raises(ValidationError):
            sample_standard_normal_vector(0, KEY)


class TestStreamKey:
    def test_distinct_streams_differ(self):
        a = sample_standard_normal_vector(8, KEY.child(0))
        b = sample_standard_normal_vector(8, KEY.child(1))
        assert not np.array_equal(a, b)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValidationError):
            StreamKey(-1, 0)
        with pytest.raises(ValidationError):
            StreamKey(0, 2**64)
