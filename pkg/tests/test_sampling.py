import numpy as np
import pytest

from spikelab.core import ParameterError, ScParams, WigParams
from spikelab.sampling import (
    SeedStream,
    sample_goe,
    sample_sc,
    sample_sparse_signal,
    sample_wig,
)
from spikelab.verify import ks_normality


class TestSeedStream:
    def test_reproducible(self):
        a = SeedStream(123, (4, 5)).generator().standard_normal(100)
        b = SeedStream(123, (4, 5)).generator().standard_normal(100)
        np.testing.assert_array_equal(a, b)

    def test_distinct_paths_distinct_draws(self):
        a = SeedStream(123).child(0).generator().standard_normal(100)
        b = SeedStream(123).child(1).generator().standard_normal(100)
        assert not np.array_equal(a, b)

    def test_child_extends_path(self):
        s = SeedStream(7).child(1).child(2, 3)
        assert s.path == (1, 2, 3)

    def test_sampler_determinism(self):
        p = ScParams(d=6, k=2, theta=0.4, n=12)
        za = sample_sc(p, SeedStream(99, (1,))).data
        zb = sample_sc(p, SeedStream(99, (1,))).data
        np.testing.assert_array_equal(za, zb)


class TestSparseSignal:
    def test_full_support(self):
        sig = sample_sparse_signal(4, 4, SeedStream(0))
        np.testing.assert_array_equal(sig.support, [0, 1, 2, 3])
        assert set(np.abs(sig.vector())) == {0.5}

    def test_scalar_signal(self):
        values = {sample_sparse_signal(1, 1, SeedStream(0, (i,))).vector()[0] for i in range(20)}
        assert values == {-1.0, 1.0}

    def test_unit_norm_and_sparsity(self):
        for i in range(50):
            sig = sample_sparse_signal(40, 7, SeedStream(3, (i,)))
            v = sig.vector()
            assert np.count_nonzero(v) == 7
            assert abs(np.linalg.norm(v) - 1.0) <= 1e-12

    def test_support_frequencies(self):
        # Each index lands in the support w.p. k/d = 0.1.
        d, k, trials = 100, 10, 10000
        counts = np.zeros(d)
        for i in range(trials):
            sig = sample_sparse_signal(d, k, SeedStream(11, (i,)))
            counts[sig.support] += 1
        freq = counts / trials
        bound = 3.0 * np.sqrt(0.1 * 0.9 / trials)
        # Bonferroni across d frequencies: allow 4.2 sigma instead of 3.
        assert np.all(np.abs(freq - 0.1) <= bound * 4.2 / 3.0)

    def test_domain_error(self):
        with pytest.raises(ParameterError):
            sample_sparse_signal(3, 4, SeedStream(0))


class TestGoe:
    def test_symmetry_exact(self):
        w = sample_goe(17, SeedStream(5))
        np.testing.assert_array_equal(w, w.T)

    def test_scalar_variance_is_two(self):
        vals = np.array([sample_goe(1, SeedStream(8, (i,)))[0, 0] for i in range(20000)])
        se = np.sqrt(2.0) * 2.0 / np.sqrt(len(vals))  # sd of the variance estimate
        assert abs(vals.var() - 2.0) <= 3.0 * se

    def test_offdiag_moments(self):
        draws = np.array([sample_goe(2, SeedStream(9, (i,))) for i in range(20000)])
        y12 = draws[:, 0, 1]
        y11 = draws[:, 0, 0]
        n = len(y12)
        assert abs(y12.var() - 1.0) <= 3.0 * np.sqrt(2.0 / n)
        corr = np.corrcoef(y12, y11)[0, 1]
        assert abs(corr) <= 3.0 / np.sqrt(n)


class TestSampleSc:
    def test_null_is_standard_normal(self):
        z = sample_sc(ScParams(d=100, k=10, theta=0.0, n=1000), SeedStream(21)).data
        report = ks_normality(z.ravel(), 0.0, 1.0, level=0.01)
        assert report.passed

    def test_conditional_column_shift(self):
        # d=2, k=1, theta=4: the spiked column has conditional mean 2 g.
        p = ScParams(d=2, k=1, theta=4.0, n=3)
        pooled = []
        unshifted = []
        for i in range(3000):
            s = sample_sc(p, SeedStream(33, (i,)))
            j = s.truth.u.support[0]
            sign = s.truth.u.signs[0]
            pooled.extend(s.data[:, j] - 2.0 * sign * s.truth.g)
            unshifted.extend(s.data[:, 1 - j])
        pooled = np.asarray(pooled)
        unshifted = np.asarray(unshifted)
        assert abs(pooled.mean()) <= 3.0 / np.sqrt(pooled.size)
        assert abs(unshifted.mean()) <= 3.0 / np.sqrt(unshifted.size)

    def test_wishart_mean_on_support(self):
        # E[(1/n) Z^T Z] = I + theta u u^T, so support diagonal entries of
        # the centered covariance average theta/k.
        p = ScParams(d=50, k=5, theta=0.5, n=500)
        vals = []
        for i in range(400):
            s = sample_sc(p, SeedStream(44, (i,)))
            cov = s.data.T @ s.data / p.n - np.eye(p.d)
            vals.extend(np.diagonal(cov)[s.truth.u.support])
        vals = np.asarray(vals)
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean() - 0.1) <= 3.0 * se

    def test_fixed_spike_norm(self):
        p = ScParams(d=10, k=3, theta=0.2, n=64)
        s = sample_sc(p, SeedStream(55), fixed_spike_norm=True)
        assert abs(np.dot(s.truth.g, s.truth.g) - p.n) <= 1e-9 * p.n


class TestSampleWig:
    def test_null_matches_goe_marginals(self):
        p = WigParams(d=24, k=4, lam=0.0)
        draws = np.array([sample_wig(p, SeedStream(66, (i,))).data for i in range(500)])
        iu, ju = np.triu_indices(24, k=1)
        assert ks_normality(draws[:, iu, ju].ravel(), 0.0, 1.0, level=0.01).passed
        assert ks_normality(draws[:, np.arange(24), np.arange(24)].ravel(), 0.0, 2.0, level=0.01).passed

    def test_planted_entry_mean(self):
        # d=2, k=2, lambda=10: E[Y_12] = 10 u_1 u_2 = +-5.
        p = WigParams(d=2, k=2, lam=10.0)
        signed = []
        for i in range(5000):
            s = sample_wig(p, SeedStream(77, (i,)))
            uv = s.truth.u.vector()
            signed.append(s.data[0, 1] * np.sign(uv[0] * uv[1]))
        signed = np.asarray(signed)
        se = signed.std(ddof=1) / np.sqrt(signed.size)
        assert abs(signed.mean() - 5.0) <= 3.0 * se

    def test_symmetry_exact(self):
        s = sample_wig(WigParams(d=9, k=3, lam=2.0), SeedStream(88))
        np.testing.assert_array_equal(s.data, s.data.T)
