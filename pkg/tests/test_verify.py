import json
import math

import numpy as np
import pytest

from spikelab.core import ParameterError, ScParams
from spikelab.primitives import denoise_batch, denoise_order
from spikelab.sampling import SeedStream
from spikelab.verify import (
    GsBoundParams,
    clone_cov_null_battery,
    cross_moment_battery,
    denoise_exact_oracle,
    gs_perturb_harness,
    ks_normality,
    wishart_clt_comparison,
    write_reports_jsonl,
    write_summary_csv,
)


class TestKsNormality:
    def test_calibrated_on_true_target(self):
        passes = 0
        for i in range(30):
            x = SeedStream(1, (i,)).generator().standard_normal(20000)
            passes += ks_normality(x, 0.0, 1.0, level=0.01).passed
        assert passes >= 27  # each battery passes w.p. 0.99

    def test_detects_small_shift(self):
        x = SeedStream(2).generator().standard_normal(100000) + 0.05
        assert not ks_normality(x, 0.0, 1.0, level=0.01).passed

    def test_variance_two_target(self):
        x = SeedStream(3).generator().standard_normal(50000) * math.sqrt(2.0)
        assert ks_normality(x, 0.0, 2.0, level=0.01).passed
        assert not ks_normality(x, 0.0, 1.0, level=0.01).passed

    def test_constant_samples_fail(self):
        assert not ks_normality(np.zeros(1000), 0.0, 1.0).passed

    def test_sample_size_precondition(self):
        with pytest.raises(ParameterError):
            ks_normality(np.zeros(99))


class TestCrossMomentBattery:
    def test_iid_null_passes(self):
        trials = SeedStream(4).generator().standard_normal((200, 10, 10))
        report = cross_moment_battery(trials, SeedStream(5), corr_pairs=50)
        assert report.passed

    def test_shifted_entry_fails_mean_check(self):
        t = 400
        trials = SeedStream(6).generator().standard_normal((t, 8, 8))
        trials[:, 2, 3] += 10.0 / math.sqrt(t)
        report = cross_moment_battery(trials, SeedStream(7), corr_pairs=0)
        assert not report.passed
        assert not report.details["entry_means"]["pass"]

    def test_noiseless_signal_exact(self):
        u = np.zeros(6)
        u[:2] = 1.0 / math.sqrt(2.0)
        y = 3.0 * np.outer(u, u)
        trials = np.repeat(y[None, :, :], 50, axis=0)
        report = cross_moment_battery(
            trials, SeedStream(8), structure="support-signal", u=u,
            predicted_mean=3.0, corr_pairs=0,
        )
        assert report.passed

    def test_correlated_entries_fail(self):
        # A shared per-trial component correlates every entry pair, so any
        # sampled pair exposes it.
        rng = SeedStream(9).generator()
        t = 500
        common = rng.standard_normal((t, 1, 1))
        trials = common + 0.1 * rng.standard_normal((t, 6, 6))
        trials /= math.sqrt(1.01)  # keep unit entry variance
        report = cross_moment_battery(trials, SeedStream(10), corr_pairs=50)
        assert not report.details["pairwise_corr"]["pass"]

    def test_shape_validation(self):
        with pytest.raises(ParameterError):
            cross_moment_battery(np.zeros((10, 4)), SeedStream(0))
        with pytest.raises(ParameterError):
            cross_moment_battery(np.zeros((10, 4, 4)), SeedStream(0))


class TestDenoiseOracle:
    def test_three_bit_example(self):
        assert denoise_exact_oracle(3, 0.4, 0.1) == pytest.approx(0.075, abs=1e-12)

    def test_single_bit_passthrough(self):
        assert denoise_exact_oracle(1, 0.3, 0.05) == pytest.approx(0.35, abs=1e-12)

    def test_null_mode_is_centered(self):
        # Inputs at Rad(0) correspond to delta = -a; the enumeration gives 0.
        for n_bits in (1, 3, 6, 10):
            assert denoise_exact_oracle(n_bits, 0.2, -0.2) == pytest.approx(0.0, abs=1e-12)

    def test_matches_closed_form_grid(self):
        # Keystone exactness: enumeration equals a^M/M + (-1)^(M+1) d^M/M
        # for every N <= 12 over a grid of (a, delta) pairs.  The grid stays
        # at |a| <= 1/(2M) so |a + delta| <= 1 holds even at M = 1.
        checked = 0
        for n_bits in range(1, 13):
            m = denoise_order(n_bits)
            for a in np.linspace(-0.5 / m, 0.5 / m, 5):
                if a == 0.0:
                    continue
                for frac in np.linspace(-1.0, 1.0, 5):
                    delta = frac * a
                    expected = a**m / m + (-1.0) ** (m + 1) * delta**m / m
                    got = denoise_exact_oracle(n_bits, a, delta)
                    assert abs(got - expected) <= 1e-12
                    checked += 1
        assert checked >= 100

    def test_agrees_with_monte_carlo(self):
        n_bits, a, delta = 6, 0.25, 0.1
        rng = SeedStream(11).generator()
        t = 100000
        bits = np.where(rng.random((t, n_bits)) < (1 + a + delta) / 2, 1.0, -1.0)
        out = denoise_batch(bits, a, SeedStream(12))
        se = out.std(ddof=1) / math.sqrt(t)
        assert abs(out.mean() - denoise_exact_oracle(n_bits, a, delta)) <= 4.0 * se

    def test_feasibility_limit(self):
        with pytest.raises(ParameterError):
            denoise_exact_oracle(13, 0.1, 0.0)


class TestGsPerturbHarness:
    def test_zero_theta_residuals_vanish(self):
        params = ScParams(d=20, k=4, theta=0.0, n=200)
        report, record = gs_perturb_harness(params, GsBoundParams(), 5, SeedStream(13))
        assert report.passed
        assert report.statistic == 1.0
        np.testing.assert_array_equal(record.residuals, np.zeros(20))

    def test_midrange_theta_passes(self):
        d, k, n = 40, 6, 800
        theta = 0.15  # between theta_stat ~ 0.087 and theta_comp ~ 0.212
        params = ScParams(d=d, k=k, theta=theta, n=n)
        report, record = gs_perturb_harness(params, GsBoundParams(), 25, SeedStream(14))
        assert report.passed
        assert record.median_ratio <= 0.2

    def test_regime_preconditions(self):
        with pytest.raises(ParameterError):
            gs_perturb_harness(ScParams(d=50, k=5, theta=0.1, n=60),
                               GsBoundParams(), 2, SeedStream(15))
        with pytest.raises(ParameterError):
            # theta above theta_comp
            gs_perturb_harness(ScParams(d=40, k=6, theta=0.5, n=800),
                               GsBoundParams(), 2, SeedStream(16))

    def test_bound_params_validated(self):
        with pytest.raises(ParameterError):
            GsBoundParams(c1=0.0)


class TestCloneCovNullBattery:
    def test_small_scale_passes(self):
        report = clone_cov_null_battery(10, 400, 80, SeedStream(17), cycles_per_trial=2000)
        assert report.passed
        assert report.details["correlation_pass"]


class TestWishartClt:
    def test_large_n_passes(self):
        report = wishart_clt_comparison(6, 4000, 80, SeedStream(18))
        assert report.passed

    def test_planted_mode_support_mean(self):
        report = wishart_clt_comparison(8, 4096, 60, SeedStream(19), k=2, theta=0.05)
        assert "support_mean_z" in report.details
        assert report.passed

    def test_offdiag_variance_at_huge_n(self):
        # theta=0, d=2: the single off-diagonal entry has variance ~ 1.
        vals = []
        for i in range(300):
            z = SeedStream(20, (i,)).generator().standard_normal((20000, 2))
            m = math.sqrt(20000) * (z.T @ z / 20000 - np.eye(2))
            vals.append(m[0, 1])
        vals = np.asarray(vals)
        assert abs(vals.var() - 1.0) <= 3.0 * math.sqrt(2.0 / vals.size)


class TestReportSerialization:
    def test_jsonl_reproducible(self, tmp_path):
        def build():
            x = SeedStream(21).generator().standard_normal(5000)
            return [ks_normality(x, 0.0, 1.0, seed=21)]

        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_reports_jsonl(build(), p1)
        write_reports_jsonl(build(), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_jsonl_fields(self, tmp_path):
        x = SeedStream(22).generator().standard_normal(5000)
        report = ks_normality(x, 0.0, 1.0, name="demo", seed=7)
        doc = json.loads(report.to_json_line())
        assert set(doc) == {"name", "statistic", "threshold", "pass", "trials", "seed", "details"}
        assert doc["name"] == "demo"
        assert doc["seed"] == 7

    def test_summary_csv(self, tmp_path):
        x = SeedStream(23).generator().standard_normal(5000)
        path = tmp_path / "summary.csv"
        write_summary_csv([ks_normality(x, 0.0, 1.0)], path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "name,statistic,threshold,pass,trials,seed"
        assert len(lines) == 2
