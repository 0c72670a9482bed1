import math

import numpy as np
import pytest

from spikelab.core import (
    ExponentPoint,
    ParameterError,
    PsiRangeError,
    Region,
    ScParams,
    WigParams,
    canonical_map,
    classify_region,
    derive_constants,
    thresholds,
)


class TestCanonicalMap:
    @pytest.mark.parametrize(
        "alpha,beta,gamma,expected_beta",
        [(0.5, -0.25, 1.0, 0.25), (0.3, -1.0, 2.0, 0.0), (0.5, 0.0, 3.0, 1.5)],
    )
    def test_examples(self, alpha, beta, gamma, expected_beta):
        out = canonical_map(ExponentPoint(alpha, beta, gamma))
        assert out.alpha == alpha
        assert out.beta == pytest.approx(expected_beta, abs=1e-15)
        assert out.gamma is None

    def test_requires_gamma(self):
        with pytest.raises(ParameterError):
            canonical_map(ExponentPoint(0.5, 0.1))

    def test_injective_for_fixed_gamma(self):
        betas = np.linspace(-2, 2, 41)
        images = {canonical_map(ExponentPoint(0.4, b, 2.0)).beta for b in betas}
        assert len(images) == len(betas)

    def test_commutes_with_thresholds(self):
        # beta_comp on the covariance side plus gamma/2 equals the Wigner
        # beta_comp = min(alpha, 1/2), for every (alpha, gamma).
        for alpha in np.linspace(0.05, 0.95, 19):
            for gamma in (1.0, 1.5, 2.0, 3.0, 4.0):
                beta_comp_sc = min(alpha, 0.5) - gamma / 2.0
                assert beta_comp_sc + gamma / 2.0 == pytest.approx(min(alpha, 0.5))


class TestThresholds:
    def test_reference_point(self):
        th = thresholds(100, 10, 10000)
        assert th.theta_comp == pytest.approx(0.1)
        assert th.theta_stat == pytest.approx(math.sqrt(10 / 10000))
        assert th.lambda_comp == pytest.approx(10.0)
        assert th.lambda_stat == pytest.approx(math.sqrt(10))

    def test_degenerate_point(self):
        th = thresholds(1, 1, 1)
        assert th.theta_comp == th.theta_stat == th.lambda_comp == th.lambda_stat == 1.0

    def test_piecewise_branches(self):
        # k <= sqrt(d): entrywise branch k/sqrt(n); k >= sqrt(d): spectral.
        th_small = thresholds(100, 5, 400)
        assert th_small.theta_comp == pytest.approx(5 / 20)
        th_big = thresholds(100, 50, 400)
        assert th_big.theta_comp == pytest.approx(math.sqrt(100 / 400))
        # The branches agree at k = sqrt(d).
        th_edge = thresholds(100, 10, 400)
        assert th_edge.theta_comp == pytest.approx(10 / 20)
        assert th_edge.theta_comp == pytest.approx(math.sqrt(100 / 400))

    def test_stat_below_comp(self):
        for d, k, n in [(50, 3, 100), (64, 8, 512), (200, 14, 4000), (10, 10, 10)]:
            th = thresholds(d, k, n)
            assert th.theta_stat <= th.theta_comp + 1e-15
            assert th.lambda_stat <= th.lambda_comp + 1e-15

    def test_domain_error(self):
        with pytest.raises(ParameterError):
            thresholds(10, 11, 100)
        with pytest.raises(ParameterError):
            thresholds(10, 5, 9)


class TestClassifyRegion:
    @pytest.mark.parametrize(
        "beta,expected",
        [(-0.3, Region.IMPOSSIBLE), (-0.1, Region.HARD), (0.1, Region.EASY)],
    )
    def test_covariance_examples(self, beta, expected):
        assert classify_region(ExponentPoint(0.5, beta, 1.0)) is expected

    def test_boundaries_are_closed_non_hard(self):
        # beta == beta_comp -> EASY, beta == beta_stat -> IMPOSSIBLE.
        assert classify_region(ExponentPoint(0.5, 0.0, 1.0)) is Region.EASY
        assert classify_region(ExponentPoint(0.5, -0.25, 1.0)) is Region.IMPOSSIBLE

    def test_wigner_side(self):
        assert classify_region(ExponentPoint(0.4, 0.45)) is Region.EASY
        assert classify_region(ExponentPoint(0.4, 0.3)) is Region.HARD
        assert classify_region(ExponentPoint(0.4, 0.1)) is Region.IMPOSSIBLE

    def test_invalid_points(self):
        with pytest.raises(ParameterError):
            ExponentPoint(0.0, 0.0)
        with pytest.raises(ParameterError):
            ExponentPoint(0.5, 0.0, 0.5)


class TestDeriveConstants:
    def test_half_alpha_point(self):
        c = derive_constants(0.5, 0.5, 0.0, 1, 1)
        assert (c.A, c.K, c.C, c.M) == (2.0, 14, 64, 4)

    def test_quarter_alpha_point(self):
        c = derive_constants(0.25, 1.0, 0.0, 1, 1)
        assert (c.A, c.K, c.C, c.M) == (0.5, 6, 32, 3)

    def test_psi_value(self):
        theta = 0.9 * 8 / math.sqrt(512)
        c = derive_constants(0.5, 0.5, theta, 512, 8)
        # theta^2 n = (0.9 k)^2, so psi = 0.81 / (2 C).
        assert c.psi == pytest.approx(0.81 / 128, rel=1e-12)
        assert abs(c.psi) <= 1.0 / c.M

    def test_scale_free_in_d(self):
        a = derive_constants(0.3, 0.7, 0.05, 777, 9)
        b = derive_constants(0.3, 0.7, 0.05, 777, 9)
        assert a == b

    def test_psi_out_of_range(self):
        with pytest.raises(PsiRangeError):
            derive_constants(0.5, 0.5, 3.0, 512, 8)

    def test_domain_errors(self):
        with pytest.raises(ParameterError):
            derive_constants(0.6, 0.5, 0.1, 10, 2)
        with pytest.raises(ParameterError):
            derive_constants(0.5, 0.0, 0.1, 10, 2)
        with pytest.raises(ParameterError):
            derive_constants(0.5, 0.5, -0.1, 10, 2)

    def test_invariant_m_vs_k(self):
        for alpha in (0.1, 0.25, 0.4, 0.5):
            for eps in (0.25, 0.5, 1.0, 2.0):
                c = derive_constants(alpha, eps, 0.0, 1, 1)
                assert c.K == math.ceil(c.A**2 + 3 * c.A + 4)
                assert c.C == 2 ** (math.ceil(math.log2(2 * c.K)) + 1)
                assert c.M == int((math.isqrt(1 + 8 * c.K) - 1) // 2)
                assert c.M >= c.A  # denoising power covers the exponent demand


class TestParamTypes:
    def test_sc_params_validation(self):
        ScParams(d=4, k=2, theta=0.0, n=4)
        with pytest.raises(ParameterError):
            ScParams(d=4, k=5, theta=0.1, n=10)
        with pytest.raises(ParameterError):
            ScParams(d=4, k=2, theta=0.1, n=3)
        with pytest.raises(ParameterError):
            ScParams(d=4, k=2, theta=-0.1, n=8)

    def test_wig_params_validation(self):
        WigParams(d=4, k=4, lam=0.0)
        with pytest.raises(ParameterError):
            WigParams(d=4, k=0, lam=1.0)
        with pytest.raises(ParameterError):
            WigParams(d=4, k=2, lam=-1.0)
