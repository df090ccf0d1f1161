import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convlab import predsel as ps


def line_dataset(n=20, b0=1.0, b1=2.0):
    xs = np.linspace(-1, 1, n)
    return ps.Dataset(xs=tuple(xs), ys=tuple(b0 + b1 * xs))


class TestFit:
    def test_recovers_exact_line(self):
        fit = ps.fit_ols(line_dataset(), 1)
        assert fit.rss < 1e-8
        assert fit.model.coeffs == pytest.approx((1.0, 2.0), abs=1e-9)

    def test_overparameterized_fit_zeroes_extra_coefficient(self):
        fit = ps.fit_ols(line_dataset(), 2)
        assert fit.rss < 1e-8
        assert abs(fit.model.coeffs[2]) < 1e-8

    def test_degree_zero_is_the_mean(self):
        truth = ps.poly_truth((0.3, 1.0), noise_sigma=0.5)
        d = ps.generate(truth, 200, seed=4)
        fit = ps.fit_ols(d, 0)
        assert fit.model.coeffs[0] == pytest.approx(np.mean(d.ys), abs=1e-12)

    def test_needs_enough_points(self):
        with pytest.raises(ValueError):
            ps.fit_ols(line_dataset(n=4), 3)

    def test_rank_deficiency_detected(self):
        d = ps.Dataset(xs=(0.5,) * 10, ys=tuple(range(10)))
        with pytest.raises(ps.FitError):
            ps.fit_ols(d, 1)

    @given(seed=st.integers(0, 10_000), n=st.integers(12, 60))
    def test_nested_rss_monotone(self, seed, n):
        truth = ps.poly_truth((0.5, -1.0, 0.25), noise_sigma=1.0)
        d = ps.generate(truth, n, seed)
        rss = [ps.fit_ols(d, k).rss for k in range(5)]
        for a, b in zip(rss, rss[1:]):
            assert b <= a + 1e-9 * (1.0 + a)


class TestScores:
    def test_aic_arithmetic(self):
        fit = ps.FitResult(ps.PolyModel(1, (0.0, 0.0)), rss=10.0, n=50)
        assert ps.aic_score(fit, 1.0) == pytest.approx(14.0)

    def test_bic_arithmetic(self):
        fit = ps.FitResult(ps.PolyModel(1, (0.0, 0.0)), rss=10.0, n=50)
        assert ps.bic_score(fit, 1.0) == pytest.approx(10.0 + 2.0 * math.log(50))

    def test_perfect_fit_scores_penalty_only(self):
        fit = ps.FitResult(ps.PolyModel(3, (0.0,) * 4), rss=0.0, n=50)
        assert ps.aic_score(fit, 2.0) == pytest.approx(8.0)

    def test_select_argmin(self):
        assert ps.select([5.0, 4.0, 4.5]) == 1

    def test_select_tie_breaks_small(self):
        assert ps.select([4.0, 4.0]) == 0

    def test_select_singleton_and_empty(self):
        assert ps.select([3.0]) == 0
        with pytest.raises(ValueError):
            ps.select([])

    @given(seed=st.integers(0, 5000), n=st.integers(12, 80))
    def test_heavier_penalty_never_selects_larger_degree(self, seed, n):
        # ln n > 2 from n = 8 on, so the BIC pick is at most the AIC pick
        truth = ps.poly_truth((0.0, 1.0), noise_sigma=1.0)
        d = ps.generate(truth, n, seed)
        report = ps.score_candidates(d, range(5), sigma2=1.0)
        assert report.selected_bic <= report.selected_aic


class TestTrueRisk:
    def test_zero_model_zero_truth(self):
        truth = ps.poly_truth((0.0,), noise_sigma=1.0)
        fit = ps.FitResult(ps.PolyModel(0, (0.0,)), rss=0.0, n=10)
        assert ps.true_risk(fit, truth) == pytest.approx(1.0, abs=1e-12)

    def test_linear_truth_zero_model(self):
        truth = ps.poly_truth((0.0, 1.0), noise_sigma=1.0)
        fit = ps.FitResult(ps.PolyModel(0, (0.0,)), rss=0.0, n=10)
        assert ps.true_risk(fit, truth) == pytest.approx(1.0 + 1.0 / 3.0, abs=1e-12)

    def test_kinked_truth_best_quadratic(self):
        # the projection of |x| onto quadratics has squared error 1/192;
        # fitting near-noiseless data approximates that projection
        truth = ps.abs_truth(noise_sigma=1e-6)
        d = ps.generate(truth, 40_000, seed=9)
        fit = ps.fit_ols(d, 2)
        risk = ps.true_risk(fit, truth)
        assert risk == pytest.approx(truth.noise_sigma**2 + 1.0 / 192.0, abs=5e-4)

    def test_quadrature_matches_monte_carlo_oracle(self):
        for truth in (ps.abs_truth(0.5), ps.poly_truth((0.2, -1.0, 0.7), 1.0),
                      ps.tabulated_truth((-1, -0.25, 0.5, 1), (0.0, 1.0, -0.5, 0.25), 0.7)):
            d = ps.generate(truth, 300, seed=13)
            for degree in (0, 2, 5):
                fit = ps.fit_ols(d, degree)
                exact = ps.true_risk(fit, truth)
                mc, se = ps.true_risk_mc(fit, truth, n_points=200_000, seed=21)
                assert abs(exact - mc) <= 3.0 * se

    def test_unfitted_model_rejected(self):
        with pytest.raises(ValueError):
            ps.PolyModel(1).predict([0.0])


class TestGenerate:
    def test_vanishing_noise_limit(self):
        truth = ps.poly_truth((1.0, -2.0, 0.5), noise_sigma=1e-12)
        d = ps.generate(truth, 50, seed=1)
        assert np.allclose(d.ys, truth.eval(np.array(d.xs)), atol=1e-10)

    def test_seed_reproducibility(self):
        truth = ps.poly_truth((0.0, 1.0), noise_sigma=1.0)
        assert ps.generate(truth, 100, 7) == ps.generate(truth, 100, 7)
        assert ps.generate(truth, 100, 7) != ps.generate(truth, 100, 8)

    def test_noise_variance_concentrates(self):
        truth = ps.poly_truth((0.0,), noise_sigma=1.5, design="grid")
        n = 100_000
        d = ps.generate(truth, n, seed=3)
        resid = np.array(d.ys) - truth.eval(np.array(d.xs))
        sample_var = float(np.var(resid, ddof=1))
        se = truth.noise_sigma**2 * math.sqrt(2.0 / n)
        assert abs(sample_var - truth.noise_sigma**2) <= 3.0 * se

    def test_grid_design_is_fixed(self):
        truth = ps.poly_truth((0.0,), noise_sigma=1.0, design="grid")
        a = ps.generate(truth, 50, 1)
        b = ps.generate(truth, 50, 2)
        assert a.xs == b.xs

    def test_size_validated(self):
        with pytest.raises(ValueError):
            ps.generate(ps.abs_truth(1.0), 1, seed=0)


class TestTruthSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            ps.poly_truth((1.0,), noise_sigma=0.0)
        with pytest.raises(ValueError):
            ps.TruthSpec(kind="poly", noise_sigma=1.0)
        with pytest.raises(ValueError):
            ps.TruthSpec(kind="spline", noise_sigma=1.0)
        with pytest.raises(ValueError):
            ps.poly_truth((1.0,), noise_sigma=1.0, design="lattice")

    def test_poly_degree_strips_zero_lead(self):
        assert ps.poly_truth((1.0, 2.0, 0.0), 1.0).poly_degree == 1
        assert ps.abs_truth(1.0).poly_degree is None

    def test_breakpoints(self):
        assert ps.abs_truth(1.0).breakpoints() == (0.0,)
        assert ps.poly_truth((1.0,), 1.0).breakpoints() == ()
        tab = ps.tabulated_truth((-1, 0.5, 1), (0, 1, 0), 1.0)
        assert tab.breakpoints() == (0.5,)


class TestRegimes:
    def test_degenerate_candidate_set(self):
        truth = ps.poly_truth((1.0, -2.0, 0.5), noise_sigma=1.0)
        summary = ps.regime_experiment(truth, [2], n=120, reps=100, seed=5)
        assert summary.correct_frequency_aic == 1.0
        assert summary.correct_frequency_bic == 1.0
        assert summary.mean_excess_risk_aic == 0.0

    def test_true_model_direction_smoke(self):
        truth = ps.poly_truth((1.0, -2.0, 0.5), noise_sigma=1.0)
        summary = ps.regime_experiment(truth, range(0, 7), n=500, reps=300, seed=17)
        assert summary.regime == "true_model_in_set"
        assert summary.correct_frequency_bic > summary.correct_frequency_aic

    def test_misspecified_direction_smoke(self):
        truth = ps.abs_truth(noise_sigma=0.5)
        summary = ps.regime_experiment(truth, range(0, 13), n=500, reps=150, seed=17)
        assert summary.regime == "misspecified"
        assert summary.correct_frequency_aic is None
        assert summary.mean_excess_risk_aic <= summary.mean_excess_risk_bic

    def test_excess_risk_nonnegative_rows_complete(self):
        truth = ps.abs_truth(noise_sigma=0.5)
        summary = ps.regime_experiment(truth, range(0, 4), n=60, reps=100, seed=2)
        assert summary.mean_excess_risk_aic >= 0.0
        assert summary.mean_excess_risk_bic >= 0.0
        assert len(summary.rows) == 100 * 4

    def test_reps_floor(self):
        with pytest.raises(ValueError):
            ps.regime_experiment(ps.abs_truth(0.5), range(3), 60, reps=10, seed=1)


class TestUnbiasednessProbe:
    def test_flat_truth_probe(self):
        truth = ps.poly_truth((0.0,), noise_sigma=1.0, design="grid")
        probe = ps.unbiasedness_probe(truth, degree=0, n=200, reps=5000, seed=31)
        assert probe.relative_bias <= 0.02

    def test_quadratic_truth_probe(self):
        truth = ps.poly_truth((1.0, -2.0, 0.5), noise_sigma=1.0, design="grid")
        probe = ps.unbiasedness_probe(truth, degree=2, n=200, reps=4000, seed=31)
        assert probe.relative_bias <= 0.02
        # known-variance identity: both means sit near (n + k + 1)/n * sigma^2
        expected = (200 + 3) / 200
        assert probe.mean_estimate == pytest.approx(expected, rel=0.02)
        assert probe.mean_true_insample_risk == pytest.approx(expected, rel=0.02)

    def test_noise_floor_limit(self):
        truth = ps.poly_truth((1.0, 0.5), noise_sigma=1e-9, design="grid")
        probe = ps.unbiasedness_probe(truth, degree=1, n=100, reps=500, seed=1)
        assert probe.mean_estimate < 1e-17
        assert probe.relative_bias <= 0.05

    def test_bias_shrinks_with_sample_size(self):
        truth = ps.poly_truth((1.0, -2.0, 0.5), noise_sigma=1.0, design="grid")
        seeds = range(40, 45)
        small = [ps.unbiasedness_probe(truth, 2, 50, 3000, s).relative_bias for s in seeds]
        large = [ps.unbiasedness_probe(truth, 2, 400, 3000, s).relative_bias for s in seeds]
        assert sum(large) / 5 <= sum(small) / 5

    def test_preconditions(self):
        with pytest.raises(ValueError):
            ps.unbiasedness_probe(ps.abs_truth(1.0), 2, 100, 500, 1)
        with pytest.raises(ValueError):
            ps.unbiasedness_probe(ps.poly_truth((0, 0, 1.0), 1.0), 1, 100, 500, 1)
