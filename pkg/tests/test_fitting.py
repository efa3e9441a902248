"""Least-squares estimation, bands, extrapolation and model comparison."""

import dataclasses
import math
import random

import numpy as np
import pytest

from anchorlife.dataset import FailurePoint, TtfDataset, builtin_dataset
from anchorlife.errors import BandError, FitError, InsufficientDataError
from anchorlife.fitting import (
    FIFTY_YEARS_HOURS,
    FitConfig,
    compare_models,
    confidence_band,
    default_config,
    fit,
    safe_load,
)
from anchorlife.models import ModelKind, eval_model, param_values

# Standard two-sided 95% Student-t quantile at 6 degrees of freedom
# (verified against a 30-digit hypergeometric evaluation).
T_975_DF6 = 2.4469118511449692


def _dataset(pairs, id="synth", **kw):
    return TtfDataset(id=id, points=tuple(FailurePoint(l, t) for l, t in pairs), **kw)


class TestClosedForms:
    def test_two_points_determine_the_logarithmic_line(self):
        ds = _dataset([(0.9, 1.0), (0.8, math.e)])
        res = fit(ds, FitConfig(kind="logarithmic"))
        assert res.params.a == pytest.approx(-0.1, rel=1e-12)
        assert res.params.b == pytest.approx(0.9, rel=1e-12)
        assert res.sse == pytest.approx(0.0, abs=1e-24)
        assert res.converged
        assert res.covariance is None  # no degrees of freedom
        assert any("degrees of freedom" in w for w in res.warnings)

    def test_power_law_exact_on_power_data(self):
        b, n = 0.85, -0.07
        ds = _dataset([(b * t**n, t) for t in (0.5, 3.0, 40.0, 900.0)])
        res = fit(ds, FitConfig(kind="power_law"))
        assert res.params.b == pytest.approx(b, rel=1e-12)
        assert res.params.n == pytest.approx(n, rel=1e-12)
        assert res.residual_domain == "log_y_log_t"

    def test_logarithmic_rejects_increasing_data(self):
        ds = _dataset([(0.5, 1.0), (0.6, 10.0), (0.7, 100.0)])
        with pytest.raises(FitError, match="slope"):
            fit(ds, FitConfig(kind="logarithmic"))

    def test_fixed_intercept_logarithmic(self):
        ds = _dataset([(0.9, 1.0), (0.8, math.e), (0.72, math.e**2)])
        res = fit(ds, FitConfig(kind="logarithmic", fixed={"b": 0.9}))
        assert res.params.b == 0.9  # bit-identical
        assert res.free_names == ("a",)
        # one-parameter least squares: a = sum(x*(y-b)) / sum(x^2)
        x = np.log([1.0, math.e, math.e**2])
        y = np.array([0.9, 0.8, 0.72])
        assert res.params.a == pytest.approx(float(np.dot(x, y - 0.9) / np.dot(x, x)), rel=1e-12)


class TestNonlinear:
    def test_sigmoid_recovers_synthetic_parameters(self):
        true = {"kappa_inf": 0.35, "b": 0.08, "c": 0.6}
        times = np.geomspace(0.05, 2e4, 12)
        pairs = [
            (0.35 + 0.65 * (1.0 / (1.0 + true["b"] * t)) ** true["c"], t) for t in times
        ]
        res = fit(_dataset(pairs), default_config("sigmoid"))
        assert res.converged
        assert res.params.kappa_inf == pytest.approx(0.35, abs=1e-6)
        assert res.params.b == pytest.approx(0.08, rel=1e-4)
        assert res.params.c == pytest.approx(0.6, rel=1e-4)
        assert res.sse < 1e-16

    def test_fixed_parameters_returned_bit_identical(self):
        ds = builtin_dataset("product_a")
        res = fit(ds, FitConfig(kind="sigmoid", fixed={"kappa_0": 1.0, "kappa_inf": 0.4}))
        assert res.params.kappa_0 == 1.0
        assert res.params.kappa_inf == 0.4
        assert res.fixed == {"kappa_0": 1.0, "kappa_inf": 0.4}
        assert res.free_names == ("b", "c")

    def test_fixed_conflicts_raise(self):
        ds = builtin_dataset("product_a")
        with pytest.raises(FitError, match="fixed"):
            fit(ds, FitConfig(kind="sigmoid", fixed={"b": -1.0}))
        with pytest.raises(FitError, match="kappa_inf"):
            fit(ds, FitConfig(kind="sigmoid", fixed={"kappa_0": 0.4, "kappa_inf": 0.5}))
        with pytest.raises(FitError):
            FitConfig(kind="sigmoid", fixed={"zeta": 1.0})

    def test_insufficient_points(self):
        ds = _dataset([(0.9, 1.0), (0.8, 10.0)])
        with pytest.raises(InsufficientDataError):
            fit(ds, default_config("sigmoid"))
        one = _dataset([(0.9, 1.0)])
        with pytest.raises(InsufficientDataError):
            fit(one, FitConfig(kind="logarithmic"))

    def test_censored_points_are_excluded(self):
        base = builtin_dataset("product_a")
        with_censored = TtfDataset(
            id="aug",
            points=base.points + (FailurePoint(0.4, 20000.0, censored=True),),
        )
        res_base = fit(base, default_config("sigmoid"))
        res_aug = fit(with_censored, default_config("sigmoid"))
        assert param_values(res_aug.params) == param_values(res_base.params)
        assert any("censored" in w for w in res_aug.warnings)

    def test_permutation_invariance(self):
        ds = builtin_dataset("product_b")
        res = fit(ds, default_config("sigmoid"))
        shuffled_points = list(ds.points)
        random.Random(5).shuffle(shuffled_points)
        res2 = fit(TtfDataset(id="shuf", points=tuple(shuffled_points)),
                   default_config("sigmoid"))
        for name, v in param_values(res.params).items():
            v2 = param_values(res2.params)[name]
            assert v2 == pytest.approx(v, rel=1e-12)

    def test_scale_consistency_of_linear_families(self):
        ds = builtin_dataset("product_a")
        k = 10.0
        scaled = TtfDataset(
            id="scaled",
            points=tuple(
                FailurePoint(p.load_level, p.failure_time * k) for p in ds.points
            ),
        )
        log0 = fit(ds, FitConfig(kind="logarithmic"))
        log1 = fit(scaled, FitConfig(kind="logarithmic"))
        assert log1.params.a == pytest.approx(log0.params.a, rel=1e-12)
        assert log1.params.b == pytest.approx(
            log0.params.b - log0.params.a * math.log(k), rel=1e-12
        )
        pow0 = fit(ds, FitConfig(kind="power_law"))
        pow1 = fit(scaled, FitConfig(kind="power_law"))
        assert pow1.params.n == pytest.approx(pow0.params.n, rel=1e-12)
        assert pow1.params.b == pytest.approx(
            pow0.params.b * k ** -pow0.params.n, rel=1e-12
        )

    def test_residual_domain_override_runs_nonlinear_path(self):
        ds = builtin_dataset("product_a")
        res = fit(ds, FitConfig(kind="power_law", residual_domain="linear_y_log_t"))
        assert res.residual_domain == "linear_y_log_t"
        assert math.isfinite(res.sse)
        # its linear-domain SSE must beat the log-domain fit evaluated in y
        log_fit = fit(ds, FitConfig(kind="power_law"))
        t = np.array([p.failure_time for p in ds.points])
        y = np.array([p.load_level for p in ds.points])
        sse_of_log_fit_in_y = float(np.sum((eval_model(log_fit.params, t) - y) ** 2))
        assert res.sse <= sse_of_log_fit_in_y + 1e-12

    def test_result_statistics_are_consistent(self):
        ds = builtin_dataset("product_c")
        res = fit(ds, default_config("powell_eyring"))
        assert res.n_points == 9
        assert res.rmse == pytest.approx(math.sqrt(res.sse / 9), rel=1e-12)
        assert res.r_squared <= 1.0
        assert res.covariance is not None
        assert np.allclose(res.covariance, res.covariance.T)
        assert np.all(np.linalg.eigvalsh(res.covariance) >= -1e-15)


class TestSafeLoad:
    def test_direct_formula_value(self):
        ds = _dataset([(1.0 - 0.05 * math.log(t), t) for t in (1.0, 100.0, 1e4)])
        res = fit(ds, FitConfig(kind="logarithmic"))
        expected = 1.0 - 0.05 * math.log(438000.0)
        assert FIFTY_YEARS_HOURS == 438000.0
        assert safe_load(res, FIFTY_YEARS_HOURS) == pytest.approx(expected, rel=1e-9)

    def test_sigmoid_floor_respected_at_any_horizon(self):
        ds = builtin_dataset("product_a")
        res = fit(ds, FitConfig(kind="sigmoid", fixed={"kappa_0": 1.0, "kappa_inf": 0.4}))
        for horizon in (1.0, 1e3, FIFTY_YEARS_HOURS, 1e9):
            assert safe_load(res, horizon) >= 0.4

    def test_product_a_logarithmic_bounded_by_lowest_tested_level(self):
        res = fit(builtin_dataset("product_a"), FitConfig(kind="logarithmic"))
        value = safe_load(res, FIFTY_YEARS_HOURS)
        assert 0.0 < value < 0.46

    def test_rejects_bad_service_life(self):
        res = fit(builtin_dataset("product_a"), FitConfig(kind="logarithmic"))
        with pytest.raises(FitError):
            safe_load(res, 0.0)

    def test_rejects_nonconverged_fit(self):
        res = fit(builtin_dataset("product_a"), FitConfig(kind="logarithmic"))
        broken = dataclasses.replace(res, converged=False)
        with pytest.raises(FitError, match="non-converged"):
            safe_load(broken, 100.0)


class TestConfidenceBand:
    def test_zero_covariance_collapses_band(self):
        res = fit(builtin_dataset("product_a"), FitConfig(kind="logarithmic"))
        degenerate = dataclasses.replace(res, covariance=np.zeros((2, 2)))
        band = confidence_band(degenerate, [1.0, 100.0])
        for (lo, hi), tv in zip(band, [1.0, 100.0]):
            centre = eval_model(res.params, tv)
            assert lo == pytest.approx(centre, abs=1e-15)
            assert hi == pytest.approx(centre, abs=1e-15)

    def test_halfwidth_uses_t_quantile(self):
        # at t = 1 h the logarithmic gradient is (ln 1, 1) = (0, 1), so the
        # half-width reduces to q * sqrt(var_b)
        res = fit(builtin_dataset("product_a"), FitConfig(kind="logarithmic"))
        band = confidence_band(res, [1.0], level=0.95)
        half = (band[0][1] - band[0][0]) / 2
        assert res.n_points - 2 == 6
        assert half == pytest.approx(
            T_975_DF6 * math.sqrt(res.covariance[1, 1]), rel=1e-6
        )

    def test_no_dof_rejected(self):
        ds = _dataset([(0.9, 1.0), (0.8, math.e)])
        res = fit(ds, FitConfig(kind="logarithmic"))
        with pytest.raises(BandError):
            confidence_band(res, [10.0])

    def test_bad_horizons_rejected(self):
        res = fit(builtin_dataset("product_a"), FitConfig(kind="logarithmic"))
        with pytest.raises(BandError):
            confidence_band(res, [0.0])
        with pytest.raises(BandError):
            confidence_band(res, [10.0], level=1.5)

    def test_band_contains_curve_and_widens_beyond_data(self):
        res = fit(builtin_dataset("product_a"), FitConfig(kind="logarithmic"))
        times = [1.0, 100.0, 1e4, 438000.0]
        band = confidence_band(res, times)
        halves = []
        for (lo, hi), tv in zip(band, times):
            centre = eval_model(res.params, tv)
            assert lo < centre < hi
            halves.append((hi - lo) / 2)
        assert halves[-1] > halves[1]  # extrapolation is less certain


class TestCompare:
    def test_all_five_families_rank_on_product_a(self):
        report = compare_models(builtin_dataset("product_a"), list(ModelKind))
        assert len(report.rows) == 5
        assert all(row.result is not None for row in report.rows)
        sses = [row.result.sse for row in report.rows]
        assert sses == sorted(sses)
        assert all(math.isfinite(s) for s in sses)
        assert all(row.safe_load_50y is not None for row in report.rows)

    def test_single_kind_matches_fit(self):
        ds = builtin_dataset("product_b")
        report = compare_models(ds, ["logarithmic"])
        assert len(report.rows) == 1
        row = report.rows[0]
        direct = fit(ds, default_config("logarithmic"))
        assert param_values(row.result.params) == param_values(direct.params)
        assert row.safe_load_50y == pytest.approx(safe_load(direct, FIFTY_YEARS_HOURS))

    def test_empty_kind_list_rejected(self):
        with pytest.raises(FitError):
            compare_models(builtin_dataset("product_a"), [])

    def test_per_model_failures_become_rows(self):
        # three points: enough for the 2-parameter Powell-Eyring fit but not
        # for the 4-parameter rate-theory fit
        ds = _dataset([(0.9, 0.1), (0.7, 10.0), (0.5, 5000.0)])
        report = compare_models(ds, ["powell_eyring", "rate_theory"])
        by_kind = {row.kind: row for row in report.rows}
        assert by_kind[ModelKind.POWELL_EYRING].result is not None
        failed = by_kind[ModelKind.RATE_THEORY]
        assert failed.result is None
        assert "points" in failed.error
        assert report.rows[-1] is failed  # failures rank last
