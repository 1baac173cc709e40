"""Residual diagnostics: LM tests, recursive residuals, CUSUM paths."""

from __future__ import annotations

import numpy as np
import pytest
from scipy import stats as spstats

from cointegra import (
    ConfigError,
    breusch_godfrey,
    cusum,
    cusumsq,
    het_test,
    jarque_bera,
    ols_fit,
    ramsey_reset,
    run_battery,
)
from cointegra.diagnostics import recursive_residuals


def well_specified(n: int, seed: int):
    rng = np.random.Generator(np.random.Philox(key=seed))
    X = np.column_stack([np.ones(n), rng.standard_normal((n, 2))])
    y = X @ np.array([1.0, 0.5, -0.3]) + rng.standard_normal(n)
    return y, X


class TestBreuschGodfrey:
    def test_matches_auxiliary_n_r2(self):
        y, X = well_specified(60, seed=3)
        fit = ols_fit(y, X)
        out = breusch_godfrey(fit, X, order=2)
        u = fit.residuals
        lagged = np.zeros((60, 2))
        lagged[1:, 0] = u[:-1]
        lagged[2:, 1] = u[:-2]
        aux = ols_fit(u, np.column_stack([X, lagged]))
        assert out.statistic == pytest.approx(60 * aux.r2, rel=1e-12)
        assert out.dof == 2
        assert out.p_value == pytest.approx(spstats.chi2.sf(out.statistic, 2), rel=1e-12)

    def test_detects_ar1_errors(self):
        rng = np.random.Generator(np.random.Philox(key=4))
        n = 200
        X = np.column_stack([np.ones(n), rng.standard_normal(n)])
        e = np.empty(n)
        e[0] = rng.standard_normal()
        innov = rng.standard_normal(n)
        for t in range(1, n):
            e[t] = 0.7 * e[t - 1] + innov[t]
        fit = ols_fit(X @ np.array([1.0, 2.0]) + e, X)
        assert breusch_godfrey(fit, X).p_value < 0.01

    def test_clean_errors_usually_pass(self):
        y, X = well_specified(150, seed=5)
        fit = ols_fit(y, X)
        assert breusch_godfrey(fit, X).p_value > 0.01

    def test_order_validated(self):
        y, X = well_specified(30, seed=6)
        with pytest.raises(ConfigError):
            breusch_godfrey(ols_fit(y, X), X, order=0)


class TestHeteroskedasticity:
    def test_detects_variance_linked_to_regressor(self):
        rng = np.random.Generator(np.random.Philox(key=7))
        n = 300
        x = rng.uniform(0.5, 3.0, n)
        X = np.column_stack([np.ones(n), x])
        y = 1.0 + 2.0 * x + x * rng.standard_normal(n)
        fit = ols_fit(y, X)
        assert het_test(fit, X, "breusch-pagan").p_value < 0.01
        assert het_test(fit, X, "white-no-cross").p_value < 0.01

    def test_homoskedastic_usually_passes(self):
        y, X = well_specified(200, seed=8)
        fit = ols_fit(y, X)
        assert het_test(fit, X).p_value > 0.01

    def test_unknown_kind_rejected(self):
        y, X = well_specified(40, seed=9)
        with pytest.raises(ConfigError):
            het_test(ols_fit(y, X), X, "glejser")


class TestJarqueBera:
    def test_formula(self):
        rng = np.random.Generator(np.random.Philox(key=10))
        u = rng.standard_normal(80)
        out = jarque_bera(u)
        c = u - u.mean()
        s = np.mean(c**3) / np.mean(c**2) ** 1.5
        k = np.mean(c**4) / np.mean(c**2) ** 2
        assert out.statistic == pytest.approx(80 * (s**2 / 6 + (k - 3) ** 2 / 24), rel=1e-12)
        assert out.dof == 2

    def test_rejects_skewed_residuals(self):
        rng = np.random.Generator(np.random.Philox(key=11))
        u = rng.exponential(1.0, 300) - 1.0
        assert jarque_bera(u).p_value < 0.01

    def test_gaussian_usually_passes(self):
        rng = np.random.Generator(np.random.Philox(key=12))
        assert jarque_bera(rng.standard_normal(300)).p_value > 0.01


class TestRamseyReset:
    def test_detects_omitted_square(self):
        rng = np.random.Generator(np.random.Philox(key=13))
        n = 200
        x = rng.uniform(-2, 2, n)
        X = np.column_stack([np.ones(n), x])
        y = 1.0 + x + 1.5 * x**2 + 0.5 * rng.standard_normal(n)
        fit = ols_fit(y, X)
        assert ramsey_reset(fit, X).p_value < 0.01

    def test_linear_truth_usually_passes(self):
        y, X = well_specified(150, seed=14)
        fit = ols_fit(y, X)
        assert ramsey_reset(fit, X).p_value > 0.01

    def test_powers_validated(self):
        y, X = well_specified(40, seed=15)
        fit = ols_fit(y, X)
        with pytest.raises(ConfigError):
            ramsey_reset(fit, X, powers=())
        with pytest.raises(ConfigError):
            ramsey_reset(fit, X, powers=(4,))


class TestRecursiveResiduals:
    def test_matches_growing_window_predictions(self):
        y, X = well_specified(25, seed=16)
        w = recursive_residuals(y, X)
        k = X.shape[1]
        assert w.shape == (25 - k,)
        # Check one entry directly: standardized one-step-ahead error.
        t = 10  # predict row t from rows 0..t-1
        fit = ols_fit(y[:t], X[:t])
        x_t = X[t]
        pred = x_t @ fit.coefficients
        denom = np.sqrt(1.0 + x_t @ np.linalg.inv(X[:t].T @ X[:t]) @ x_t)
        assert w[t - k] == pytest.approx((y[t] - pred) / denom, rel=1e-8)

    def test_unit_variance_under_null(self):
        rng = np.random.Generator(np.random.Philox(key=17))
        ws = []
        for _ in range(40):
            X = np.column_stack([np.ones(50), rng.standard_normal((50, 1))])
            y = X @ np.array([0.5, 1.0]) + rng.standard_normal(50)
            ws.extend(recursive_residuals(y, X))
        assert np.std(ws) == pytest.approx(1.0, abs=0.1)


class TestCusum:
    def test_terminal_cusumsq_is_one(self):
        y, X = well_specified(40, seed=18)
        path = cusumsq(y, X)
        assert path.stats[-1] == pytest.approx(1.0, abs=1e-12)

    def test_stable_on_well_specified_data(self):
        y, X = well_specified(80, seed=19)
        assert cusum(y, X).stable
        assert cusumsq(y, X).stable

    def test_cusum_flags_coefficient_break(self):
        rng = np.random.Generator(np.random.Philox(key=20))
        n = 100
        x = rng.standard_normal(n)
        X = np.column_stack([np.ones(n), x])
        beta_shift = np.where(np.arange(n) < 50, 0.0, 4.0)
        y = 1.0 + x + beta_shift + 0.5 * rng.standard_normal(n)
        assert not cusum(y, X).stable

    def test_cusumsq_flags_variance_break(self):
        rng = np.random.Generator(np.random.Philox(key=21))
        n = 120
        x = rng.standard_normal(n)
        X = np.column_stack([np.ones(n), x])
        sd = np.where(np.arange(n) < 60, 0.3, 3.0)
        y = 1.0 + x + sd * rng.standard_normal(n)
        assert not cusumsq(y, X).stable

    def test_paths_carry_bounds(self):
        y, X = well_specified(40, seed=22)
        p = cusum(y, X)
        assert len(p.stats) == len(p.upper) == len(p.lower) == len(p.t_index)
        assert all(u > l for u, l in zip(p.upper, p.lower))
        assert p.crossing_indices == ()


class TestBattery:
    def test_report_labels_and_members(self):
        y, X = well_specified(60, seed=23)
        report = run_battery(y, X, label="demo equation")
        assert report.label == "demo equation"
        assert report.serial_correlation.name == "breusch-godfrey"
        assert report.heteroskedasticity.name == "breusch-pagan"
        assert report.normality.name == "jarque-bera"
        assert report.functional_form.name == "ramsey-reset"
        assert report.cusum_path.kind == "cusum"
        assert report.cusumsq_path.kind == "cusumsq"

    def test_het_kind_forwarded(self):
        y, X = well_specified(60, seed=24)
        report = run_battery(y, X, het_kind="white-no-cross")
        assert report.heteroskedasticity.name == "white-no-cross"

    def test_without_recursive_paths(self):
        y, X = well_specified(60, seed=25)
        report = run_battery(y, X, with_recursive=False)
        assert report.cusum_path is None and report.cusumsq_path is None
