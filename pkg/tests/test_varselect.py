"""VAR fitting and lag-order selection criteria."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats as spstats

from cointegra import (
    ConfigError,
    Dataset,
    InsufficientDataError,
    TimeSeries,
    lag_selection_table,
)
from cointegra.varselect import var_fit


def make_var1_dataset(n: int, seed: int, k: int = 2, phi: float = 0.5) -> Dataset:
    rng = np.random.Generator(np.random.Philox(key=seed))
    A = phi * np.eye(k)
    Y = np.zeros((n, k))
    e = rng.standard_normal((n, k))
    for t in range(1, n):
        Y[t] = A @ Y[t - 1] + e[t]
    return Dataset(tuple(
        TimeSeries(f"v{i}", 1900, tuple(Y[:, i])) for i in range(k)
    ))


class TestVarFit:
    def test_recovers_var1_coefficients(self):
        d = make_var1_dataset(2000, seed=5, phi=0.6)
        fit = var_fit(d, 1)
        # coefficients: row 0 intercepts, rows 1..k the lag-1 block
        lag1 = fit.coefficients[1:, :]
        np.testing.assert_allclose(np.diag(lag1), 0.6, atol=0.06)
        np.testing.assert_allclose(fit.coefficients[0], 0.0, atol=0.1)

    def test_residual_moment_identity(self):
        d = make_var1_dataset(120, seed=6)
        fit = var_fit(d, 2)
        np.testing.assert_allclose(
            fit.sigma, fit.residuals.T @ fit.residuals / fit.n_obs, rtol=1e-12)

    def test_effective_sample_drops_p_rows(self):
        d = make_var1_dataset(50, seed=7)
        assert var_fit(d, 3).n_obs == 47

    def test_negative_order_rejected(self):
        d = make_var1_dataset(30, seed=8)
        with pytest.raises(ConfigError):
            var_fit(d, -1)


class TestLagSelectionTable:
    def test_rows_cover_zero_to_pmax_on_common_sample(self):
        d = make_var1_dataset(40, seed=9)
        table = lag_selection_table(d, pmax=3)
        assert [r.lag for r in table.rows] == [0, 1, 2, 3]
        assert table.n_obs == 37  # common sample: T - pmax

    def test_starred_are_minima(self):
        d = make_var1_dataset(60, seed=10)
        table = lag_selection_table(d, pmax=3)
        for crit in ("fpe", "aic", "sc", "hq"):
            values = [getattr(r, crit) for r in table.rows]
            assert values[table.starred[crit]] == min(values)

    def test_lr_sequential_star(self):
        d = make_var1_dataset(60, seed=11)
        table = lag_selection_table(d, pmax=3)
        star = table.starred["lr"]
        # Nothing above the starred lag is significant at 5%.
        for r in table.rows[star + 1:]:
            assert r.lr_pvalue >= 0.05
        if star > 0:
            assert table.rows[star].lr_pvalue < 0.05

    def test_lr_statistic_formula(self):
        d = make_var1_dataset(60, seed=12)
        table = lag_selection_table(d, pmax=2)
        k = table.k
        n = float(table.n_obs)
        for p in (1, 2):
            m = 1 + k * p
            s_prev = np.linalg.slogdet(var_fit_common(d, p - 1, 2))[1]
            s_cur = np.linalg.slogdet(var_fit_common(d, p, 2))[1]
            expected = max((n - m) * (s_prev - s_cur), 0.0)
            assert table.rows[p].lr == pytest.approx(expected, rel=1e-10)
            assert table.rows[p].lr_pvalue == pytest.approx(
                spstats.chi2.sf(expected, k * k), rel=1e-10)

    def test_fpe_formula(self):
        d = make_var1_dataset(45, seed=13)
        table = lag_selection_table(d, pmax=1)
        k, n = table.k, float(table.n_obs)
        for p in (0, 1):
            m = 1 + k * p
            logdet = np.linalg.slogdet(var_fit_common(d, p, 1))[1]
            expected = ((n + m) / (n - m)) ** k * math.exp(logdet)
            assert table.rows[p].fpe == pytest.approx(expected, rel=1e-10)

    def test_true_var1_usually_selected(self):
        hits = 0
        for seed in range(12):
            d = make_var1_dataset(200, seed=100 + seed, phi=0.7)
            table = lag_selection_table(d, pmax=3)
            hits += table.starred["sc"] == 1
        assert hits >= 9

    def test_chosen_lag_validates_criterion(self):
        d = make_var1_dataset(40, seed=14)
        table = lag_selection_table(d, pmax=2)
        assert table.chosen_lag("aic") == table.starred["aic"]
        with pytest.raises(ConfigError):
            table.chosen_lag("r2")

    def test_insufficient_data_rejected(self):
        d = make_var1_dataset(10, seed=15, k=3)
        with pytest.raises(InsufficientDataError):
            lag_selection_table(d, pmax=3)

    def test_macro_fixture_table_shape(self, macro_dataset, macro_config):
        table = lag_selection_table(macro_dataset.select(macro_config.symbols()),
                                    pmax=2)
        assert table.k == 5
        assert table.rows[0].lr is None and table.rows[0].lr_pvalue is None
        assert set(table.starred) == {"lr", "fpe", "aic", "sc", "hq"}


def var_fit_common(d: Dataset, p: int, pmax: int) -> np.ndarray:
    """Residual MLE covariance of VAR(p) fitted on the pmax-common sample."""
    from cointegra.varselect import _fit_common

    return _fit_common(d.to_matrix(), p, pmax, d.names).sigma
