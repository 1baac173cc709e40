"""Johansen eigenproblem, rank sequence, and embedded critical values."""

from __future__ import annotations

import numpy as np
import pytest

from cointegra import (
    ConfigError,
    Dataset,
    NumericalError,
    TimeSeries,
    VecmSpec,
    johansen_critical_values,
    johansen_eigen,
    rank_test,
)
from cointegra.johansen import maxeig_statistic, trace_statistic

from conftest import make_random_walk

# 5% unrestricted-constant critical values quoted in standard rank tables.
TRACE_5PCT = {4: 47.856, 3: 29.797, 2: 15.495, 1: 3.841, 5: 69.819}
MAXEIG_5PCT = {5: 33.877, 4: 27.584, 3: 21.132, 2: 14.265, 1: 3.841}


def independent_walks(k: int, n: int, seed: int) -> Dataset:
    return Dataset(tuple(
        make_random_walk(f"w{i}", n, seed=seed * 100 + i) for i in range(k)
    ))


def cointegrated_pair(n: int, seed: int) -> Dataset:
    rng = np.random.Generator(np.random.Philox(key=seed))
    x = np.cumsum(rng.standard_normal(n))
    y = 2.0 * x + 0.5 * rng.standard_normal(n)
    return Dataset((TimeSeries("y", 1900, tuple(y)),
                    TimeSeries("x", 1900, tuple(x))))


class TestCriticalValues:
    @pytest.mark.parametrize("n_r,expected", sorted(TRACE_5PCT.items()))
    def test_trace_constants(self, n_r, expected):
        assert johansen_critical_values(n_r).trace_cv == expected

    @pytest.mark.parametrize("n_r,expected", sorted(MAXEIG_5PCT.items()))
    def test_maxeig_constants(self, n_r, expected):
        assert johansen_critical_values(n_r).maxeig_cv == expected

    def test_only_case3_5pct_embedded(self):
        with pytest.raises(ConfigError):
            johansen_critical_values(2, det_case=2)
        with pytest.raises(ConfigError):
            johansen_critical_values(2, level=0.01)
        with pytest.raises(ConfigError):
            johansen_critical_values(13)


class TestAgainstReference:
    def test_eigenvalues_match_frozen_values(self, reference_dataset, reference_values):
        ref = reference_values["johansen"]
        e = johansen_eigen(reference_dataset,
                           VecmSpec(det_case=ref["det_case"], diff_lags=ref["diff_lags"]))
        np.testing.assert_allclose(e.eigenvalues, ref["eigenvalues"],
                                   rtol=0, atol=1e-6)

    def test_trace_statistics_match_frozen_values(self, reference_dataset, reference_values):
        ref = reference_values["johansen"]
        e = johansen_eigen(reference_dataset,
                           VecmSpec(det_case=ref["det_case"], diff_lags=ref["diff_lags"]))
        traces = [trace_statistic(e, r) for r in range(3)]
        np.testing.assert_allclose(traces, ref["trace_stats"], rtol=0, atol=1e-6)


class TestEigenSolution:
    def test_eigenvalues_sorted_in_unit_interval(self):
        e = johansen_eigen(independent_walks(3, 80, seed=3))
        lam = np.asarray(e.eigenvalues)
        assert np.all(lam[:-1] >= lam[1:])
        assert np.all(lam >= 0.0) and np.all(lam < 1.0)

    def test_trace_decomposes_into_maxeig_sum(self):
        e = johansen_eigen(independent_walks(4, 90, seed=4))
        k = len(e.eigenvalues)
        for r in range(k):
            parts = sum(maxeig_statistic(e, j) for j in range(r, k))
            assert trace_statistic(e, r) == pytest.approx(parts, abs=1e-9)

    def test_trace_minus_next_trace_is_maxeig(self):
        e = johansen_eigen(independent_walks(3, 70, seed=5))
        for r in range(2):
            diff = trace_statistic(e, r) - trace_statistic(e, r + 1)
            assert diff == pytest.approx(maxeig_statistic(e, r), abs=1e-9)

    def test_collinear_system_rejected(self):
        base = make_random_walk("a", 60, seed=6)
        dup = TimeSeries("b", base.start_year, tuple(2.0 * v for v in base.values))
        with pytest.raises(NumericalError):
            johansen_eigen(Dataset((base, dup)))

    def test_invalid_spec_rejected(self):
        with pytest.raises(ConfigError):
            VecmSpec(det_case=7)
        with pytest.raises(ConfigError):
            VecmSpec(diff_lags=-1)

    def test_univariate_rejected(self):
        with pytest.raises(ConfigError):
            johansen_eigen(Dataset((make_random_walk("a", 50, seed=1),)))


class TestRankSequence:
    def test_cointegrated_pair_found(self):
        hits = 0
        for seed in range(10):
            result = rank_test(johansen_eigen(cointegrated_pair(200, seed=seed + 1)))
            hits += result.decided_rank >= 1
        assert hits >= 8

    def test_independent_walks_mostly_rank_zero(self):
        zeros = 0
        for seed in range(12):
            result = rank_test(johansen_eigen(independent_walks(3, 150, seed=seed + 50)))
            zeros += result.decided_rank == 0
        assert zeros >= 8

    def test_decided_rank_is_first_non_rejection(self):
        result = rank_test(johansen_eigen(independent_walks(3, 100, seed=9)))
        for row in result.rows:
            if row.null_rank < result.decided_rank:
                assert row.trace_reject
            elif row.null_rank == result.decided_rank:
                assert not row.trace_reject

    def test_rows_carry_embedded_critical_values(self):
        result = rank_test(johansen_eigen(independent_walks(3, 100, seed=10)))
        assert [row.trace_cv for row in result.rows] == [29.797, 15.495, 3.841]
        assert [row.maxeig_cv for row in result.rows] == [21.132, 14.265, 3.841]

    def test_level_validated(self):
        e = johansen_eigen(independent_walks(2, 60, seed=11))
        with pytest.raises(ConfigError):
            rank_test(e, level=0.01)
