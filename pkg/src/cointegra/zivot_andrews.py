"""Minimum-tau unit-root test allowing one endogenous structural break.

Grid-searches the break date over a trimmed window; every candidate fits an
augmented DF regression with a post-break intercept dummy (model A), a
post-break trend ramp (model B), or both (model C), all on top of a constant
and linear trend. The reported statistic is the infimum of tau over
candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, InsufficientDataError, NumericalError
from .linreg import criteria_from_loglik, ols_fit
from .series import TimeSeries
from .unitroot import LagPolicy, default_max_lags

__all__ = ["ZA_MODELS", "ZaResult", "za_test", "za_critical_value", "candidate_breaks"]

ZA_MODELS = ("A", "B", "C")

# Critical values of the minimum-tau statistic, by model and level.
ZA_CV: dict[str, dict[float, float]] = {
    "A": {0.01: -5.34, 0.05: -4.93, 0.10: -4.58},
    "B": {0.01: -4.93, 0.05: -4.42, 0.10: -4.11},
    "C": {0.01: -5.57, 0.05: -5.08, 0.10: -4.82},
}


@dataclass(frozen=True)
class ZaResult:
    """Outcome of the break-search unit-root test."""

    model: str
    series_name: str
    statistic: float
    break_year: int
    critical_values: dict[float, float]
    per_candidate: dict[int, float]
    lags: int
    trimming: float
    n_obs: int

    def decision(self, level: float = 0.05) -> bool:
        """True iff the unit-root-without-break null is rejected at `level`."""
        if level not in self.critical_values:
            raise ConfigError(f"unsupported level {level!r}; have {sorted(self.critical_values)}")
        return self.statistic < self.critical_values[level]


def za_critical_value(model: str, level: float) -> float:
    _check_model(model)
    if level not in ZA_CV[model]:
        raise ConfigError(f"unsupported level {level!r}; have {sorted(ZA_CV[model])}")
    return ZA_CV[model][level]


def _check_model(model: str) -> None:
    if model not in ZA_MODELS:
        raise ConfigError(f"unknown break model {model!r}; choose from {ZA_MODELS}")


def candidate_breaks(n: int, trimming: float) -> range:
    """1-based candidate break dates TB with trimming*n <= TB <= (1-trimming)*n.

    TB is the last pre-break observation; the break dummy switches on at
    TB + 1, whose calendar year is the reported breakpoint.
    """
    if not 0.0 < trimming < 0.5:
        raise ConfigError(f"trimming must be in (0, 0.5), got {trimming}")
    lo = int(math.ceil(trimming * n))
    hi = int(math.floor((1.0 - trimming) * n))
    lo = max(lo, 2)
    hi = min(hi, n - 2)
    return range(lo, hi + 1)


def _za_design(y: np.ndarray, model: str, tb: int, k: int, start: int | None = None):
    """DF regression rows with break terms for 1-based break date tb.

    Row layout: [y_{t-1}, dy lags 1..k, 1, trend, DU, DT] with DU/DT present
    per model. `start` (0-based index of the first regression row) lets lag
    candidates share one sample.
    """
    T = y.size
    lo = k + 1 if start is None else start
    dy_full = np.diff(y)
    rows = T - lo
    if rows < 1:
        raise InsufficientDataError(f"no usable observations for lag order {k}")
    dy = dy_full[lo - 1:]
    idx = np.arange(lo, T)  # 0-based observation index of each row
    t = idx + 1.0  # 1-based time trend
    du = (t > tb).astype(float)
    dt = np.where(t > tb, t - tb, 0.0)
    cols = [y[lo - 1:T - 1]]
    for j in range(1, k + 1):
        cols.append(dy_full[lo - 1 - j:T - 1 - j])
    cols.append(np.ones(rows))
    cols.append(t)
    if model in ("A", "C"):
        cols.append(du)
    if model in ("B", "C"):
        cols.append(dt)
    return dy, np.column_stack(cols)


def _tau(fit) -> float:
    return float(fit.coefficients[0] / math.sqrt(fit.covariance[0, 0]))


def _lag_cap(model: str, tb: int) -> int:
    # With k lags the sample starts at t = k+2, so DU needs tb >= k+2 to
    # vary; DT additionally needs two pre-break rows (a single zero row
    # leaves it equal to t - tb, collinear with the constant and trend).
    return tb - 2 if model == "A" else tb - 3


def _candidate_tau(y: np.ndarray, model: str, tb: int, policy: LagPolicy) -> tuple[float, int] | None:
    """(tau, chosen lag) for one candidate break date.

    Returns None when no lag order leaves the break columns varying on the
    estimation sample (possible only for the earliest dates of very short
    series under lag selection).
    """
    T = y.size
    cap = _lag_cap(model, tb)
    if policy.mode == "fixed":
        k = policy.k
        if k > cap:
            return None
        dy, X = _za_design(y, model, tb, k)
        fit = ols_fit(dy, X)
        return _tau(fit), k

    # ic-select: cap the search so the common sample keeps both break regimes
    # and leaves the largest candidate model estimable.
    n_det = 4 if model == "C" else 3
    max_k = policy.max_k if policy.max_k is not None else default_max_lags(T)
    max_k = min(max_k, cap)
    while max_k > 0 and (T - (max_k + 1)) < (max_k + 1 + n_det + 1):
        max_k -= 1
    if max_k < 0:
        return None
    start = max_k + 1
    best_k, best_ic = 0, math.inf
    for k in range(max_k + 1):
        dy, X = _za_design(y, model, tb, k, start=start)
        try:
            fit = ols_fit(dy, X)
        except NumericalError:
            continue
        ic = criteria_from_loglik(fit.loglik, fit.n_obs, fit.n_params)
        value = ic.sc if policy.criterion == "sc" else ic.aic
        if value < best_ic - 1e-12:
            best_k, best_ic = k, value
    if not math.isfinite(best_ic):
        return None
    dy, X = _za_design(y, model, tb, best_k)
    return _tau(ols_fit(dy, X)), best_k


def za_test(
    s: TimeSeries,
    model: str = "C",
    trimming: float = 0.15,
    lag_policy: LagPolicy | None = None,
) -> ZaResult:
    """Break-search unit-root test with trimmed grid search.

    Returns the infimum of tau over candidate break dates; ties go to the
    earliest candidate. The reported break year is the first post-break
    observation's calendar year.
    """
    _check_model(model)
    policy = lag_policy or LagPolicy.ic_select()
    y = s.to_array()
    if np.ptp(y) == 0.0:
        raise DataError(f"series {s.name!r} is constant; break test undefined")
    n_det = 4 if model == "C" else 3
    if y.size < n_det + 6:
        raise InsufficientDataError(
            f"series {s.name!r} has {y.size} observations; need >= {n_det + 6} for model {model}"
        )
    cands = candidate_breaks(y.size, trimming)
    if len(cands) == 0:
        raise InsufficientDataError(
            f"trimming {trimming} leaves no candidate break dates for {y.size} observations"
        )

    per_candidate: dict[int, float] = {}
    best: tuple[float, int, int] | None = None  # (tau, tb, lags)
    for tb in cands:
        result = _candidate_tau(y, model, tb, policy)
        if result is None:
            continue  # break terms degenerate at this date; excluded from the search
        tau, k = result
        year = s.start_year + tb  # calendar year of observation tb+1 (1-based)
        per_candidate[year] = tau
        if best is None or tau < best[0]:
            best = (tau, tb, k)
    if best is None:
        raise NumericalError(
            f"no candidate break date admits an estimable model {model} regression"
        )
    tau, tb, k = best
    return ZaResult(
        model=model,
        series_name=s.name,
        statistic=tau,
        break_year=s.start_year + tb,
        critical_values=dict(ZA_CV[model]),
        per_candidate=per_candidate,
        lags=k,
        trimming=trimming,
        n_obs=y.size,
    )
