"""Augmented Dickey-Fuller and Phillips-Perron unit-root tests.

Both tests share one Dickey-Fuller regression builder and one embedded
response-surface table of critical values, so their decisions are mutually
consistent by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, InsufficientDataError, NumericalError
from .linreg import (
    RegressionFit,
    auto_bandwidth,
    criteria_from_loglik,
    newey_west_longrun_variance,
    ols_fit,
)
from .series import TimeSeries

__all__ = [
    "DETERMINISTIC_SPECS",
    "LagPolicy",
    "UnitRootResult",
    "adf_test",
    "pp_test",
    "df_critical_value",
    "default_max_lags",
]

DETERMINISTIC_SPECS = ("none", "constant", "constant+trend")

LEVELS = (0.01, 0.05, 0.10)

# Response-surface coefficients for the Dickey-Fuller t distribution:
# cv(n) = b0 + b1/n + b2/n^2 + b3/n^3, per deterministic spec and level.
_DF_SURFACE: dict[str, dict[float, tuple[float, float, float, float]]] = {
    "none": {
        0.01: (-2.56574, -2.2358, -3.627, 0.0),
        0.05: (-1.94100, -0.2686, -3.365, 31.223),
        0.10: (-1.61682, 0.2656, -2.714, 25.364),
    },
    "constant": {
        0.01: (-3.43035, -6.5393, -16.786, -79.433),
        0.05: (-2.86154, -2.8903, -4.234, -40.040),
        0.10: (-2.56677, -1.5384, -2.809, 0.0),
    },
    "constant+trend": {
        0.01: (-3.95877, -9.0531, -28.428, -134.155),
        0.05: (-3.41049, -4.3904, -9.036, -45.374),
        0.10: (-3.12705, -2.5856, -3.925, -22.380),
    },
}


@dataclass(frozen=True)
class LagPolicy:
    """Lag-augmentation policy for the DF regression.

    ``LagPolicy.fixed(k)`` uses exactly k lagged differences;
    ``LagPolicy.ic_select(max_k, criterion)`` searches 0..max_k by the given
    per-observation criterion ("sc" or "aic") with all candidates evaluated
    on the common largest sample. ``max_k=None`` means the Schwert rule
    floor(12*(T/100)^(1/4)).
    """

    mode: str
    k: int | None = None
    max_k: int | None = None
    criterion: str = "sc"

    def __post_init__(self) -> None:
        if self.mode not in ("fixed", "ic-select"):
            raise ConfigError(f"unknown lag policy {self.mode!r}")
        if self.mode == "fixed":
            if self.k is None or self.k < 0:
                raise ConfigError(f"fixed lag policy needs k >= 0, got {self.k}")
        else:
            if self.max_k is not None and self.max_k < 0:
                raise ConfigError(f"max_k must be >= 0, got {self.max_k}")
            if self.criterion not in ("sc", "aic"):
                raise ConfigError(f"unknown selection criterion {self.criterion!r}")

    @classmethod
    def fixed(cls, k: int) -> "LagPolicy":
        return cls("fixed", k=k)

    @classmethod
    def ic_select(cls, max_k: int | None = None, criterion: str = "sc") -> "LagPolicy":
        return cls("ic-select", max_k=max_k, criterion=criterion)


@dataclass(frozen=True)
class UnitRootResult:
    """Outcome of one unit-root test on one series."""

    test: str
    series_name: str
    spec: str
    statistic: float
    critical_values: dict[float, float]
    n_obs: int
    lags: int | None = None
    bandwidth: int | None = None

    def decision(self, level: float = 0.05) -> bool:
        """True iff the unit-root null is rejected at `level`."""
        if level not in self.critical_values:
            raise ConfigError(f"unsupported level {level!r}; have {sorted(self.critical_values)}")
        return self.statistic < self.critical_values[level]


def default_max_lags(n: int) -> int:
    """Schwert rule floor(12*(n/100)^(1/4))."""
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def df_critical_value(spec: str, n: int, level: float) -> float:
    """Interpolated Dickey-Fuller critical value for sample size n."""
    _check_spec(spec)
    if level not in LEVELS:
        raise ConfigError(f"unsupported level {level!r}; choose from {LEVELS}")
    if n < 1:
        raise InsufficientDataError(f"sample size must be positive, got {n}")
    b0, b1, b2, b3 = _DF_SURFACE[spec][level]
    return b0 + b1 / n + b2 / n**2 + b3 / n**3


def _check_spec(spec: str) -> None:
    if spec not in DETERMINISTIC_SPECS:
        raise ConfigError(f"unknown deterministic spec {spec!r}; choose from {DETERMINISTIC_SPECS}")


def _det_columns(spec: str, n: int, offset: int = 0) -> list[np.ndarray]:
    # Trend counts observations from the start of the full series; `offset`
    # is the index of the first regression row.
    cols: list[np.ndarray] = []
    if spec in ("constant", "constant+trend"):
        cols.append(np.ones(n))
    if spec == "constant+trend":
        cols.append(np.arange(offset + 1, offset + n + 1, dtype=float))
    return cols


def _df_design(y: np.ndarray, spec: str, k: int, start: int | None = None):
    """Rows of the DF regression with k lagged differences.

    Returns (dy, X) where column 0 of X is the lagged level, columns 1..k the
    lagged differences, then the deterministic terms. `start` pins the first
    usable row (0-based index into y) so different k can share one sample.
    """
    T = y.size
    lo = k + 1 if start is None else start
    if lo < k + 1:
        raise InsufficientDataError(f"start {lo} leaves no room for {k} lagged differences")
    dy_full = np.diff(y)
    rows = T - lo
    if rows < 1:
        raise InsufficientDataError(f"no usable observations for lag order {k}")
    dy = dy_full[lo - 1:]
    cols = [y[lo - 1:T - 1]]
    for j in range(1, k + 1):
        cols.append(dy_full[lo - 1 - j:T - 1 - j])
    cols.extend(_det_columns(spec, rows, offset=lo))
    return dy, np.column_stack(cols)


def _n_det_terms(spec: str) -> int:
    return {"none": 0, "constant": 1, "constant+trend": 2}[spec]


def _validate_series(y: np.ndarray, name: str, spec: str, max_lags: int) -> None:
    if np.ptp(y) == 0.0:
        raise DataError(f"series {name!r} is constant; unit-root test undefined")
    need = 4 + max_lags + _n_det_terms(spec)
    if y.size < need:
        raise InsufficientDataError(
            f"series {name!r} has {y.size} observations; "
            f"need >= {need} for spec {spec!r} with {max_lags} lags"
        )


def _fit_df(y: np.ndarray, spec: str, k: int, start: int | None = None) -> RegressionFit:
    dy, X = _df_design(y, spec, k, start=start)
    return ols_fit(dy, X)


def _tau(fit: RegressionFit) -> float:
    return float(fit.coefficients[0] / math.sqrt(fit.covariance[0, 0]))


def _select_lags(y: np.ndarray, spec: str, policy: LagPolicy) -> int:
    max_k = policy.max_k if policy.max_k is not None else default_max_lags(y.size)
    # Selection compares every candidate on the common largest sample, the
    # one that accommodates max_k lags.
    start = max_k + 1
    if y.size - start < max_k + 2 + _n_det_terms(spec):
        # Shrink max_k until the common sample can support the largest model.
        while max_k > 0 and y.size - (max_k + 1) < max_k + 2 + _n_det_terms(spec):
            max_k -= 1
        start = max_k + 1
    best_k, best_ic = 0, math.inf
    for k in range(max_k + 1):
        fit = _fit_df(y, spec, k, start=start)
        ic = criteria_from_loglik(fit.loglik, fit.n_obs, fit.n_params)
        value = ic.sc if policy.criterion == "sc" else ic.aic
        if value < best_ic - 1e-12:
            best_k, best_ic = k, value
    return best_k


def adf_test(
    s: TimeSeries,
    spec: str = "constant",
    lag_policy: LagPolicy | None = None,
) -> UnitRootResult:
    """Augmented Dickey-Fuller test.

    tau is the t-ratio of gamma in
    dy_t = d_t + gamma*y_{t-1} + sum_j delta_j dy_{t-j} + e_t.
    """
    _check_spec(spec)
    policy = lag_policy or LagPolicy.ic_select()
    y = s.to_array()
    if policy.mode == "fixed":
        _validate_series(y, s.name, spec, policy.k)
        k = policy.k
    else:
        # Selection shrinks its own search range; validate the k=0 baseline.
        _validate_series(y, s.name, spec, 0)
        k = _select_lags(y, spec, policy)
    fit = _fit_df(y, spec, k)
    n = fit.n_obs
    cvs = {lv: df_critical_value(spec, n, lv) for lv in LEVELS}
    return UnitRootResult(
        test="adf",
        series_name=s.name,
        spec=spec,
        statistic=_tau(fit),
        critical_values=cvs,
        n_obs=n,
        lags=k,
    )


def pp_test(
    s: TimeSeries,
    spec: str = "constant",
    bandwidth: int | None = None,
) -> UnitRootResult:
    """Phillips-Perron Z_tau test.

    The regression is the lag-0 DF regression; serial correlation is handled
    through the Bartlett long-run variance of its residuals. ``bandwidth``
    ``None`` means the automatic rule floor(4*(n/100)^(2/9)).
    """
    _check_spec(spec)
    y = s.to_array()
    _validate_series(y, s.name, spec, 0)
    fit = _fit_df(y, spec, 0)
    n = fit.n_obs
    bw = auto_bandwidth(n) if bandwidth is None else int(bandwidth)
    if bw < 0:
        raise ConfigError(f"bandwidth must be >= 0, got {bw}")
    if bw >= n:
        raise ConfigError(f"bandwidth {bw} must be < regression sample {n}")

    u = fit.residuals
    gamma0 = float(u @ u) / n
    lrv = newey_west_longrun_variance(u, bw)
    if lrv <= 0.0:
        raise NumericalError("non-positive long-run variance in Phillips-Perron correction")
    tau = _tau(fit)
    se_gamma = math.sqrt(fit.covariance[0, 0])
    z_tau = tau * math.sqrt(gamma0 / lrv) - (
        (lrv - gamma0) * n * se_gamma / (2.0 * math.sqrt(lrv) * fit.sigma2)
    )
    cvs = {lv: df_critical_value(spec, n, lv) for lv in LEVELS}
    return UnitRootResult(
        test="pp",
        series_name=s.name,
        spec=spec,
        statistic=z_tau,
        critical_values=cvs,
        n_obs=n,
        bandwidth=bw,
    )
