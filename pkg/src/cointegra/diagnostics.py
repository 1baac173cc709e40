"""Residual diagnostics and recursive-stability tests.

LM tests (serial correlation, heteroskedasticity, normality, functional
form) and the recursive-residual CUSUM / CUSUM-of-squares paths with their
significance bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as spstats

from .errors import ConfigError, InsufficientDataError, NumericalError
from .linreg import RegressionFit, ols_fit

__all__ = [
    "TestOutcome",
    "CusumPath",
    "DiagnosticsReport",
    "breusch_godfrey",
    "het_test",
    "jarque_bera",
    "ramsey_reset",
    "recursive_residuals",
    "cusum",
    "cusumsq",
    "cusum_critical_bound",
    "cusumsq_crossing_constant",
    "run_battery",
]

# Scale factors a of the CUSUM boundary a*(sqrt(n) + 2*(t-k)/sqrt(n)).
_CUSUM_A = {0.01: 1.143, 0.05: 0.948, 0.10: 0.850}

# Crossing constants c0 of the CUSUM-of-squares bounds (t-k)/n +- c0, by
# number of recursive residuals n, at (10%, 5%, 1%). Generated once by exact
# null simulation (500k replications per n, scripts/gen_cusumsq_bounds.py)
# and frozen; linear interpolation between grid points.
_CUSUMSQ_C0 = {
    2: (0.4939, 0.4985, 0.4999),
    3: (0.5698, 0.6177, 0.6571),
    4: (0.5216, 0.6029, 0.6987),
    5: (0.5158, 0.5700, 0.6858),
    6: (0.4884, 0.5523, 0.6537),
    7: (0.4725, 0.5292, 0.6368),
    8: (0.4536, 0.5088, 0.6122),
    9: (0.4367, 0.4909, 0.5914),
    10: (0.4224, 0.4729, 0.5720),
    12: (0.3961, 0.4447, 0.5379),
    15: (0.3657, 0.4102, 0.4967),
    20: (0.3271, 0.3668, 0.4444),
    25: (0.2991, 0.3346, 0.4056),
    30: (0.2770, 0.3101, 0.3758),
    40: (0.2450, 0.2742, 0.3322),
    50: (0.2220, 0.2480, 0.3001),
    60: (0.2046, 0.2287, 0.2765),
    80: (0.1792, 0.2001, 0.2423),
    100: (0.1619, 0.1805, 0.2188),
    150: (0.1339, 0.1492, 0.1801),
    200: (0.1169, 0.1303, 0.1568),
    300: (0.0964, 0.1073, 0.1291),
    500: (0.0752, 0.0836, 0.1008),
}
_C0_LEVEL_COLUMN = {0.10: 0, 0.05: 1, 0.01: 2}


@dataclass(frozen=True)
class TestOutcome:
    """One LM-type diagnostic: statistic, chi-square dof and p-value."""

    name: str
    statistic: float
    dof: int
    p_value: float


@dataclass(frozen=True)
class CusumPath:
    """A recursive-stability path with its significance bounds.

    Indexes t = k+1..T of the regression sample; `stable` is True iff the
    path never leaves the band.
    """

    kind: str
    t_index: tuple[int, ...]
    stats: tuple[float, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    level: float
    stable: bool

    @property
    def crossing_indices(self) -> tuple[int, ...]:
        out = []
        for t, w, lo, hi in zip(self.t_index, self.stats, self.lower, self.upper):
            if not lo <= w <= hi:
                out.append(t)
        return tuple(out)


@dataclass(frozen=True)
class DiagnosticsReport:
    """Battery of residual diagnostics attached to one equation."""

    label: str
    serial_correlation: TestOutcome
    heteroskedasticity: TestOutcome
    normality: TestOutcome
    functional_form: TestOutcome
    cusum_path: CusumPath | None = None
    cusumsq_path: CusumPath | None = None


def _chi2_outcome(name: str, stat: float, dof: int) -> TestOutcome:
    stat = max(float(stat), 0.0)
    return TestOutcome(name, stat, dof, float(spstats.chi2.sf(stat, dof)))


def breusch_godfrey(fit: RegressionFit, X: np.ndarray, order: int = 2) -> TestOutcome:
    """LM test for residual autocorrelation up to `order`.

    Auxiliary regression of the residuals on X plus `order` lagged
    residuals, zero-filled at the start; n*R^2 ~ chi-square(order).
    """
    if order < 1:
        raise ConfigError(f"lag order must be >= 1, got {order}")
    u = np.asarray(fit.residuals, dtype=float)
    n = u.size
    if n <= X.shape[1] + order:
        raise InsufficientDataError("too few residuals for the requested lag order")
    if np.max(np.abs(u)) == 0.0:
        return TestOutcome("breusch-godfrey", 0.0, order, 1.0)
    lagged = np.zeros((n, order))
    for j in range(1, order + 1):
        lagged[j:, j - 1] = u[:-j]
    aux = ols_fit(u, np.column_stack([X, lagged]))
    return _chi2_outcome("breusch-godfrey", n * aux.r2, order)


def het_test(fit: RegressionFit, X: np.ndarray, kind: str = "breusch-pagan") -> TestOutcome:
    """LM heteroskedasticity test on squared residuals.

    "breusch-pagan" regresses u^2 on X; "white-no-cross" on the levels and
    squares of the non-constant columns of X (no cross products).
    """
    if kind not in ("breusch-pagan", "white-no-cross"):
        raise ConfigError(f"unknown heteroskedasticity test {kind!r}")
    u2 = np.asarray(fit.residuals, dtype=float) ** 2
    n = u2.size
    if np.ptp(u2) == 0.0:
        return TestOutcome(kind, 0.0, max(X.shape[1] - 1, 1), 1.0)
    if kind == "breusch-pagan":
        aux_X = np.asarray(X, dtype=float)
    else:
        varying = [X[:, j] for j in range(X.shape[1]) if np.ptp(X[:, j]) > 0.0]
        cols = [np.ones(n)] + varying + [v**2 for v in varying]
        aux_X = np.column_stack(cols)
    aux = ols_fit(u2, aux_X)
    dof = aux_X.shape[1] - 1
    if dof < 1:
        raise ConfigError("heteroskedasticity test needs at least one non-constant regressor")
    return _chi2_outcome(kind, n * aux.r2, dof)


def jarque_bera(u: np.ndarray) -> TestOutcome:
    """Skewness-kurtosis normality test: n*(S^2/6 + (K-3)^2/24) ~ chi2(2)."""
    u = np.asarray(u, dtype=float).reshape(-1)
    n = u.size
    if n < 4:
        raise InsufficientDataError(f"normality test needs >= 4 residuals, got {n}")
    c = u - u.mean()
    m2 = float(np.mean(c**2))
    if m2 == 0.0:
        raise NumericalError("zero-variance residuals: normality test undefined")
    skew = float(np.mean(c**3)) / m2**1.5
    kurt = float(np.mean(c**4)) / m2**2
    return _chi2_outcome("jarque-bera", n * (skew**2 / 6.0 + (kurt - 3.0) ** 2 / 24.0), 2)


def ramsey_reset(
    fit: RegressionFit,
    X: np.ndarray,
    powers: tuple[int, ...] = (2,),
) -> TestOutcome:
    """LM form of the fitted-powers specification test.

    Augments X with the requested powers of the fitted values;
    n*(R2_aug - R2_base)/(1 - R2_aug) ~ chi-square(len(powers)).
    """
    if len(powers) == 0 or any(p not in (2, 3) for p in powers):
        raise ConfigError(f"powers must be a non-empty subset of (2, 3), got {powers}")
    u = np.asarray(fit.residuals, dtype=float)
    n = u.size
    if np.max(np.abs(u)) == 0.0:
        return TestOutcome("ramsey-reset", 0.0, len(powers), 1.0)
    # Scale fitted values before powering; the span (hence R^2) is unchanged.
    yhat = np.asarray(fit.fitted, dtype=float)
    scale = np.max(np.abs(yhat))
    if scale == 0.0:
        scale = 1.0
    extra = np.column_stack([(yhat / scale) ** p for p in sorted(set(powers))])
    aug = ols_fit(np.asarray(fit.fitted + fit.residuals, dtype=float), np.column_stack([X, extra]))
    dof = len(set(powers))
    denom = 1.0 - aug.r2
    if denom <= 0.0:
        return TestOutcome("ramsey-reset", math.inf, dof, 0.0)
    stat = n * (aug.r2 - fit.r2) / denom
    return _chi2_outcome("ramsey-reset", stat, dof)


def recursive_residuals(y: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Standardized one-step-ahead forecast errors from expanding windows."""
    y = np.asarray(y, dtype=float).reshape(-1)
    X = np.asarray(X, dtype=float)
    n, k = X.shape
    if y.size != n:
        raise ConfigError(f"y has {y.size} rows but X has {n}")
    if n <= k + 1:
        raise InsufficientDataError(f"need more than k+1={k + 1} observations, got {n}")
    X0, y0 = X[:k], y[:k]
    xtx = X0.T @ X0
    if np.linalg.matrix_rank(xtx) < k:
        raise NumericalError("singular initial window in recursive residuals")
    xtx_inv = np.linalg.inv(xtx)
    beta = xtx_inv @ (X0.T @ y0)
    w = np.empty(n - k)
    for t in range(k, n):
        x_t = X[t]
        f_t = 1.0 + x_t @ xtx_inv @ x_t
        if f_t <= 0.0 or not np.isfinite(f_t):
            raise NumericalError(f"singular expanding-window design at step {t + 1}")
        err = y[t] - x_t @ beta
        w[t - k] = err / math.sqrt(f_t)
        # Sherman-Morrison update, then coefficient update with the new inverse.
        xtx_inv -= np.outer(xtx_inv @ x_t, x_t @ xtx_inv) / f_t
        beta += xtx_inv @ x_t * err
    return w


def cusum_critical_bound(level: float, t_minus_k: int, n: int) -> float:
    """CUSUM boundary a*(sqrt(n) + 2*(t-k)/sqrt(n)) at offset t-k."""
    if level not in _CUSUM_A:
        raise ConfigError(f"unsupported level {level!r}; have {sorted(_CUSUM_A)}")
    a = _CUSUM_A[level]
    rn = math.sqrt(n)
    return a * (rn + 2.0 * t_minus_k / rn)


def cusumsq_crossing_constant(level: float, n: int) -> float:
    """c0 of the CUSUM-of-squares band, interpolated linearly in n."""
    if level not in _C0_LEVEL_COLUMN:
        raise ConfigError(f"unsupported level {level!r}; have {sorted(_C0_LEVEL_COLUMN)}")
    if n < 2:
        raise InsufficientDataError(f"need >= 2 recursive residuals, got {n}")
    col = _C0_LEVEL_COLUMN[level]
    grid = sorted(_CUSUMSQ_C0)
    if n >= grid[-1]:
        # 1/sqrt(n) is the asymptotic rate of the crossing constant.
        return _CUSUMSQ_C0[grid[-1]][col] * math.sqrt(grid[-1] / n)
    if n in _CUSUMSQ_C0:
        return _CUSUMSQ_C0[n][col]
    hi = min(g for g in grid if g > n)
    lo = max(g for g in grid if g < n)
    frac = (n - lo) / (hi - lo)
    return _CUSUMSQ_C0[lo][col] * (1.0 - frac) + _CUSUMSQ_C0[hi][col] * frac


def cusum(y: np.ndarray, X: np.ndarray, level: float = 0.05) -> CusumPath:
    """Cumulated recursive residuals with straight-line significance bounds."""
    w = recursive_residuals(y, X)
    n = w.size
    k = X.shape[1]
    ssw = float(w @ w)
    if ssw == 0.0:
        path = np.zeros(n)
    else:
        sigma = math.sqrt(ssw / n)
        path = np.cumsum(w) / sigma
    offsets = np.arange(1, n + 1)
    bound = np.array([cusum_critical_bound(level, int(r), n) for r in offsets])
    stable = bool(np.all(np.abs(path) <= bound))
    t_index = tuple(int(k + r) for r in offsets)
    return CusumPath(
        kind="cusum",
        t_index=t_index,
        stats=tuple(float(v) for v in path),
        lower=tuple(float(-b) for b in bound),
        upper=tuple(float(b) for b in bound),
        level=level,
        stable=stable,
    )


def cusumsq(y: np.ndarray, X: np.ndarray, level: float = 0.05) -> CusumPath:
    """Cumulated squared recursive residuals against the uniform ramp band."""
    w = recursive_residuals(y, X)
    n = w.size
    k = X.shape[1]
    expected = np.arange(1, n + 1) / n
    ssw = float(w @ w)
    if ssw == 0.0:
        path = expected.copy()  # perfectly fitting relation: trivially stable
    else:
        path = np.cumsum(w**2) / ssw
    c0 = cusumsq_crossing_constant(level, n)
    lower = expected - c0
    upper = expected + c0
    stable = bool(np.all((path >= lower) & (path <= upper)))
    t_index = tuple(int(k + r) for r in range(1, n + 1))
    return CusumPath(
        kind="cusumsq",
        t_index=t_index,
        stats=tuple(float(v) for v in path),
        lower=tuple(float(v) for v in lower),
        upper=tuple(float(v) for v in upper),
        level=level,
        stable=stable,
    )


def run_battery(
    y: np.ndarray,
    X: np.ndarray,
    fit: RegressionFit | None = None,
    bg_order: int = 2,
    het_kind: str = "breusch-pagan",
    reset_powers: tuple[int, ...] = (2,),
    level: float = 0.05,
    label: str = "",
    with_recursive: bool = True,
) -> DiagnosticsReport:
    """Full diagnostics battery on one equation."""
    fit = fit or ols_fit(y, X)
    return DiagnosticsReport(
        label=label,
        serial_correlation=breusch_godfrey(fit, X, bg_order),
        heteroskedasticity=het_test(fit, X, het_kind),
        normality=jarque_bera(fit.residuals),
        functional_form=ramsey_reset(fit, X, reset_powers),
        cusum_path=cusum(y, X, level) if with_recursive else None,
        cusumsq_path=cusumsq(y, X, level) if with_recursive else None,
    )
