"""OLS with classical/White/Newey-West covariances and Gaussian fit metrics.

This is the numerical substrate for every estimator in the package: fits go
through one QR path, and all information criteria share the same
per-observation convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConfigError, InsufficientDataError, NumericalError

__all__ = [
    "CovarianceKind",
    "RegressionFit",
    "InfoCriteria",
    "ols_fit",
    "newey_west_longrun_variance",
    "auto_bandwidth",
    "info_criteria",
    "criteria_from_loglik",
]

_RCOND = 1e-10


@dataclass(frozen=True)
class CovarianceKind:
    """Coefficient-covariance estimator tag.

    Use the constructors: ``CovarianceKind.classical()``,
    ``CovarianceKind.white()``, ``CovarianceKind.newey_west(bandwidth)``.
    A ``None`` bandwidth means the automatic rule floor(4*(n/100)^(2/9)).
    """

    kind: str
    bandwidth: int | None = None

    _KINDS = ("classical", "white-hc0", "newey-west")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ConfigError(f"unknown covariance kind {self.kind!r}")
        if self.kind != "newey-west" and self.bandwidth is not None:
            raise ConfigError(f"bandwidth is only meaningful for newey-west, got {self.kind!r}")
        if self.bandwidth is not None and self.bandwidth < 0:
            raise ConfigError(f"bandwidth must be >= 0, got {self.bandwidth}")

    @classmethod
    def classical(cls) -> "CovarianceKind":
        return cls("classical")

    @classmethod
    def white(cls) -> "CovarianceKind":
        return cls("white-hc0")

    @classmethod
    def newey_west(cls, bandwidth: int | None = None) -> "CovarianceKind":
        return cls("newey-west", bandwidth)


@dataclass(frozen=True)
class RegressionFit:
    """Everything downstream consumers need from one OLS fit."""

    coefficients: np.ndarray
    covariance: np.ndarray
    cov_kind: CovarianceKind
    residuals: np.ndarray
    fitted: np.ndarray
    sigma2: float
    loglik: float
    n_obs: int
    n_params: int
    r2: float
    rss: float

    @property
    def std_errors(self) -> np.ndarray:
        return np.sqrt(np.diag(self.covariance))

    @property
    def t_ratios(self) -> np.ndarray:
        return self.coefficients / self.std_errors


@dataclass(frozen=True)
class InfoCriteria:
    aic: float
    sc: float
    hq: float


def _first_dependent_column(X: np.ndarray, rank: int) -> int:
    # Pivoted QR pushes the dependent columns behind the first `rank` pivots;
    # report the earliest such column in the caller's ordering.
    _, _, piv = scipy.linalg.qr(X, mode="economic", pivoting=True)
    return int(np.min(piv[rank:]))


def ols_fit(
    y: np.ndarray,
    X: np.ndarray,
    cov: CovarianceKind | None = None,
) -> RegressionFit:
    """Least-squares fit of y on the columns of X via QR.

    Parameters
    ----------
    y : (n,) array
    X : (n, k) array
        Design matrix, constants included explicitly by the caller.
    cov : CovarianceKind, optional
        Defaults to the classical homoskedastic covariance.

    Raises
    ------
    NumericalError
        If X is rank deficient; the message names the first linearly
        dependent column.
    InsufficientDataError
        If n <= k, so sigma2 is undefined.
    """
    cov = cov or CovarianceKind.classical()
    y = np.asarray(y, dtype=float).reshape(-1)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ConfigError(f"X must be 2-dimensional, got shape {X.shape}")
    n, k = X.shape
    if y.shape[0] != n:
        raise ConfigError(f"y has {y.shape[0]} rows but X has {n}")
    if n <= k:
        raise InsufficientDataError(f"need more observations ({n}) than parameters ({k})")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(X))):
        raise NumericalError("non-finite values in regression inputs")

    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    scale = max(diag.max(), 1.0)
    if diag.min() <= _RCOND * scale:
        rank = int(np.sum(diag > _RCOND * scale))
        col = _first_dependent_column(X, rank)
        raise NumericalError(
            f"singular design: column {col} is linearly dependent on the others"
        )

    beta = scipy.linalg.solve_triangular(R, Q.T @ y)
    fitted = X @ beta
    resid = y - fitted
    rss = float(resid @ resid)
    sigma2 = rss / (n - k)

    # (X'X)^-1 = R^-1 R^-T from the already-computed QR factor.
    Rinv = scipy.linalg.solve_triangular(R, np.eye(k))
    xtx_inv = Rinv @ Rinv.T

    if cov.kind == "classical":
        V = sigma2 * xtx_inv
    elif cov.kind == "white-hc0":
        meat = (X * resid[:, None] ** 2).T @ X
        V = xtx_inv @ meat @ xtx_inv
    else:
        bw = auto_bandwidth(n) if cov.bandwidth is None else cov.bandwidth
        if bw >= n:
            raise ConfigError(f"newey-west bandwidth {bw} must be < n_obs {n}")
        xu = X * resid[:, None]
        meat = xu.T @ xu
        for j in range(1, bw + 1):
            w = 1.0 - j / (bw + 1.0)
            gamma = xu[j:].T @ xu[:-j]
            meat += w * (gamma + gamma.T)
        V = xtx_inv @ meat @ xtx_inv
        cov = CovarianceKind.newey_west(bw)

    has_const = bool(np.any((np.ptp(X, axis=0) == 0.0) & (X[0] != 0.0)))
    if has_const:
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        tss = float(y @ y)
    r2 = 1.0 - rss / tss if tss > 0.0 else 1.0

    loglik = -0.5 * n * (1.0 + math.log(2.0 * math.pi) + math.log(rss / n)) if rss > 0.0 else math.inf

    return RegressionFit(
        coefficients=beta,
        covariance=V,
        cov_kind=cov,
        residuals=resid,
        fitted=fitted,
        sigma2=sigma2,
        loglik=loglik,
        n_obs=n,
        n_params=k,
        r2=r2,
        rss=rss,
    )


def auto_bandwidth(n: int) -> int:
    """Newey-West automatic truncation lag: floor(4*(n/100)^(2/9))."""
    if n < 1:
        raise InsufficientDataError(f"bandwidth rule needs n >= 1, got {n}")
    return int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


def newey_west_longrun_variance(u: np.ndarray, bandwidth: int | None = None) -> float:
    """Bartlett-kernel long-run variance of a scalar series.

    gamma_0 is the sample second moment (1/n); lagged autocovariances use the
    1/(n-j) scaling. The Bartlett weights are w_j = 1 - j/(bandwidth+1). The
    result is floored at zero: the 1/(n-j) scaling can produce slightly
    negative estimates on adversarial inputs, and the contract is a variance.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    n = u.size
    if n == 0:
        raise InsufficientDataError("long-run variance of an empty series")
    if not np.all(np.isfinite(u)):
        raise NumericalError("non-finite values in long-run variance input")
    bw = auto_bandwidth(n) if bandwidth is None else int(bandwidth)
    if bw < 0:
        raise ConfigError(f"bandwidth must be >= 0, got {bw}")
    if bw >= n:
        raise ConfigError(f"bandwidth {bw} must be < series length {n}")
    lv = float(u @ u) / n
    for j in range(1, bw + 1):
        gamma_j = float(u[j:] @ u[:-j]) / (n - j)
        lv += 2.0 * (1.0 - j / (bw + 1.0)) * gamma_j
    return max(lv, 0.0)


def criteria_from_loglik(loglik: float, n_obs: int, n_params: int) -> InfoCriteria:
    """Per-observation information criteria from a Gaussian log-likelihood.

    aic = -2*l/n + 2*k/n, sc = -2*l/n + k*ln(n)/n, hq = -2*l/n + 2*k*ln(ln(n))/n.
    """
    if n_obs < 3:
        raise InsufficientDataError(f"information criteria need n >= 3, got {n_obs}")
    n = float(n_obs)
    k = float(n_params)
    base = -2.0 * loglik / n
    return InfoCriteria(
        aic=base + 2.0 * k / n,
        sc=base + k * math.log(n) / n,
        hq=base + 2.0 * k * math.log(math.log(n)) / n,
    )


def info_criteria(fit: RegressionFit) -> InfoCriteria:
    """Per-observation AIC/SC/HQ of a fitted regression."""
    return criteria_from_loglik(fit.loglik, fit.n_obs, fit.n_params)
