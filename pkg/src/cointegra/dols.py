"""Dynamic OLS estimation of a long-run cointegrating regression.

The static levels regression is augmented with leads and lags of the
differenced regressors so the level coefficients are asymptotically free of
endogeneity bias; their covariance rescales the classical OLS covariance by
the ratio of the residual long-run variance to the residual variance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InsufficientDataError
from .linreg import (
    CovarianceKind,
    auto_bandwidth,
    criteria_from_loglik,
    newey_west_longrun_variance,
    ols_fit,
)
from .series import Dataset

__all__ = ["DolsSpec", "DolsFit", "dols_fit", "select_leads_lags"]

_BANDWIDTH_POLICIES = ("fixed", "automatic")


@dataclass(frozen=True)
class DolsSpec:
    """Lead/lag augmentation order and HAC bandwidth policy."""

    leads: int = 1
    lags: int = 1
    hac_bandwidth_policy: str = "automatic"
    hac_bandwidth: int = 0  # consulted only under the fixed policy

    def __post_init__(self) -> None:
        if self.leads < 0 or self.lags < 0:
            raise ConfigError(f"leads/lags must be >= 0, got ({self.leads}, {self.lags})")
        if self.hac_bandwidth_policy not in _BANDWIDTH_POLICIES:
            raise ConfigError(
                f"unknown bandwidth policy {self.hac_bandwidth_policy!r}; "
                f"choose from {_BANDWIDTH_POLICIES}"
            )
        if self.hac_bandwidth < 0:
            raise ConfigError(f"bandwidth must be >= 0, got {self.hac_bandwidth}")


@dataclass(frozen=True)
class DolsFit:
    """Long-run level coefficients with rescaled standard errors; the
    lead/lag nuisance coefficients are reported separately and never enter
    the long-run table."""

    dependent: str
    regressors: tuple[str, ...]
    longrun_names: tuple[str, ...]  # "const" then the level regressors
    longrun_coefficients: np.ndarray
    hac_standard_errors: np.ndarray
    nuisance_names: tuple[str, ...]
    nuisance_coefficients: np.ndarray
    residuals: np.ndarray
    spec: DolsSpec
    bandwidth: int
    n_obs: int
    loglik: float
    r2: float

    @property
    def t_ratios(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.longrun_coefficients / self.hac_standard_errors


def _dols_design(Y: np.ndarray, X: np.ndarray, spec: DolsSpec, start: int, stop: int):
    """Rows are level times ``start..stop-1``; ``start`` must leave room for
    ``spec.lags`` lagged differences, ``stop`` for ``spec.leads`` leads.

    leads = lags = 0 means no augmentation at all (the static regression);
    otherwise the contemporaneous difference rides along with the requested
    leads and lags.
    """
    dX = np.diff(X, axis=0)  # row t-1 holds x_t - x_{t-1}
    rows = stop - start
    blocks = [np.ones((rows, 1)), X[start:stop]]
    offsets = list(range(-spec.lags, spec.leads + 1)) if spec.leads + spec.lags > 0 else []
    for j in offsets:
        blocks.append(dX[start + j - 1:stop + j - 1])
    return Y[start:stop], np.hstack(blocks), offsets


def _nuisance_names(regressors: tuple[str, ...], offsets: list[int]) -> tuple[str, ...]:
    names = []
    for j in offsets:
        tag = "t" if j == 0 else (f"t+{j}" if j > 0 else f"t-{-j}")
        names.extend(f"d_{r}({tag})" for r in regressors)
    return tuple(names)


def dols_fit(d: Dataset, dependent: str, regressors: tuple[str, ...] | list[str],
             spec: DolsSpec | None = None) -> DolsFit:
    """Estimate y_t = b0 + b'x_t + sum_j c_j' dx_{t+j} + u_t by OLS.

    The reported covariance of (b0, b) is the classical OLS covariance
    rescaled by lambda_hat / gamma0_hat, the ratio of Bartlett long-run to
    contemporaneous residual variance, which leaves leads=lags=0 with
    bandwidth 0 numerically identical to the static regression.
    """
    spec = spec or DolsSpec()
    regressors = tuple(regressors)
    if not regressors:
        raise ConfigError("DOLS needs at least one regressor")
    if dependent in regressors:
        raise ConfigError(f"dependent series {dependent!r} cannot also be a regressor")
    y = np.asarray(d[dependent].values)
    X = np.column_stack([d[r].values for r in regressors])
    T = len(y)
    start = spec.lags + 1 if spec.leads + spec.lags > 0 else 0
    stop = T - spec.leads
    k_level = 1 + len(regressors)
    n_terms = spec.leads + spec.lags + 1 if spec.leads + spec.lags > 0 else 0
    n_params = k_level + n_terms * len(regressors)
    if stop - start <= n_params:
        raise InsufficientDataError(
            f"{T} observations leave {max(stop - start, 0)} usable rows after "
            f"trimming leads={spec.leads}, lags={spec.lags}; need > {n_params}"
        )

    yt, Z, offsets = _dols_design(y, X, spec, start, stop)
    fit = ols_fit(yt, Z, cov=CovarianceKind.classical())
    n = fit.n_obs

    if spec.hac_bandwidth_policy == "fixed":
        bw = spec.hac_bandwidth
    else:
        bw = auto_bandwidth(n)
    gamma0 = fit.rss / n
    if gamma0 > 0.0:
        scale = newey_west_longrun_variance(fit.residuals, bw) / gamma0
    else:
        scale = 0.0
    cov = fit.covariance * scale

    coefs = fit.coefficients
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return DolsFit(
        dependent=dependent,
        regressors=regressors,
        longrun_names=("const",) + regressors,
        longrun_coefficients=coefs[:k_level].copy(),
        hac_standard_errors=se[:k_level].copy(),
        nuisance_names=_nuisance_names(regressors, offsets),
        nuisance_coefficients=coefs[k_level:].copy(),
        residuals=fit.residuals,
        spec=spec,
        bandwidth=bw,
        n_obs=n,
        loglik=fit.loglik,
        r2=fit.r2,
    )


def select_leads_lags(d: Dataset, dependent: str, regressors: tuple[str, ...] | list[str],
                      max_order: int) -> DolsSpec:
    """Symmetric lead/lag order minimizing SC over 0..max_order.

    Every candidate is evaluated on the common sample that accommodates the
    largest order, so the criteria are comparable; ties go to the smaller
    order.
    """
    if max_order < 0:
        raise ConfigError(f"max_order must be >= 0, got {max_order}")
    regressors = tuple(regressors)
    y = np.asarray(d[dependent].values)
    X = np.column_stack([d[r].values for r in regressors])
    T = len(y)
    start = max_order + 1
    stop = T - max_order
    n_common = stop - start
    worst_params = 1 + len(regressors) * (2 + 2 * max_order)
    if n_common <= worst_params:
        raise InsufficientDataError(
            f"{T} observations leave {max(n_common, 0)} common rows for up to "
            f"{worst_params} parameters; reduce max_order"
        )

    best_q = 0
    best_sc = float("inf")
    for q in range(max_order + 1):
        spec = DolsSpec(leads=q, lags=q)
        yt, Z, _ = _dols_design(y, X, spec, start, stop)
        fit = ols_fit(yt, Z, cov=CovarianceKind.classical())
        sc = criteria_from_loglik(fit.loglik, fit.n_obs, fit.n_params).sc
        if sc < best_sc - 1e-12:
            best_sc = sc
            best_q = q
    return DolsSpec(leads=best_q, lags=best_q)
