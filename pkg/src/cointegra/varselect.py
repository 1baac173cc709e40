"""VAR estimation and lag-order selection.

Equation-by-equation OLS on a common design; the selection table reproduces
the usual quintet (sequential modified LR, FPE, AIC, SC, HQ), every
candidate evaluated on the sample that accommodates the largest lag so the
criteria are comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as spstats

from .errors import ConfigError, InsufficientDataError, NumericalError
from .series import Dataset

__all__ = ["VarFit", "LagSelectionRow", "LagSelectionTable", "var_fit", "lag_selection_table"]

CRITERIA = ("lr", "fpe", "aic", "sc", "hq")


@dataclass(frozen=True)
class VarFit:
    """A fitted VAR(p): intercepts first, then lag-1..lag-p coefficient blocks."""

    names: tuple[str, ...]
    lag_order: int
    coefficients: np.ndarray  # (1 + k*p, k): column j holds equation j
    residuals: np.ndarray  # (T_eff, k)
    sigma: np.ndarray  # (k, k), maximum-likelihood (divide by T_eff)
    loglik: float
    n_obs: int  # effective sample length

    @property
    def k(self) -> int:
        return len(self.names)

    @property
    def n_params_per_eq(self) -> int:
        return 1 + self.k * self.lag_order


def _var_design(Y: np.ndarray, p: int, start: int):
    T, k = Y.shape
    rows = T - start
    cols = [np.ones(rows)]
    for lag in range(1, p + 1):
        cols.append(Y[start - lag:T - lag])
    X = np.column_stack(cols) if p > 0 else np.ones((rows, 1))
    return Y[start:], X


def _fit_common(Y: np.ndarray, p: int, start: int, names: tuple[str, ...]) -> VarFit:
    Yt, X = _var_design(Y, p, start)
    rows, k = Yt.shape
    m = X.shape[1]
    if rows <= m:
        raise InsufficientDataError(
            f"VAR({p}) needs more than {m} observations per equation, got {rows}"
        )
    beta, _, rank, _ = np.linalg.lstsq(X, Yt, rcond=None)
    if rank < m:
        raise NumericalError(f"singular VAR({p}) design (rank {rank} < {m})")
    resid = Yt - X @ beta
    sigma = resid.T @ resid / rows
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0:
        raise NumericalError(f"residual covariance of VAR({p}) is not positive definite")
    loglik = -0.5 * rows * (k * (1.0 + math.log(2.0 * math.pi)) + logdet)
    return VarFit(
        names=names,
        lag_order=p,
        coefficients=beta,
        residuals=resid,
        sigma=sigma,
        loglik=loglik,
        n_obs=rows,
    )


def var_fit(d: Dataset, p: int) -> VarFit:
    """Fit a VAR(p) with intercepts on the largest usable sample."""
    if p < 0:
        raise ConfigError(f"lag order must be >= 0, got {p}")
    Y = d.to_matrix()
    return _fit_common(Y, p, p, d.names)


@dataclass(frozen=True)
class LagSelectionRow:
    lag: int
    loglik: float
    lr: float | None
    lr_pvalue: float | None
    fpe: float
    aic: float
    sc: float
    hq: float


@dataclass(frozen=True)
class LagSelectionTable:
    """Criteria for lags 0..pmax on the common sample, with one star each."""

    rows: tuple[LagSelectionRow, ...]
    starred: dict[str, int]  # criterion -> starred lag
    pmax: int
    n_obs: int
    k: int

    def chosen_lag(self, criterion: str) -> int:
        if criterion not in self.starred:
            raise ConfigError(f"unknown criterion {criterion!r}; choose from {CRITERIA}")
        return self.starred[criterion]


def lag_selection_table(d: Dataset, pmax: int) -> LagSelectionTable:
    """Lag-order criteria table over 0..pmax.

    LR_l = (T - m_l)(ln|S_{l-1}| - ln|S_l|) ~ chi-square(k^2) with m_l the
    per-equation parameter count at lag l, applied sequentially from pmax
    down; the starred LR lag is the largest significant one at 5%.
    FPE_l = ((T + m_l)/(T - m_l))^k |S_l|; AIC/SC/HQ use the per-observation
    convention on the system log-likelihood.
    """
    if pmax < 0:
        raise ConfigError(f"pmax must be >= 0, got {pmax}")
    Y = d.to_matrix()
    T, k = Y.shape
    rows_eff = T - pmax
    if rows_eff <= k * pmax + 1:
        raise InsufficientDataError(
            f"pmax {pmax} leaves {rows_eff} observations for up to {k * pmax + 1} "
            "parameters per equation"
        )

    fits = [_fit_common(Y, p, pmax, d.names) for p in range(pmax + 1)]
    n = float(rows_eff)
    logdets = []
    for f in fits:
        sign, logdet = np.linalg.slogdet(f.sigma)
        logdets.append(logdet)

    rows: list[LagSelectionRow] = []
    for p, f in enumerate(fits):
        m = 1 + k * p
        if n <= m:
            raise InsufficientDataError(f"lag {p} leaves no degrees of freedom")
        lr = lr_p = None
        if p >= 1:
            stat = (n - m) * (logdets[p - 1] - logdets[p])
            lr = float(max(stat, 0.0))
            lr_p = float(spstats.chi2.sf(lr, k * k))
        fpe = ((n + m) / (n - m)) ** k * math.exp(logdets[p])
        total_params = k * m
        base = -2.0 * f.loglik / n
        rows.append(
            LagSelectionRow(
                lag=p,
                loglik=f.loglik,
                lr=lr,
                lr_pvalue=lr_p,
                fpe=float(fpe),
                aic=float(base + 2.0 * total_params / n),
                sc=float(base + total_params * math.log(n) / n),
                hq=float(base + 2.0 * total_params * math.log(math.log(n)) / n),
            )
        )

    starred: dict[str, int] = {}
    # Sequential modified-LR: scan from pmax down, star the first significant.
    starred["lr"] = 0
    for p in range(pmax, 0, -1):
        if rows[p].lr_pvalue is not None and rows[p].lr_pvalue < 0.05:
            starred["lr"] = p
            break
    for crit in ("fpe", "aic", "sc", "hq"):
        values = [getattr(r, crit) for r in rows]
        starred[crit] = int(np.argmin(values))

    return LagSelectionTable(rows=tuple(rows), starred=starred, pmax=pmax, n_obs=rows_eff, k=k)
