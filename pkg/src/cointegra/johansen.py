"""Reduced-rank cointegration analysis of a VAR system.

Residual regressions concentrate out the short-run dynamics, the
generalized eigenproblem |lambda*S11 - S10 S00^-1 S01| = 0 is solved in
symmetrized form, and trace / maximum-eigenvalue statistics are compared to
the embedded 5% table for the unrestricted-constant case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import ConfigError, InsufficientDataError, NumericalError
from .series import Dataset

__all__ = [
    "VecmSpec",
    "EigenSolution",
    "CriticalValuePair",
    "RankTestRow",
    "RankTestResult",
    "johansen_eigen",
    "trace_statistic",
    "maxeig_statistic",
    "johansen_critical_values",
    "rank_test",
]

DET_CASES = {
    1: "no deterministic terms",
    2: "restricted constant",
    3: "unrestricted constant",
    4: "unrestricted constant, restricted trend",
}

# 5% critical values for the unrestricted-constant case, indexed by n - r =
# 1..12: (trace, max-eigenvalue). Standard published table, three decimals.
_CV_CASE3_5PCT = {
    1: (3.841, 3.841),
    2: (15.495, 14.265),
    3: (29.797, 21.132),
    4: (47.856, 27.584),
    5: (69.819, 33.877),
    6: (95.754, 40.078),
    7: (125.615, 46.231),
    8: (159.530, 52.363),
    9: (197.371, 58.434),
    10: (239.235, 64.505),
    11: (285.143, 70.535),
    12: (334.984, 76.578),
}

_EIG_TOL = 1e-10


@dataclass(frozen=True)
class VecmSpec:
    """Deterministic case (1..4) and number of lagged-difference terms."""

    det_case: int = 3
    diff_lags: int = 1

    def __post_init__(self) -> None:
        if self.det_case not in DET_CASES:
            raise ConfigError(f"unknown deterministic case {self.det_case}; choose from 1..4")
        if self.diff_lags < 0:
            raise ConfigError(f"diff_lags must be >= 0, got {self.diff_lags}")


@dataclass(frozen=True)
class EigenSolution:
    """Eigenvalues (descending), candidate cointegrating vectors, and the
    moment matrices retained for audit."""

    names: tuple[str, ...]
    det_case: int
    diff_lags: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column i pairs with eigenvalues[i]
    s00: np.ndarray
    s01: np.ndarray
    s11: np.ndarray
    n_obs: int  # effective sample length

    @property
    def k(self) -> int:
        return len(self.names)


def _residualize(A: np.ndarray, W: np.ndarray | None) -> np.ndarray:
    if W is None or W.shape[1] == 0:
        return A
    coef, _, _, _ = np.linalg.lstsq(W, A, rcond=None)
    return A - W @ coef


def _name_collinear(names: tuple[str, ...], S: np.ndarray, which: str) -> NumericalError:
    # Point at the series loading hardest on the null direction.
    vals, vecs = np.linalg.eigh(S)
    v = np.abs(vecs[:, 0])
    culprits = [names[i] for i in range(len(v)) if v[i] >= 0.5 * v.max() and i < len(names)]
    if not culprits:
        culprits = ["deterministic term"]
    return NumericalError(
        f"collinear system: {which} moment matrix is singular "
        f"(culprit series: {', '.join(culprits)})"
    )


def johansen_eigen(d: Dataset, spec: VecmSpec | None = None) -> EigenSolution:
    """Residual-regression eigenvalues of the cointegration problem.

    R0 are the residuals of the differences, R1 those of the lagged levels
    (augmented by a constant for case 2, a trend for case 4), both after
    regressing out lagged differences (and a constant for cases 3/4).
    """
    spec = spec or VecmSpec()
    Y = d.to_matrix()
    T, k = Y.shape
    if k < 2:
        raise ConfigError("cointegration analysis needs at least two series")
    lags = spec.diff_lags
    rows = T - lags - 1
    min_rows = k * (lags + 1) + 3
    if rows < min_rows:
        raise InsufficientDataError(
            f"{T} observations leave {rows} usable rows; need >= {min_rows} "
            f"for k={k}, diff_lags={lags}"
        )

    dY = np.diff(Y, axis=0)  # row t: y_{t+1} - y_t
    D0 = dY[lags:]  # dependent differences
    Z1 = Y[lags:T - 1]  # lagged levels y_{t-1}

    wcols = []
    for j in range(1, lags + 1):
        wcols.append(dY[lags - j:-j])
    if spec.det_case in (3, 4):
        wcols.append(np.ones((rows, 1)))
    W = np.hstack(wcols) if wcols else None

    if spec.det_case == 2:
        Z1 = np.hstack([Z1, np.ones((rows, 1))])
    elif spec.det_case == 4:
        Z1 = np.hstack([Z1, np.arange(1, rows + 1, dtype=float).reshape(-1, 1)])

    R0 = _residualize(D0, W)
    R1 = _residualize(Z1, W)

    s00 = R0.T @ R0 / rows
    s01 = R0.T @ R1 / rows
    s11 = R1.T @ R1 / rows

    try:
        l00 = np.linalg.cholesky(s00)
    except np.linalg.LinAlgError:
        raise _name_collinear(d.names, s00, "difference") from None
    try:
        l11 = np.linalg.cholesky(s11)
    except np.linalg.LinAlgError:
        raise _name_collinear(d.names, s11, "level") from None
    cond = np.linalg.cond(s11)
    if not np.isfinite(cond) or cond > 1.0 / _EIG_TOL:
        raise _name_collinear(d.names, s11, "level")

    # M = L11^-1 S10 S00^-1 S01 L11^-T is symmetric psd with the same
    # eigenvalues as the pencil (S10 S00^-1 S01, S11).
    a = scipy.linalg.solve_triangular(l00, s01, lower=True)  # L00^-1 S01
    b = scipy.linalg.solve_triangular(l11, a.T, lower=True)  # L11^-1 S10 L00^-T
    M = b @ b.T
    vals, vecs = np.linalg.eigh(M)
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]

    vals = np.where((vals < 0.0) & (vals > -1e-12), 0.0, vals)
    if np.any(vals < 0.0) or np.any(vals >= 1.0):
        raise NumericalError(f"eigenvalues outside [0, 1): {vals}")

    beta = scipy.linalg.solve_triangular(l11, vecs, lower=True, trans="T")
    if spec.det_case in (2, 4):
        # The augmented problem has k+1 eigenvalues; the smallest is an
        # exact zero of the rank-deficient pencil and carries no information.
        vals = vals[:k]
        beta = beta[:, :k]
    return EigenSolution(
        names=d.names,
        det_case=spec.det_case,
        diff_lags=lags,
        eigenvalues=vals,
        eigenvectors=beta,
        s00=s00,
        s01=s01,
        s11=s11,
        n_obs=rows,
    )


def _check_rank_arg(e: EigenSolution, r: int) -> None:
    if not 0 <= r < len(e.eigenvalues):
        raise ConfigError(f"rank {r} out of range 0..{len(e.eigenvalues) - 1}")


def trace_statistic(e: EigenSolution, r: int) -> float:
    """-T * sum_{i>r} ln(1 - lambda_i)."""
    _check_rank_arg(e, r)
    lam = e.eigenvalues[r:]
    if np.any(lam >= 1.0):
        raise NumericalError("eigenvalue >= 1: trace statistic undefined")
    return float(-e.n_obs * np.sum(np.log1p(-lam)))


def maxeig_statistic(e: EigenSolution, r: int) -> float:
    """-T * ln(1 - lambda_{r+1})."""
    _check_rank_arg(e, r)
    lam = e.eigenvalues[r]
    if lam >= 1.0:
        raise NumericalError("eigenvalue >= 1: max-eigenvalue statistic undefined")
    return float(-e.n_obs * math.log1p(-lam))


class CriticalValuePair(NamedTuple):
    trace_cv: float
    maxeig_cv: float


def johansen_critical_values(
    n_minus_r: int, det_case: int = 3, level: float = 0.05
) -> CriticalValuePair:
    """(trace, max-eigenvalue) critical values from the embedded table."""
    if det_case != 3:
        raise ConfigError(
            f"critical values embedded for the unrestricted-constant case only, got case {det_case}"
        )
    if level != 0.05:
        raise ConfigError(f"critical values embedded for the 5% level only, got {level!r}")
    if n_minus_r not in _CV_CASE3_5PCT:
        raise ConfigError(f"n - r = {n_minus_r} outside the embedded table range 1..12")
    return CriticalValuePair(*_CV_CASE3_5PCT[n_minus_r])


@dataclass(frozen=True)
class RankTestRow:
    null_rank: int
    eigenvalue: float
    trace: float
    trace_cv: float
    trace_reject: bool
    maxeig: float
    maxeig_cv: float
    maxeig_reject: bool


@dataclass(frozen=True)
class RankTestResult:
    """Sequential trace/max-eigenvalue decisions; decided_rank is the first
    null the trace test fails to reject (k if all are rejected)."""

    rows: tuple[RankTestRow, ...]
    decided_rank: int
    level: float
    det_case: int
    n_obs: int


def rank_test(e: EigenSolution, n_obs: int | None = None, level: float = 0.05) -> RankTestResult:
    """Run the rank sequence r = 0..k-1 against the embedded table.

    ``n_obs`` overrides the effective sample length recorded in ``e``.
    """
    if n_obs is not None and n_obs != e.n_obs:
        e = EigenSolution(
            names=e.names,
            det_case=e.det_case,
            diff_lags=e.diff_lags,
            eigenvalues=e.eigenvalues,
            eigenvectors=e.eigenvectors,
            s00=e.s00,
            s01=e.s01,
            s11=e.s11,
            n_obs=n_obs,
        )
    k = len(e.eigenvalues)
    rows = []
    decided = k
    for r in range(k):
        trace_cv, maxeig_cv = johansen_critical_values(k - r, e.det_case, level)
        tr = trace_statistic(e, r)
        me = maxeig_statistic(e, r)
        tr_rej = tr > trace_cv
        rows.append(
            RankTestRow(
                null_rank=r,
                eigenvalue=float(e.eigenvalues[r]),
                trace=tr,
                trace_cv=trace_cv,
                trace_reject=tr_rej,
                maxeig=me,
                maxeig_cv=maxeig_cv,
                maxeig_reject=me > maxeig_cv,
            )
        )
        if not tr_rej and decided == k:
            decided = r
    return RankTestResult(
        rows=tuple(rows), decided_rank=decided, level=level, det_case=e.det_case, n_obs=e.n_obs
    )
