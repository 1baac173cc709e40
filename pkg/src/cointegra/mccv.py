"""Monte Carlo simulation of the null distributions behind the embedded
critical-value tables.

Every replication owns a counter-based random stream keyed by (seed,
replication index), and replications are processed in fixed-size blocks, so
quantiles are bit-identical across runs and across worker counts. The
simulated quantiles validate the DF response surface, the break-search
minimum-tau table, and the cointegration-rank table.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, InsufficientDataError
from .unitroot import DETERMINISTIC_SPECS, df_critical_value
from .zivot_andrews import ZA_CV, ZA_MODELS, candidate_breaks
from .johansen import _CV_CASE3_5PCT

__all__ = [
    "McConfig",
    "McTarget",
    "QuantileEstimate",
    "QuantileTable",
    "ValidationEntry",
    "ValidationReport",
    "simulate_quantiles",
    "validate_tables",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 186283
LEVELS = (0.01, 0.05, 0.10)
_CHUNK = 256  # fixed block of replications; workers distribute whole blocks
_ZA_BURNIN = 50


@dataclass(frozen=True)
class McTarget:
    """Which statistic's null distribution to simulate."""

    kind: str  # "df" | "za" | "johansen"
    spec: str = "constant"  # df deterministic spec
    model: str = "C"  # za break model
    trimming: float = 0.15  # za candidate trimming
    statistic: str = "trace"  # johansen statistic
    n_minus_r: int = 2  # johansen system dimension under the null
    det_case: int = 3  # johansen deterministic case

    def __post_init__(self) -> None:
        if self.kind not in ("df", "za", "johansen"):
            raise ConfigError(f"unknown target kind {self.kind!r}")
        if self.kind == "df" and self.spec not in DETERMINISTIC_SPECS:
            raise ConfigError(
                f"unknown deterministic spec {self.spec!r}; choose from {DETERMINISTIC_SPECS}"
            )
        if self.kind == "za":
            if self.model not in ZA_MODELS:
                raise ConfigError(f"unknown break model {self.model!r}; choose from {ZA_MODELS}")
            if not 0.0 < self.trimming < 0.5:
                raise ConfigError(f"trimming must be in (0, 0.5), got {self.trimming}")
        if self.kind == "johansen":
            if self.statistic not in ("trace", "maxeig"):
                raise ConfigError(f"unknown statistic {self.statistic!r}; trace or maxeig")
            if not 1 <= self.n_minus_r <= 12:
                raise ConfigError(f"n_minus_r must be in 1..12, got {self.n_minus_r}")
            if self.det_case != 3:
                raise ConfigError("only the unrestricted-constant case is simulated")

    @classmethod
    def df(cls, spec: str = "constant") -> "McTarget":
        return cls(kind="df", spec=spec)

    @classmethod
    def za(cls, model: str = "C", trimming: float = 0.15) -> "McTarget":
        return cls(kind="za", model=model, trimming=trimming)

    @classmethod
    def johansen(cls, statistic: str = "trace", n_minus_r: int = 2,
                 det_case: int = 3) -> "McTarget":
        return cls(kind="johansen", statistic=statistic, n_minus_r=n_minus_r,
                   det_case=det_case)

    @property
    def tail(self) -> str:
        return "upper" if self.kind == "johansen" else "lower"

    def label(self) -> str:
        if self.kind == "df":
            return f"df({self.spec})"
        if self.kind == "za":
            return f"za({self.model}, trim={self.trimming:g})"
        return f"johansen({self.statistic}, n-r={self.n_minus_r}, case {self.det_case})"


@dataclass(frozen=True)
class McConfig:
    """Simulation budget; the seed fully determines the output."""

    target: McTarget
    sample_size: int = 500
    replications: int = 5000
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.sample_size < 25:
            raise ConfigError(f"sample_size must be >= 25, got {self.sample_size}")
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}")
        if not 0 <= self.seed < 2**63:
            raise ConfigError("seed must fit in 63 bits")


class QuantileEstimate(NamedTuple):
    value: float
    se: float


@dataclass(frozen=True)
class QuantileTable:
    """Simulated tail quantiles with order-statistic standard errors."""

    target: McTarget
    sample_size: int
    replications: int
    seed: int
    quantiles: dict[float, QuantileEstimate]

    @property
    def tail(self) -> str:
        return self.target.tail


# --- replication streams ---------------------------------------------------


def _rep_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, rep]))


def _innovation_block(seed: int, lo: int, hi: int, shape: tuple[int, ...]) -> np.ndarray:
    out = np.empty((hi - lo, *shape))
    for i, rep in enumerate(range(lo, hi)):
        out[i] = _rep_rng(seed, rep).standard_normal(shape)
    return out


# --- partitioned tau machinery ---------------------------------------------


def _tau_from_moments(syy, syd, sdd, n_obs: int, k_params: int):
    rss = sdd - syd * syd / syy
    s2 = rss / (n_obs - k_params)
    return syd / np.sqrt(syy * s2)


def _df_block(seed: int, lo: int, hi: int, T: int, spec: str) -> np.ndarray:
    """tau of the lag-0 DF regression, one value per replication."""
    E = _innovation_block(seed, lo, hi, (T,))
    Y = np.cumsum(E, axis=1)
    U = Y[:, :-1]  # lagged level
    V = np.diff(Y, axis=1)  # dependent difference
    n = T - 1
    det_cols = []
    if spec in ("constant", "constant+trend"):
        det_cols.append(np.ones(n))
    if spec == "constant+trend":
        det_cols.append(np.arange(2.0, T + 1.0))
    m = len(det_cols)
    if m == 0:
        syy = np.einsum("rt,rt->r", U, U)
        syd = np.einsum("rt,rt->r", U, V)
        sdd = np.einsum("rt,rt->r", V, V)
    else:
        D = np.column_stack(det_cols)
        G = np.linalg.inv(D.T @ D)
        a = U @ D
        b = V @ D
        syy = np.einsum("rt,rt->r", U, U) - np.einsum("rm,mn,rn->r", a, G, a)
        syd = np.einsum("rt,rt->r", U, V) - np.einsum("rm,mn,rn->r", a, G, b)
        sdd = np.einsum("rt,rt->r", V, V) - np.einsum("rm,mn,rn->r", b, G, b)
    return _tau_from_moments(syy, syd, sdd, n, 1 + m)


def _za_det_design(model: str, tvec: np.ndarray, tb: int) -> np.ndarray:
    cols = [np.ones_like(tvec), tvec]
    if model in ("A", "C"):
        cols.append((tvec > tb).astype(float))
    if model in ("B", "C"):
        cols.append(np.where(tvec > tb, tvec - tb, 0.0))
    return np.column_stack(cols)


def _za_block(seed: int, lo: int, hi: int, T: int, model: str, trimming: float) -> np.ndarray:
    """Minimum tau over candidate break dates, one value per replication."""
    # Dates whose break columns cannot vary on the lag-0 sample are excluded,
    # matching the estimator's search grid.
    cap_floor = 2 if model == "A" else 3
    cands = [tb for tb in candidate_breaks(T, trimming) if tb >= cap_floor]
    if not cands:
        raise InsufficientDataError(f"no candidate break dates for T={T}, trim={trimming}")
    E = _innovation_block(seed, lo, hi, (T + _ZA_BURNIN,))
    Y = np.cumsum(E, axis=1)[:, _ZA_BURNIN:]
    U = Y[:, :-1]
    V = np.diff(Y, axis=1)
    n = T - 1
    tvec = np.arange(2.0, T + 1.0)  # 1-based time of each regression row

    # Precompute the inverse deterministic Gram matrix per candidate.
    G = np.stack([np.linalg.inv(np.dot(d.T, d))
                  for d in (_za_det_design(model, tvec, tb) for tb in cands)])
    J = np.array(cands) - 1  # row index where t first exceeds tb

    def det_products(M: np.ndarray) -> np.ndarray:
        # M'd for d = each deterministic column, all candidates at once.
        total = M.sum(axis=1)
        ttotal = M @ tvec
        suf = np.cumsum(M[:, ::-1], axis=1)[:, ::-1]
        suft = np.cumsum((M * tvec)[:, ::-1], axis=1)[:, ::-1]
        du = suf[:, J]
        dt = suft[:, J] - np.asarray(cands, dtype=float) * du
        C = len(cands)
        blocks = [np.broadcast_to(total[:, None], (M.shape[0], C)),
                  np.broadcast_to(ttotal[:, None], (M.shape[0], C))]
        if model in ("A", "C"):
            blocks.append(du)
        if model in ("B", "C"):
            blocks.append(dt)
        return np.stack(blocks, axis=2)  # (reps, candidates, det columns)

    A = det_products(U)
    B = det_products(V)
    syy = np.einsum("rt,rt->r", U, U)[:, None] - np.einsum("rcm,cmn,rcn->rc", A, G, A)
    syd = np.einsum("rt,rt->r", U, V)[:, None] - np.einsum("rcm,cmn,rcn->rc", A, G, B)
    sdd = np.einsum("rt,rt->r", V, V)[:, None] - np.einsum("rcm,cmn,rcn->rc", B, G, B)
    tau = _tau_from_moments(syy, syd, sdd, n, 1 + G.shape[1])
    return tau.min(axis=1)


_JOHANSEN_DRIFT = 1.0


def _johansen_block(seed: int, lo: int, hi: int, T: int, k: int):
    """(trace, maxeig) at null rank 0 for k independent drifted random walks.

    The unrestricted-constant null is dy = mu + e with mu generically
    nonzero; the published table's limit distribution replaces one Brownian
    direction with a linear trend, so the simulated walks must carry a
    drift. A driftless simulation converges to a different law (its n-r=1
    statistic is a squared demeaned DF ratio, 5% point near 8.2 instead of
    the tabulated 3.84).
    """
    E = _innovation_block(seed, lo, hi, (T, k))
    Y = np.cumsum(E + _JOHANSEN_DRIFT, axis=1)
    n = T - 1
    D0 = np.diff(Y, axis=1)
    Z1 = Y[:, :-1, :]
    D0 = D0 - D0.mean(axis=1, keepdims=True)  # case 3: unrestricted constant
    Z1 = Z1 - Z1.mean(axis=1, keepdims=True)
    s00 = np.einsum("rti,rtj->rij", D0, D0) / n
    s01 = np.einsum("rti,rtj->rij", D0, Z1) / n
    s11 = np.einsum("rti,rtj->rij", Z1, Z1) / n
    l00 = np.linalg.cholesky(s00)
    a = np.linalg.solve(l00, s01)  # L00^-1 S01
    l11 = np.linalg.cholesky(s11)
    b = np.linalg.solve(l11, np.swapaxes(a, 1, 2))
    M = b @ np.swapaxes(b, 1, 2)
    lam = np.linalg.eigvalsh(M)  # ascending
    lam = np.clip(lam, 0.0, None)
    trace = -n * np.log1p(-lam).sum(axis=1)
    maxeig = -n * np.log1p(-lam[:, -1])
    return trace, maxeig


def _block_stats(args) -> np.ndarray:
    seed, lo, hi, T, target = args
    if isinstance(target, tuple):  # ("johansen-both", k): one pass, two statistics
        trace, maxeig = _johansen_block(seed, lo, hi, T, target[1])
        return np.stack([trace, maxeig])
    if target.kind == "df":
        return _df_block(seed, lo, hi, T, target.spec)
    if target.kind == "za":
        return _za_block(seed, lo, hi, T, target.model, target.trimming)
    trace, maxeig = _johansen_block(seed, lo, hi, T, target.n_minus_r)
    return trace if target.statistic == "trace" else maxeig


def _run_blocks(target, sample_size: int, replications: int, seed: int,
                workers: int) -> np.ndarray:
    blocks = [(seed, lo, min(lo + _CHUNK, replications), sample_size, target)
              for lo in range(0, replications, _CHUNK)]
    if workers <= 1 or len(blocks) == 1:
        parts = [_block_stats(b) for b in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_block_stats, blocks, chunksize=1))
    return np.concatenate(parts, axis=-1)


def _simulate_stats(cfg: McConfig, workers: int = 1) -> np.ndarray:
    """Raw replication statistics in replication order."""
    return _run_blocks(cfg.target, cfg.sample_size, cfg.replications, cfg.seed, workers)


def _quantile_with_se(stats_sorted: np.ndarray, p: float) -> QuantileEstimate:
    R = stats_sorted.size
    value = float(np.quantile(stats_sorted, p))
    m = R * p
    half = math.sqrt(R * p * (1.0 - p))
    lo = min(max(int(math.floor(m - half)), 1), R)
    hi = min(max(int(math.ceil(m + half)), 1), R)
    se = float(stats_sorted[hi - 1] - stats_sorted[lo - 1]) / 2.0
    return QuantileEstimate(value=value, se=se)


def simulate_quantiles(cfg: McConfig, workers: int = 1) -> QuantileTable:
    """Simulate the target's null distribution and extract tail quantiles.

    Lower-tail targets (df, za) report the level-p quantile; the upper-tail
    cointegration statistics report the level-(1-p) quantile.
    """
    stats = np.sort(_simulate_stats(cfg, workers=workers))
    qs: dict[float, QuantileEstimate] = {}
    for level in LEVELS:
        p = level if cfg.target.tail == "lower" else 1.0 - level
        qs[level] = _quantile_with_se(stats, p)
    return QuantileTable(
        target=cfg.target,
        sample_size=cfg.sample_size,
        replications=cfg.replications,
        seed=cfg.seed,
        quantiles=qs,
    )


# --- table validation -------------------------------------------------------


@dataclass(frozen=True)
class ValidationEntry:
    family: str
    label: str
    level: float
    embedded: float
    simulated: float
    se: float
    allowance: float
    passed: bool

    @property
    def difference(self) -> float:
        return self.simulated - self.embedded


@dataclass(frozen=True)
class ValidationReport:
    entries: tuple[ValidationEntry, ...]
    sample_size: int
    replications: int
    seed: int

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failures(self) -> tuple[ValidationEntry, ...]:
        return tuple(e for e in self.entries if not e.passed)


_DF_ALLOWANCE = 0.1
_ZA_ALLOWANCE = 0.1
_JOHANSEN_ALLOWANCE = 1.0


def validate_tables(
    sample_size: int = 500,
    replications: int = 5000,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    trimming: float = 0.15,
    df_table: dict[tuple[str, float], float] | None = None,
    za_table: dict[str, dict[float, float]] | None = None,
    johansen_table: dict[int, tuple[float, float]] | None = None,
) -> ValidationReport:
    """Compare every embedded critical value to its simulated quantile.

    An entry passes iff |simulated - embedded| < 3 Monte Carlo standard
    errors plus the finite-sample allowance (0.1 for the tau tables, 1.0 for
    the rank tables). The ``*_table`` arguments substitute alternative
    constants, which is how the validator itself is tested.
    """
    if replications < 1000:
        raise ConfigError(f"table validation needs >= 1000 replications, got {replications}")
    n_reg = sample_size - 1  # rows of the lag-0 regressions
    if df_table is None:
        df_table = {
            (spec, level): df_critical_value(spec, n_reg, level)
            for spec in DETERMINISTIC_SPECS
            for level in LEVELS
        }
    if za_table is None:
        za_table = ZA_CV
    if johansen_table is None:
        johansen_table = _CV_CASE3_5PCT

    entries: list[ValidationEntry] = []

    for spec in DETERMINISTIC_SPECS:
        cfg = McConfig(target=McTarget.df(spec), sample_size=sample_size,
                       replications=replications, seed=seed)
        table = simulate_quantiles(cfg, workers=workers)
        for level in LEVELS:
            est = table.quantiles[level]
            emb = df_table[(spec, level)]
            tol = 3.0 * est.se + _DF_ALLOWANCE
            entries.append(ValidationEntry(
                family="df", label=f"df({spec})", level=level, embedded=emb,
                simulated=est.value, se=est.se, allowance=_DF_ALLOWANCE,
                passed=abs(est.value - emb) < tol,
            ))

    for model in ZA_MODELS:
        cfg = McConfig(target=McTarget.za(model, trimming), sample_size=sample_size,
                       replications=replications, seed=seed)
        table = simulate_quantiles(cfg, workers=workers)
        for level in LEVELS:
            est = table.quantiles[level]
            emb = za_table[model][level]
            tol = 3.0 * est.se + _ZA_ALLOWANCE
            entries.append(ValidationEntry(
                family="za", label=f"za({model})", level=level, embedded=emb,
                simulated=est.value, se=est.se, allowance=_ZA_ALLOWANCE,
                passed=abs(est.value - emb) < tol,
            ))

    for n_minus_r in sorted(johansen_table):
        trace_emb, maxeig_emb = johansen_table[n_minus_r]
        pair = _run_blocks(("johansen-both", n_minus_r), sample_size, replications,
                           seed, workers)
        for name, emb, arr in (("trace", trace_emb, pair[0]), ("maxeig", maxeig_emb, pair[1])):
            s = np.sort(arr)
            est = _quantile_with_se(s, 0.95)
            tol = 3.0 * est.se + _JOHANSEN_ALLOWANCE
            entries.append(ValidationEntry(
                family="johansen", label=f"johansen({name}, n-r={n_minus_r})", level=0.05,
                embedded=emb, simulated=est.value, se=est.se,
                allowance=_JOHANSEN_ALLOWANCE, passed=abs(est.value - emb) < tol,
            ))

    return ValidationReport(entries=tuple(entries), sample_size=sample_size,
                            replications=replications, seed=seed)
