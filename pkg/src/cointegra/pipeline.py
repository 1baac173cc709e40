"""End-to-end analysis pipeline: descriptives, unit roots, structural
breaks, lag selection, cointegration rank, long-run estimation, and
diagnostics, collected into one report of six tables plus metadata.

Stage order is fixed: describe, unit-root grid (ADF and PP, levels and
first differences, both deterministic specs), Zivot-Andrews break grid,
VAR lag-order criteria, Johansen eigenproblem and rank sequence, DOLS
long-run estimates, and a diagnostics battery on the static levels
equation.  Cointegration stages run even when a series fails the I(1)
screen, but the report then carries an explicit caveat.
"""

from __future__ import annotations

import hashlib
import platform
from dataclasses import dataclass, field, fields, replace

import numpy as np
import scipy
from scipy import stats as _sps

from . import __version__ as _pkg_version
from .errors import CointegraError, ConfigError
from .series import Dataset, describe, difference
from .unitroot import LEVELS, LagPolicy, UnitRootResult, adf_test, pp_test
from .zivot_andrews import ZA_CV, za_test
from .varselect import lag_selection_table
from .johansen import VecmSpec, johansen_eigen, rank_test
from .dols import DolsSpec, dols_fit
from .diagnostics import run_battery

__all__ = ["PipelineConfig", "PaperReport", "run_pipeline", "DEFAULT_SERIES_CODES"]

# Role -> source series code for the bundled data layout.
DEFAULT_SERIES_CODES = {
    "EXP": "NE.EXP.GNFS.ZS",
    "EXC": "TP.RK.T1.Y",
    "INF": "FP.CPI.TOTL.ZG",
    "FDI": "BX.KLT.DINV.WD.GD.ZS",
    "IMP": "NE.IMP.GNFS.ZS",
}

_MIN_YEARS = 15
_UNITROOT_SPECS = ("constant", "constant+trend")


@dataclass(frozen=True)
class PipelineConfig:
    """Every knob the pipeline consults, with the documented defaults."""

    start_year: int = 1995
    end_year: int = 2023
    dependent: str = "EXP"
    regressors: tuple[str, ...] = ("EXC", "INF", "FDI", "IMP")
    series_codes: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_SERIES_CODES))
    unitroot_specs: tuple[str, ...] = _UNITROOT_SPECS
    unitroot_max_lag: int | None = None  # None -> Schwert rule
    unitroot_criterion: str = "sc"
    pp_bandwidth: int | None = None  # None -> deterministic T-based rule
    za_models: tuple[str, ...] = ("A", "C")
    za_trimming: float = 0.15
    pmax: int = 2
    det_case: int = 3
    johansen_diff_lags: int | None = None  # None -> AIC-starred VAR lag minus one
    dols_leads: int = 1
    dols_lags: int = 1
    dols_bandwidth: int | None = None  # None -> automatic
    level: float = 0.05

    def __post_init__(self) -> None:
        if not self.dependent:
            raise ConfigError("dependent series name must be non-empty")
        regs = tuple(self.regressors)
        object.__setattr__(self, "regressors", regs)
        if not regs:
            raise ConfigError("at least one regressor is required")
        if self.dependent in regs:
            raise ConfigError(f"dependent {self.dependent!r} cannot also be a regressor")
        if len(set(regs)) != len(regs):
            raise ConfigError("regressors must be unique")
        n_years = self.end_year - self.start_year + 1
        if n_years < _MIN_YEARS:
            raise ConfigError(
                f"year range {self.start_year}-{self.end_year} covers {n_years} years; "
                f"the full pipeline needs at least {_MIN_YEARS}"
            )
        specs = tuple(self.unitroot_specs)
        object.__setattr__(self, "unitroot_specs", specs)
        for spec in specs:
            if spec not in ("none",) + _UNITROOT_SPECS:
                raise ConfigError(f"unknown unit-root spec {spec!r}")
        models = tuple(self.za_models)
        object.__setattr__(self, "za_models", models)
        for m in models:
            if m not in ZA_CV:
                raise ConfigError(f"unknown break model {m!r}; choose from {sorted(ZA_CV)}")
        if self.level not in LEVELS:
            raise ConfigError(f"unsupported level {self.level!r}; choose from {LEVELS}")
        if self.pmax < 1:
            raise ConfigError(f"pmax must be >= 1, got {self.pmax}")

    def symbols(self) -> tuple[str, ...]:
        return (self.dependent, *self.regressors)


@dataclass(frozen=True)
class PaperReport:
    """Six tables of row dicts plus metadata; everything JSON-serializable."""

    meta: dict
    table1: list[dict]
    table2: list[dict]
    table3: list[dict]
    table4: list[dict]
    table5: list[dict]
    table6: list[dict]

    def tables(self) -> dict[str, list[dict]]:
        return {f"table{i}": getattr(self, f"table{i}") for i in range(1, 7)}

    def as_dict(self) -> dict:
        return {"meta": self.meta, **self.tables()}


def _stars_from_cvs(statistic: float, cvs: dict[float, float]) -> str:
    """Left-tail significance stars against a 1/5/10% critical-value set."""
    for level, stars in ((0.01, "***"), (0.05, "**"), (0.10, "*")):
        if level in cvs and statistic < cvs[level]:
            return stars
    return ""


def _stars_from_pvalue(p: float) -> str:
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.10:
        return "*"
    return ""


def _cv_fields(cvs: dict[float, float]) -> dict:
    return {
        "cv_1pct": cvs.get(0.01),
        "cv_5pct": cvs.get(0.05),
        "cv_10pct": cvs.get(0.10),
    }


def _dataset_sha256(d: Dataset) -> str:
    h = hashlib.sha256()
    for s in d.series:
        h.update(s.name.encode())
        h.update(str(s.start_year).encode())
        h.update(",".join(repr(float(v)) for v in s.values).encode())
        h.update(b";")
    return h.hexdigest()


class _Stage:
    """Context manager tagging forwarded errors with the stage name."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, CointegraError):
            raise type(exc)(f"[{self.name}] {exc}") from exc
        return False


def _unitroot_row(r: UnitRootResult, symbol: str, form: str, level: float) -> dict:
    row = {
        "series": symbol,
        "form": form,
        "test": r.test,
        "spec": r.spec,
        "statistic": r.statistic,
        "n_obs": r.n_obs,
        "stars": _stars_from_cvs(r.statistic, r.critical_values),
        "reject": r.decision(level),
        **_cv_fields(r.critical_values),
    }
    if r.test == "adf":
        row["lags"] = r.lags
    else:
        row["bandwidth"] = r.bandwidth
    return row


def run_pipeline(d: Dataset, config: PipelineConfig | None = None,
                 provenance: str = "in-memory dataset") -> PaperReport:
    """Execute every stage on an already-assembled (logged) dataset."""
    config = config or PipelineConfig()
    missing = [name for name in config.symbols() if name not in d.names]
    if missing:
        raise ConfigError(f"dataset lacks configured series: {', '.join(missing)}")

    lag_policy = LagPolicy.ic_select(max_k=config.unitroot_max_lag,
                                     criterion=config.unitroot_criterion)
    caveats: list[str] = []

    with _Stage("describe"):
        table1 = [
            {"series": s.name, "n": s.n, "mean": s.mean, "sd": s.sd,
             "min": s.minimum, "max": s.maximum}
            for s in describe(d)
            if s.name in config.symbols()
        ]

    with _Stage("unitroot"):
        table2: list[dict] = []
        i1_flags: dict[str, bool] = {}
        for name in config.symbols():
            s = d[name]
            ds_ = difference(s)
            for spec in config.unitroot_specs:
                for form, series in (("level", s), ("difference", ds_)):
                    adf = adf_test(series, spec, lag_policy=lag_policy)
                    pp = pp_test(series, spec, bandwidth=config.pp_bandwidth)
                    table2.append(_unitroot_row(adf, name, form, config.level))
                    table2.append(_unitroot_row(pp, name, form, config.level))
            level_adf = adf_test(s, "constant", lag_policy=lag_policy)
            diff_adf = adf_test(ds_, "constant", lag_policy=lag_policy)
            i1_flags[name] = (not level_adf.decision(config.level)) and \
                diff_adf.decision(config.level)
        not_i1 = [n for n, ok in i1_flags.items() if not ok]
        for name in not_i1:
            caveats.append(
                f"series {name} is not classified I(1) at the "
                f"{config.level:.0%} level by the ADF constant specification; "
                "cointegration and long-run results involving it should be "
                "read with caution"
            )

    with _Stage("za"):
        table3 = []
        for name in config.symbols():
            for model in config.za_models:
                z = za_test(d[name], model, trimming=config.za_trimming)
                table3.append({
                    "series": name,
                    "model": model,
                    "break_year": z.break_year,
                    "statistic": z.statistic,
                    "lags": z.lags,
                    "n_obs": z.n_obs,
                    "stars": _stars_from_cvs(z.statistic, z.critical_values),
                    "reject": z.statistic < z.critical_values[config.level],
                    **_cv_fields(z.critical_values),
                })

    sub = d.select(config.symbols())

    with _Stage("lagselect"):
        lag_table = lag_selection_table(sub, config.pmax)
        table4 = []
        for row in lag_table.rows:
            entry = {
                "lag": row.lag, "loglik": row.loglik, "lr": row.lr,
                "lr_pvalue": row.lr_pvalue, "fpe": row.fpe,
                "aic": row.aic, "sc": row.sc, "hq": row.hq,
            }
            for crit in ("lr", "fpe", "aic", "sc", "hq"):
                entry[f"{crit}_starred"] = lag_table.starred.get(crit) == row.lag
            table4.append(entry)

    with _Stage("johansen"):
        if config.johansen_diff_lags is not None:
            diff_lags = config.johansen_diff_lags
            diff_lags_rule = "configured"
        else:
            diff_lags = max(lag_table.starred["aic"] - 1, 0)
            diff_lags_rule = "AIC-starred VAR lag minus one"
        vecm = VecmSpec(det_case=config.det_case, diff_lags=diff_lags)
        eigen = johansen_eigen(sub, vecm)
        ranks = rank_test(eigen, level=config.level)
        table5 = [
            {
                "kind": "rank",
                "null_rank": r.null_rank,
                "eigenvalue": r.eigenvalue,
                "trace": r.trace,
                "trace_cv": r.trace_cv,
                "trace_reject": r.trace_reject,
                "trace_stars": "**" if r.trace_reject else "",
                "maxeig": r.maxeig,
                "maxeig_cv": r.maxeig_cv,
                "maxeig_reject": r.maxeig_reject,
                "maxeig_stars": "**" if r.maxeig_reject else "",
            }
            for r in ranks.rows
        ]

    with _Stage("dols"):
        dols_spec = DolsSpec(
            leads=config.dols_leads,
            lags=config.dols_lags,
            hac_bandwidth_policy="automatic" if config.dols_bandwidth is None else "fixed",
            hac_bandwidth=config.dols_bandwidth or 0,
        )
        fit = dols_fit(d, config.dependent, config.regressors, dols_spec)
        order = list(range(1, len(fit.longrun_names))) + [0]  # regressors, then const
        table6 = []
        for i in order:
            t_ratio = fit.t_ratios[i]
            p = 2.0 * float(_sps.norm.sf(abs(t_ratio)))
            table6.append({
                "kind": "coefficient",
                "name": "C" if fit.longrun_names[i] == "const" else fit.longrun_names[i],
                "estimate": float(fit.longrun_coefficients[i]),
                "se": float(fit.hac_standard_errors[i]),
                "t_ratio": float(t_ratio),
                "p_value": p,
                "stars": _stars_from_pvalue(p),
            })

    with _Stage("diagnostics"):
        equation = (
            f"static levels equation: {config.dependent} on constant + "
            f"{', '.join(config.regressors)}"
        )
        y = d[config.dependent].to_array()
        X = np.column_stack(
            [np.ones(len(y))] + [d[name].to_array() for name in config.regressors]
        )
        battery = run_battery(y, X, level=config.level, label=equation)
        chi2_rows = [
            {"kind": "chi2", "equation": equation, "name": o.name,
             "statistic": o.statistic, "dof": o.dof, "p_value": o.p_value,
             "stars": _stars_from_pvalue(o.p_value)}
            for o in (battery.serial_correlation, battery.heteroskedasticity,
                      battery.normality, battery.functional_form)
        ]
        stability_rows = [
            {"kind": "stability", "equation": equation, "name": path.kind.upper(),
             "stable": path.stable, "level": path.level}
            for path in (battery.cusum_path, battery.cusumsq_path)
        ]
        table5 = table5 + chi2_rows + stability_rows
        table6 = table6 + chi2_rows + stability_rows

    meta = {
        "package": {"name": "cointegra", "version": _pkg_version},
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "config": _config_dict(config),
        "data": {
            "provenance": provenance,
            "sha256": _dataset_sha256(d),
            "series": list(d.names),
            "start_year": d.series[0].start_year,
            "n_obs": len(d.series[0].values),
        },
        "defaults_used": {
            "adf_lag_policy": (
                f"{config.unitroot_criterion.upper()}-selected, max lag "
                + ("Schwert rule 12*(T/100)^0.25" if config.unitroot_max_lag is None
                   else str(config.unitroot_max_lag))
            ),
            "pp_bandwidth": ("deterministic rule floor(4*(T/100)^(2/9))"
                             if config.pp_bandwidth is None else config.pp_bandwidth),
            "za_trimming": config.za_trimming,
            "johansen_det_case": config.det_case,
            "johansen_diff_lags": {"value": diff_lags, "rule": diff_lags_rule},
            "dols": {
                "leads": config.dols_leads,
                "lags": config.dols_lags,
                "bandwidth": fit.bandwidth,
                "bandwidth_policy": dols_spec.hac_bandwidth_policy,
            },
            "diagnostics_equation": equation,
            "stars": ("***, **, * mark 1%, 5%, 10% significance; "
                      "rank rows carry ** only, the single embedded level"),
        },
        "unit_root_classification": {
            "rule": "ADF with constant: level fails to reject and first "
                    "difference rejects, both at the configured level",
            "i1": i1_flags,
        },
        "lag_selection": {"starred": dict(lag_table.starred), "pmax": config.pmax},
        "johansen": {
            "decided_rank": ranks.decided_rank,
            "level": ranks.level,
            "det_case": ranks.det_case,
            "n_obs": ranks.n_obs,
        },
        "dols_fit": {
            "r2": fit.r2, "loglik": fit.loglik, "n_obs": fit.n_obs,
            "bandwidth": fit.bandwidth,
            "nuisance": {n: float(c) for n, c in
                         zip(fit.nuisance_names, fit.nuisance_coefficients)},
        },
        "caveats": caveats,
        "stages": ["describe", "unitroot", "za", "lagselect", "johansen",
                   "dols", "diagnostics"],
    }
    return PaperReport(meta=meta, table1=table1, table2=table2, table3=table3,
                       table4=table4, table5=table5, table6=table6)


def _config_dict(config: PipelineConfig) -> dict:
    out = {}
    for f in fields(config):
        value = getattr(config, f.name)
        if isinstance(value, tuple):
            value = list(value)
        elif isinstance(value, dict):
            value = dict(value)
        out[f.name] = value
    return out


def config_with(config: PipelineConfig, **overrides) -> PipelineConfig:
    """Return a copy of ``config`` with the given fields replaced."""
    return replace(config, **overrides)
