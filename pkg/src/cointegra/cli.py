"""Command-line interface.

Grammar: ``cointegra pipeline --data <path> --config <path> --format <fmt>``
plus per-stage subcommands ``unitroot``, ``za``, ``lagselect``, ``johansen``,
``dols``, ``diagnose``, ``mc-cv``, and ``figure-data``.  ``--data`` accepts a
CSV file or a directory of CSVs; when omitted, the bundled dataset is used
unless the ``COINTEGRA_DATA_DIR`` environment variable points elsewhere.
Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import importlib.resources
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import run_battery
from .dols import DolsSpec, dols_fit
from .errors import CointegraError, ConfigError, DataError
from .ingest import build_dataset, build_raw_dataset, load_directory, load_path
from .johansen import VecmSpec, johansen_eigen, rank_test
from .mccv import (DEFAULT_SEED, McConfig, McTarget, simulate_quantiles,
                   validate_tables)
from .pipeline import (PipelineConfig, _stars_from_cvs, _stars_from_pvalue,
                       _unitroot_row, config_with, run_pipeline)
from .report import FORMATS, emit
from .unitroot import LEVELS, LagPolicy, adf_test, pp_test
from .varselect import lag_selection_table
from .series import difference
from .zivot_andrews import za_test

__all__ = ["main", "build_parser", "load_config", "default_data_dir"]

_STAGE_FORMATS = ("text", "csv", "json")


def default_data_dir() -> Path:
    """Bundled dataset directory, overridable via COINTEGRA_DATA_DIR."""
    override = os.environ.get("COINTEGRA_DATA_DIR")
    if override:
        return Path(override)
    return Path(str(importlib.resources.files("cointegra") / "data"))


def load_config(path: str | os.PathLike | None) -> PipelineConfig:
    """Build a PipelineConfig from a JSON file of field overrides."""
    if path is None:
        return PipelineConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    known = {f.name for f in PipelineConfig.__dataclass_fields__.values()}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    for key in ("regressors", "unitroot_specs", "za_models"):
        if key in raw and isinstance(raw[key], list):
            raw[key] = tuple(raw[key])
    return PipelineConfig(**raw)


def _load_records(args) -> list:
    if args.data is None:
        path = default_data_dir()
    else:
        path = Path(args.data)
    if path.is_dir():
        return load_directory(path)
    return load_path(path, name=getattr(args, "name", None))


class _RoleView:
    """Config view narrowed to the series a stage command actually needs.

    Stage commands accept ad-hoc data sources, so the year range is the
    configured range intersected with the span the requested series share;
    interior gaps inside that window still fail.
    """

    def __init__(self, config: PipelineConfig, symbols: tuple[str, ...],
                 records: list) -> None:
        self.series_codes = {s: config.series_codes.get(s, s) for s in symbols}
        self._symbols = tuple(symbols)
        lo, hi = config.start_year, config.end_year
        for symbol in symbols:
            code = self.series_codes[symbol]
            years = [r.year for r in records
                     if r.series_code == code and r.value is not None]
            if not years:
                raise DataError(f"series {symbol!r} (code {code!r}) has no "
                                "observations in the data source")
            lo, hi = max(lo, min(years)), min(hi, max(years))
        if lo > hi:
            raise DataError(
                f"data years do not overlap the configured range "
                f"{config.start_year}-{config.end_year} for {', '.join(symbols)}"
            )
        self.start_year, self.end_year = lo, hi

    def symbols(self) -> tuple[str, ...]:
        return self._symbols


def _dataset(args, config: PipelineConfig, symbols: tuple[str, ...]):
    records = _load_records(args)
    return build_dataset(records, _RoleView(config, symbols, records))


def _symbols(args, config: PipelineConfig) -> tuple[str, ...]:
    if getattr(args, "series", None):
        return tuple(s.strip() for s in args.series.split(",") if s.strip())
    return config.symbols()


# --- small table emitters ----------------------------------------------------


def _fmt_cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        if value != 0.0 and abs(value) < 5e-4:
            return f"{value:.3e}"
        return f"{value:.3f}"
    return str(value)


def _emit_rows(rows: list[dict], fmt: str, title: str) -> str:
    if fmt == "json":
        return json.dumps({"title": title, "rows": rows}, sort_keys=True,
                          indent=2, default=_json_scalar) + "\n"
    columns: list[str] = []
    for row in rows:
        for col in row:
            if col not in columns:
                columns.append(col)
    if fmt == "csv":
        import csv as _csv

        buf = io.StringIO()
        writer = _csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row.get(c) is None else row.get(c, "")
                             for c in columns])
        return buf.getvalue()
    cells = [[_fmt_cell(row.get(c)) for c in columns] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in cells)) if cells else len(c)
              for i, c in enumerate(columns)]
    lines = [title, ""]
    lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
    lines.append("-" * len(lines[-1]))
    lines.extend("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip()
                 for row in cells)
    return "\n".join(lines) + "\n"


def _json_scalar(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def _write(text: str) -> None:
    sys.stdout.write(text)


# --- subcommand bodies --------------------------------------------------------


def _cmd_pipeline(args) -> int:
    config = load_config(args.config)
    records = _load_records(args)
    d = build_dataset(records, config)
    provenance = str(args.data) if args.data else f"bundled dataset ({default_data_dir()})"
    report = run_pipeline(d, config, provenance=provenance)
    sys.stdout.buffer.write(emit(report, args.format))
    sys.stdout.buffer.flush()
    return 0


def _cmd_unitroot(args) -> int:
    config = load_config(args.config)
    symbols = _symbols(args, config)
    d = _dataset(args, config, symbols)
    specs = (config.unitroot_specs if args.spec in (None, "both")
             else (args.spec,))
    lag_policy = LagPolicy.ic_select(max_k=config.unitroot_max_lag,
                                     criterion=config.unitroot_criterion)
    rows = []
    for name in symbols:
        s = d[name]
        ds_ = difference(s)
        for spec in specs:
            for form, series in (("level", s), ("difference", ds_)):
                rows.append(_unitroot_row(adf_test(series, spec, lag_policy=lag_policy),
                                          name, form, args.level))
                rows.append(_unitroot_row(pp_test(series, spec, bandwidth=config.pp_bandwidth),
                                          name, form, args.level))
    _write(_emit_rows(rows, args.format, "Unit root tests (ADF and Phillips-Perron)"))
    return 0


def _cmd_za(args) -> int:
    config = load_config(args.config)
    symbols = _symbols(args, config)
    d = _dataset(args, config, symbols)
    models = config.za_models if args.spec in (None, "both") else (args.spec,)
    rows = []
    for name in symbols:
        for model in models:
            r = za_test(d[name], model=model, trimming=config.za_trimming)
            rows.append({
                "series": name, "model": model, "break_year": r.break_year,
                "statistic": r.statistic, "lags": r.lags,
                "stars": _stars_from_cvs(r.statistic, r.critical_values),
                "reject": bool(r.statistic < r.critical_values[args.level]),
                "cv_1pct": r.critical_values[0.01],
                "cv_5pct": r.critical_values[0.05],
                "cv_10pct": r.critical_values[0.10],
            })
    _write(_emit_rows(rows, args.format, "Structural-break unit root tests"))
    return 0


def _cmd_lagselect(args) -> int:
    config = load_config(args.config)
    sub = _dataset(args, config, _symbols(args, config))
    pmax = int(args.spec) if args.spec is not None else config.pmax
    table = lag_selection_table(sub, pmax=pmax)
    rows = []
    for r in table.rows:
        rows.append({
            "lag": r.lag, "loglik": r.loglik, "lr": r.lr,
            "lr_pvalue": r.lr_pvalue, "fpe": r.fpe, "aic": r.aic,
            "sc": r.sc, "hq": r.hq,
            **{f"{c}_starred": table.starred[c] == r.lag
               for c in ("lr", "fpe", "aic", "sc", "hq")},
        })
    _write(_emit_rows(rows, args.format, "VAR lag-order selection criteria"))
    return 0


def _cmd_johansen(args) -> int:
    config = load_config(args.config)
    sub = _dataset(args, config, _symbols(args, config))
    if args.spec is not None:
        diff_lags = int(args.spec)
    elif config.johansen_diff_lags is not None:
        diff_lags = config.johansen_diff_lags
    else:
        table = lag_selection_table(sub, pmax=config.pmax)
        diff_lags = max(table.starred["aic"] - 1, 0)
    eigen = johansen_eigen(sub, VecmSpec(det_case=config.det_case,
                                         diff_lags=diff_lags))
    result = rank_test(eigen, level=args.level)
    rows = [{
        "null_rank": r.null_rank, "eigenvalue": r.eigenvalue,
        "trace": r.trace, "trace_cv": r.trace_cv,
        "trace_reject": r.trace_reject, "maxeig": r.maxeig,
        "maxeig_cv": r.maxeig_cv, "maxeig_reject": r.maxeig_reject,
    } for r in result.rows]
    rows.append({"decided_rank": result.decided_rank, "level": result.level,
                 "det_case": result.det_case, "diff_lags": diff_lags,
                 "n_obs": result.n_obs})
    _write(_emit_rows(rows, args.format, "Johansen cointegration rank tests"))
    return 0


def _cmd_dols(args) -> int:
    config = load_config(args.config)
    symbols = _symbols(args, config)
    dependent, regressors = symbols[0], symbols[1:]
    if not regressors:
        raise ConfigError("dols needs a dependent plus at least one regressor; "
                          "pass --vars DEP,REG1,...")
    d = _dataset(args, config, symbols)
    if args.spec is not None:
        try:
            leads, lags = (int(x) for x in args.spec.split(","))
        except ValueError as exc:
            raise ConfigError(f"dols --spec must be 'leads,lags', got {args.spec!r}") from exc
    else:
        leads, lags = config.dols_leads, config.dols_lags
    spec = DolsSpec(
        leads=leads, lags=lags,
        hac_bandwidth_policy="automatic" if config.dols_bandwidth is None else "fixed",
        hac_bandwidth=config.dols_bandwidth or 0,
    )
    fit = dols_fit(d, dependent, regressors, spec)
    from scipy import stats as _sps

    rows = []
    order = [n for n in fit.longrun_names if n != "const"] + ["const"]
    for name in order:
        i = fit.longrun_names.index(name)
        t = float(fit.t_ratios[i])
        p = float(2.0 * _sps.norm.sf(abs(t)))
        rows.append({
            "name": "C" if name == "const" else name,
            "estimate": float(fit.longrun_coefficients[i]),
            "se": float(fit.hac_standard_errors[i]), "t_ratio": t,
            "p_value": p, "stars": _stars_from_pvalue(p),
        })
    rows.append({"r2": fit.r2, "n_obs": fit.n_obs, "bandwidth": fit.bandwidth,
                 "loglik": fit.loglik})
    _write(_emit_rows(rows, args.format, "DOLS long-run estimates"))
    return 0


def _cmd_diagnose(args) -> int:
    config = load_config(args.config)
    symbols = _symbols(args, config)
    dependent, regressors = symbols[0], symbols[1:]
    if not regressors:
        raise ConfigError("diagnose needs a dependent plus regressors; "
                          "pass --vars DEP,REG1,...")
    d = _dataset(args, config, symbols)
    het_kind = args.spec if args.spec is not None else "breusch-pagan"
    y = d[dependent].to_array()
    X = np.column_stack([np.ones(y.shape[0])]
                        + [d[name].to_array() for name in regressors])
    label = (f"static levels equation: {dependent} on constant + "
             f"{', '.join(regressors)}")
    battery = run_battery(y, X, het_kind=het_kind, level=args.level, label=label)
    rows = []
    for o in (battery.serial_correlation, battery.heteroskedasticity,
              battery.normality, battery.functional_form):
        rows.append({"kind": "chi2", "name": o.name, "statistic": o.statistic,
                     "dof": o.dof, "p_value": o.p_value,
                     "stars": _stars_from_pvalue(o.p_value)})
    for path in (battery.cusum_path, battery.cusumsq_path):
        rows.append({"kind": "stability", "name": path.kind.upper(),
                     "stable": path.stable, "level": path.level})
    _write(_emit_rows(rows, args.format, f"Diagnostics: {label}"))
    return 0


_MC_TARGETS = ("df:constant", "df:constant+trend", "za:A", "za:B", "za:C",
               "johansen:trace:N", "johansen:maxeig:N")


def _parse_mc_target(text: str) -> McTarget:
    parts = text.split(":")
    kind = parts[0]
    if kind == "df":
        return McTarget.df(parts[1] if len(parts) > 1 else "constant")
    if kind == "za":
        return McTarget.za(parts[1] if len(parts) > 1 else "C")
    if kind == "johansen":
        statistic = parts[1] if len(parts) > 1 else "trace"
        n_minus_r = int(parts[2]) if len(parts) > 2 else 2
        return McTarget.johansen(statistic, n_minus_r)
    raise ConfigError(f"unknown mc-cv target {text!r}; examples: {', '.join(_MC_TARGETS)}")


def _cmd_mccv(args) -> int:
    if args.action in ("validate_tables", "validate-tables"):
        report = validate_tables(sample_size=args.T, replications=args.reps,
                                 seed=args.seed, workers=args.workers)
        rows = [{
            "family": e.family, "label": e.label, "level": e.level,
            "embedded": e.embedded, "simulated": e.simulated, "se": e.se,
            "allowance": e.allowance, "passed": e.passed,
        } for e in report.entries]
        rows.append({"passed": report.passed, "sample_size": report.sample_size,
                     "replications": report.replications, "seed": report.seed})
        _write(_emit_rows(rows, args.format, "Critical-value table validation"))
        return 0
    if args.action != "quantiles":
        raise ConfigError(f"unknown mc-cv action {args.action!r}; "
                          "use quantiles or validate_tables")
    target = _parse_mc_target(args.target)
    cfg = McConfig(target=target, sample_size=args.T,
                   replications=args.reps, seed=args.seed)
    table = simulate_quantiles(cfg, workers=args.workers)
    levels = LEVELS if args.level is None else (args.level,)
    rows = [{
        "target": target.label(), "level": level,
        "quantile": table.quantiles[level].value,
        "se": table.quantiles[level].se,
        "sample_size": table.sample_size,
        "replications": table.replications, "seed": table.seed,
        "tail": table.tail,
    } for level in levels]
    _write(_emit_rows(rows, args.format, "Simulated critical values"))
    return 0


def _cmd_figure_data(args) -> int:
    config = load_config(args.config)
    raw = build_raw_dataset(_load_records(args), config)
    names = (tuple(s.strip() for s in args.series.split(","))
             if getattr(args, "series", None) else ("EXP", "EXC", "INF"))
    for name in names:
        if name not in raw.names:
            raise ConfigError(f"series {name!r} not in dataset {raw.names}")
    import csv as _csv

    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(["year", *names])
    first = raw[names[0]]
    for i, year in enumerate(first.years):
        writer.writerow([year] + [repr(float(raw[n].values[i])) for n in names])
    _write(buf.getvalue())
    return 0


# --- parser -------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, fmt_choices=_STAGE_FORMATS) -> None:
    parser.add_argument("--data", help="CSV file or directory of CSVs "
                        "(default: bundled dataset or COINTEGRA_DATA_DIR)")
    parser.add_argument("--config", help="JSON file of pipeline-config overrides")
    parser.add_argument("--name", help="series name for a plain year,value CSV "
                        "(default: file stem)")
    parser.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])


def _add_stage_flags(parser: argparse.ArgumentParser, spec_help: str) -> None:
    parser.add_argument("--series", "--vars", dest="series",
                        help="comma-separated series names (default: configured five)")
    parser.add_argument("--spec", help=spec_help)
    parser.add_argument("--level", type=float, default=0.05,
                        choices=LEVELS, help="significance level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cointegra",
        description="Unit-root, cointegration, and long-run estimation toolkit",
    )
    parser.add_argument("--version", action="version",
                        version=f"cointegra {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pipeline", help="run the full six-table analysis")
    _add_common(p, FORMATS)
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("unitroot", help="ADF and Phillips-Perron grid")
    _add_common(p)
    _add_stage_flags(p, "deterministic terms: constant, constant+trend, or both")
    p.set_defaults(func=_cmd_unitroot)

    p = sub.add_parser("za", help="minimum-tau structural-break tests")
    _add_common(p)
    _add_stage_flags(p, "break model: A, B, C, or both (configured models)")
    p.set_defaults(func=_cmd_za)

    p = sub.add_parser("lagselect", help="VAR lag-order criteria")
    _add_common(p)
    _add_stage_flags(p, "maximum lag order (integer)")
    p.set_defaults(func=_cmd_lagselect)

    p = sub.add_parser("johansen", help="cointegration rank tests")
    _add_common(p)
    _add_stage_flags(p, "lagged differences in the VECM (integer)")
    p.set_defaults(func=_cmd_johansen)

    p = sub.add_parser("dols", help="dynamic OLS long-run estimates")
    _add_common(p)
    _add_stage_flags(p, "leads,lags pair, e.g. 1,1")
    p.set_defaults(func=_cmd_dols)

    p = sub.add_parser("diagnose", help="residual diagnostics battery")
    _add_common(p)
    _add_stage_flags(p, "heteroskedasticity test: breusch-pagan or white-no-cross")
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("mc-cv", help="simulate or validate critical values")
    p.add_argument("action", nargs="?", default="quantiles",
                   help="quantiles (default) or validate_tables")
    p.add_argument("--target", default="df:constant",
                   help=f"statistic to simulate, e.g. {', '.join(_MC_TARGETS)}")
    p.add_argument("--T", type=int, default=500, dest="T",
                   help="sample size per replication")
    p.add_argument("--reps", type=int, default=5000, help="replications")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--level", type=float, choices=LEVELS,
                   help="report a single level (default: 1%%, 5%%, 10%%)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=_STAGE_FORMATS, default="csv")
    p.set_defaults(func=_cmd_mccv)

    p = sub.add_parser("figure-data",
                       help="plot-ready CSV of the raw series (default EXP, EXC, INF)")
    _add_common(p, ("csv",))
    p.add_argument("--series", "--vars", dest="series",
                   help="comma-separated series names")
    p.set_defaults(func=_cmd_figure_data)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CointegraError as exc:
        print(f"cointegra: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
