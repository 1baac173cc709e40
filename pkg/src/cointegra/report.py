"""Render a PaperReport as text, markdown, CSV sections, or JSON.

Stars follow the ***/**/* = 1%/5%/10% convention throughout; statistics
print with three decimals; JSON carries full float precision and
round-trips bit-exactly.
"""

from __future__ import annotations

import io
import json

import numpy as np

from .errors import ConfigError
from .pipeline import PaperReport

__all__ = ["emit", "FORMATS"]

FORMATS = ("text", "markdown", "csv", "json")

_TITLES = {
    "table1": "Table 1. Descriptive statistics (log10 of raw values)",
    "table2": "Table 2. Unit root tests (ADF and Phillips-Perron)",
    "table3": "Table 3. Structural-break unit root tests (minimum-tau)",
    "table4": "Table 4. VAR lag-order selection criteria",
    "table5": "Table 5. Cointegration rank tests and diagnostics",
    "table6": "Table 6. DOLS long-run estimates and diagnostics",
}


def _f3(value, stars: str = "") -> str:
    if value is None:
        return "-"
    return f"{float(value):.3f}{stars}"


def _json_default(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def _grid(headers: list[str], rows: list[list[str]], md: bool = False) -> list[str]:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    if md:
        out = ["| " + " | ".join(h.ljust(w) for h, w in zip(headers, widths)) + " |"]
        out.append("|" + "|".join("-" * (w + 2) for w in widths) + "|")
        out.extend("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |"
                   for row in rows)
    else:
        out = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
        out.append("-" * len(out[0]))
        out.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
                   for row in rows)
    return out


def _render_table1(rows: list[dict], md: bool) -> list[str]:
    return _grid(
        ["Series", "Obs", "Mean", "Std. Dev.", "Min", "Max"],
        [[r["series"], str(r["n"]), _f3(r["mean"]), _f3(r["sd"]),
          _f3(r["min"]), _f3(r["max"])] for r in rows],
        md,
    )


def _render_table2(rows: list[dict], md: bool) -> list[str]:
    out: list[str] = []
    specs = []
    for r in rows:
        if r["spec"] not in specs:
            specs.append(r["spec"])
    for spec in specs:
        cells: dict[tuple[str, str], dict[str, str]] = {}
        order: list[tuple[str, str]] = []
        for r in rows:
            if r["spec"] != spec:
                continue
            key = (r["series"], r["form"])
            if key not in cells:
                cells[key] = {}
                order.append(key)
            detail = f"k={r['lags']}" if r["test"] == "adf" else f"bw={r['bandwidth']}"
            cells[key][r["test"]] = f"{_f3(r['statistic'], r['stars'])} ({detail})"
        out.append(f"Deterministic terms: {spec}")
        out.extend(_grid(
            ["Series", "Form", "ADF", "PP"],
            [[s, form, cells[(s, form)].get("adf", "-"),
              cells[(s, form)].get("pp", "-")] for s, form in order],
            md,
        ))
        out.append("")
    return out[:-1]


def _render_table3(rows: list[dict], md: bool) -> list[str]:
    body = _grid(
        ["Series", "Model", "Break year", "t-statistic", "CV 5%"],
        [[r["series"], r["model"], str(r["break_year"]),
          _f3(r["statistic"], r["stars"]), _f3(r["cv_5pct"])] for r in rows],
        md,
    )
    models = []
    for r in rows:
        if r["model"] not in models:
            models.append(r["model"])
    notes = [
        f"Model {m} critical values: 1% {_f3(next(r['cv_1pct'] for r in rows if r['model'] == m))}, "
        f"5% {_f3(next(r['cv_5pct'] for r in rows if r['model'] == m))}, "
        f"10% {_f3(next(r['cv_10pct'] for r in rows if r['model'] == m))}"
        for m in models
    ]
    return body + [""] + notes


def _star(value: str, starred: bool) -> str:
    return value + "*" if starred else value


def _render_table4(rows: list[dict], md: bool) -> list[str]:
    grid_rows = []
    for r in rows:
        grid_rows.append([
            str(r["lag"]),
            _f3(r["loglik"]),
            _star(_f3(r["lr"]), r["lr_starred"]) if r["lr"] is not None else "-",
            _star(f"{r['fpe']:.3e}", r["fpe_starred"]),
            _star(_f3(r["aic"]), r["aic_starred"]),
            _star(_f3(r["sc"]), r["sc_starred"]),
            _star(_f3(r["hq"]), r["hq_starred"]),
        ])
    body = _grid(["Lag", "LogL", "LR", "FPE", "AIC", "SC", "HQ"], grid_rows, md)
    return body + ["", "* marks the criterion's selected lag"]


def _render_diag(rows: list[dict], md: bool) -> list[str]:
    out = []
    chi2 = [r for r in rows if r.get("kind") == "chi2"]
    stab = [r for r in rows if r.get("kind") == "stability"]
    if chi2:
        out.extend(_grid(
            ["Diagnostic", "Statistic", "P value"],
            [[r["name"], _f3(r["statistic"], r["stars"]), _f3(r["p_value"])]
             for r in chi2],
            md,
        ))
    if stab:
        out.extend(_grid(
            ["Stability test", "Result"],
            [[r["name"], "Stable" if r["stable"] else "Unstable"] for r in stab],
            md,
        ))
    if chi2:
        out.append(f"Diagnostics equation: {chi2[0]['equation']}")
    return out


def _render_table5(rows: list[dict], meta: dict, md: bool) -> list[str]:
    rank = [r for r in rows if r.get("kind") == "rank"]
    body = _grid(
        ["H0", "Eigenvalue", "Trace", "Max eigenvalue"],
        [[f"r = {r['null_rank']}" if r["null_rank"] == 0 else f"r <= {r['null_rank']}",
          _f3(r["eigenvalue"]),
          f"{_f3(r['trace'])} {'>' if r['trace_reject'] else '<='} "
          f"{_f3(r['trace_cv'], r['trace_stars'])}",
          f"{_f3(r['maxeig'])} {'>' if r['maxeig_reject'] else '<='} "
          f"{_f3(r['maxeig_cv'], r['maxeig_stars'])}"]
         for r in rank],
        md,
    )
    decided = meta.get("johansen", {}).get("decided_rank")
    level = meta.get("johansen", {}).get("level")
    out = body
    if decided is not None:
        out = out + ["", f"Decided rank at the {level:.0%} level: {decided} "
                         "(first trace null not rejected)"]
    diag = _render_diag(rows, md)
    if diag:
        out = out + [""] + diag
    return out


def _render_table6(rows: list[dict], meta: dict, md: bool) -> list[str]:
    coef = [r for r in rows if r.get("kind") == "coefficient"]
    body = _grid(
        ["Variable", "Coefficient", "Std. Error", "t-Statistic"],
        [[r["name"], _f3(r["estimate"], r["stars"]), _f3(r["se"]),
          _f3(r["t_ratio"])] for r in coef],
        md,
    )
    extras = []
    dols_meta = meta.get("dols_fit", {})
    if dols_meta:
        extras = ["", f"R-squared {_f3(dols_meta['r2'])}; effective obs "
                      f"{dols_meta['n_obs']}; HAC bandwidth {dols_meta['bandwidth']}"]
    diag = _render_diag(rows, md)
    if diag:
        extras = extras + [""] + diag
    return body + extras


def _render(report: PaperReport, md: bool) -> str:
    lines: list[str] = []
    h1 = "# " if md else ""
    h2 = "## " if md else ""
    lines.append(f"{h1}Cointegration analysis report")
    lines.append("")
    caveats = report.meta.get("caveats", [])
    for caveat in caveats:
        lines.append(f"**CAVEAT:** {caveat}" if md else f"CAVEAT: {caveat}")
    if caveats:
        lines.append("")
    renderers = {
        "table1": lambda rows: _render_table1(rows, md),
        "table2": lambda rows: _render_table2(rows, md),
        "table3": lambda rows: _render_table3(rows, md),
        "table4": lambda rows: _render_table4(rows, md),
        "table5": lambda rows: _render_table5(rows, report.meta, md),
        "table6": lambda rows: _render_table6(rows, report.meta, md),
    }
    for key, rows in report.tables().items():
        lines.append(h2 + _TITLES[key])
        lines.append("")
        if rows:
            lines.extend(renderers[key](rows))
        else:
            lines.append("(skipped: no rows)")
        lines.append("")
    lines.append(h2 + "Notes")
    lines.append("")
    meta = report.meta
    lines.append("***, **, and * denote significance at the 1%, 5%, and 10% level.")
    lines.append(f"Data: {meta['data']['provenance']}; sha256 {meta['data']['sha256']}")
    lines.append(f"Package: {meta['package']['name']} {meta['package']['version']}")
    lines.append(f"Johansen deterministic case: {meta['defaults_used']['johansen_det_case']}; "
                 f"lagged differences: {meta['defaults_used']['johansen_diff_lags']['value']} "
                 f"({meta['defaults_used']['johansen_diff_lags']['rule']})")
    lines.append(f"ADF lag policy: {meta['defaults_used']['adf_lag_policy']}; "
                 f"PP bandwidth: {meta['defaults_used']['pp_bandwidth']}")
    lines.append("")
    return "\n".join(lines)


def _render_csv(report: PaperReport) -> str:
    import csv as _csv

    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    for key, rows in report.tables().items():
        writer.writerow([f"# {key}"])
        if not rows:
            writer.writerow(["# (skipped: no rows)"])
            continue
        columns: list[str] = []
        for row in rows:
            for col in row:
                if col not in columns:
                    columns.append(col)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row.get(c) is None else row.get(c, "")
                             for c in columns])
    return buf.getvalue()


def emit(report: PaperReport, format: str = "text") -> bytes:
    """Serialize the report; see FORMATS for the supported names."""
    if format == "json":
        text = json.dumps(report.as_dict(), sort_keys=True, indent=2,
                          default=_json_default) + "\n"
    elif format == "csv":
        text = _render_csv(report)
    elif format == "markdown":
        text = _render(report, md=True)
    elif format == "text":
        text = _render(report, md=False)
    else:
        raise ConfigError(f"unknown format {format!r}; choose from {FORMATS}")
    return text.encode("utf-8")
