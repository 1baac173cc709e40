"""CSV ingestion for the bundled macro series.

Three layouts are understood: the World Bank WDI wide-by-year export, the
EVDS long date/value export, and a plain ``year,value`` file. Parsed cells
become RawRecords; build_dataset maps series codes onto model roles, checks
coverage, and applies the base-10 log transform.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass

from .errors import ConfigError, DataError
from .series import Dataset, TimeSeries, log10_series

__all__ = [
    "RawRecord", "parse_csv", "build_dataset", "build_raw_dataset", "SOURCES",
    "detect_layout", "load_path", "load_directory", "audit_records", "IngestAudit",
]

SOURCES = ("wdi", "evds", "plain")

_YEAR_MIN, _YEAR_MAX = 1900, 2100
_WDI_MISSING = ("", "..")
_YEAR_RE = re.compile(r"(?<!\d)(19\d{2}|20\d{2}|2100)(?!\d)")
_WDI_YEAR_COL = re.compile(r"^\s*(\d{4})(?:\s*\[YR\d{4}\])?\s*$")


@dataclass(frozen=True)
class RawRecord:
    """One (series, year) cell from a source file; value None means missing."""

    source: str
    series_code: str
    year: int
    value: float | None

    def __post_init__(self) -> None:
        if self.source not in SOURCES:
            raise ConfigError(f"unknown source {self.source!r}; choose from {SOURCES}")
        if not _YEAR_MIN <= self.year <= _YEAR_MAX:
            raise DataError(f"year {self.year} outside {_YEAR_MIN}-{_YEAR_MAX}")
        if self.value is not None and not (self.value == self.value and abs(self.value) != float("inf")):
            raise DataError(f"non-finite value for {self.series_code!r} in {self.year}")


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8-sig")
        except UnicodeDecodeError as e:
            raise DataError(f"input is not UTF-8 text: {e}") from None
    return data.lstrip("﻿")


def _cell_value(cell: str, line: int, column: str, source: str) -> float | None:
    text = cell.strip()
    if text in _WDI_MISSING:
        return None
    try:
        return float(text)
    except ValueError:
        raise DataError(
            f"line {line}: non-numeric value {text!r} in column {column!r} ({source} layout)"
        ) from None


def _parse_wdi(text: str) -> list[RawRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty WDI file") from None
    lowered = [h.strip().lower() for h in header]
    if "series code" not in lowered:
        raise DataError("WDI layout needs a 'Series Code' column")
    code_idx = lowered.index("series code")
    year_cols: list[tuple[int, int, str]] = []
    for i, h in enumerate(header):
        m = _WDI_YEAR_COL.match(h)
        if m:
            year_cols.append((i, int(m.group(1)), h.strip()))
    if not year_cols:
        raise DataError("WDI layout has no year columns (e.g. '1995 [YR1995]')")

    records: list[RawRecord] = []
    for line, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) <= max(i for i, _, _ in year_cols):
            raise DataError(f"line {line}: truncated WDI row ({len(row)} cells)")
        code = row[code_idx].strip()
        if not code:
            raise DataError(f"line {line}: empty series code")
        for i, year, label in year_cols:
            records.append(RawRecord(
                source="wdi", series_code=code, year=year,
                value=_cell_value(row[i], line, label, "wdi"),
            ))
    return records


def _parse_year(cell: str, line: int) -> int:
    text = cell.strip()
    m = _YEAR_RE.search(text)
    if not m:
        raise DataError(f"line {line}: cannot read a year from date {text!r}")
    return int(m.group(1))


def _parse_evds(text: str) -> list[RawRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty EVDS file") from None
    if len(header) < 2 or header[0].strip().lower() not in ("date", "tarih"):
        raise DataError("EVDS layout needs 'Date, <series code>' columns")
    code = header[1].strip()
    if not code:
        raise DataError("EVDS layout has an empty series-code column header")
    records: list[RawRecord] = []
    for line, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) < 2:
            raise DataError(f"line {line}: truncated EVDS row")
        year = _parse_year(row[0], line)
        records.append(RawRecord(
            source="evds", series_code=code, year=year,
            value=_cell_value(row[1], line, code, "evds"),
        ))
    return records


def _parse_plain(text: str, name: str) -> list[RawRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty plain file") from None
    lowered = [h.strip().lower() for h in header]
    if lowered[:2] != ["year", "value"]:
        raise DataError("plain layout needs a 'year,value' header")
    records: list[RawRecord] = []
    for line, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) < 2:
            raise DataError(f"line {line}: truncated row")
        try:
            year = int(row[0].strip())
        except ValueError:
            raise DataError(f"line {line}: non-integer year {row[0]!r}") from None
        records.append(RawRecord(
            source="plain", series_code=name, year=year,
            value=_cell_value(row[1], line, "value", "plain"),
        ))
    return records


def parse_csv(kind: str, data: bytes | str, name: str = "value") -> list[RawRecord]:
    """Parse one CSV export into RawRecords.

    ``kind`` selects the layout; ``name`` labels the series of a plain
    ``year,value`` file (the other layouts carry their own codes).
    """
    if kind not in SOURCES:
        raise ConfigError(f"unknown source kind {kind!r}; choose from {SOURCES}")
    text = _decode(data)
    if kind == "wdi":
        return _parse_wdi(text)
    if kind == "evds":
        return _parse_evds(text)
    return _parse_plain(text, name)


def _collect_years(records: list[RawRecord], code: str, lo: int, hi: int) -> dict[int, float]:
    got: dict[int, float] = {}
    for r in records:
        if r.series_code == code and lo <= r.year <= hi and r.value is not None:
            got[r.year] = r.value
    return got


def _align(records: list[RawRecord], config) -> tuple[TimeSeries, ...]:
    lo, hi = config.start_year, config.end_year
    missing: list[tuple[str, int]] = []
    raw: list[TimeSeries] = []
    for symbol in config.symbols():
        code = config.series_codes.get(symbol, symbol)
        got = _collect_years(records, code, lo, hi)
        absent = [y for y in range(lo, hi + 1) if y not in got]
        if absent:
            missing.extend((symbol, y) for y in absent)
            continue
        raw.append(TimeSeries(symbol, lo, tuple(got[y] for y in range(lo, hi + 1))))
    if missing:
        gaps = ", ".join(f"({s}, {y})" for s, y in missing)
        raise DataError(f"missing observations: {gaps}")
    return tuple(raw)


def build_dataset(records: list[RawRecord], config) -> Dataset:
    """Assemble the configured roles into a log10 Dataset.

    Every role must be covered for every year in the range; gaps are
    reported as (series, year) pairs. Non-positive raw values surface as
    the log transform's domain error.
    """
    raw = _align(records, config)
    return Dataset(tuple(log10_series(s).rename(s.name) for s in raw))


def build_raw_dataset(records: list[RawRecord], config) -> Dataset:
    """Same alignment as build_dataset but without the log transform."""
    return Dataset(_align(records, config))


def detect_layout(data: bytes | str) -> str:
    """Identify which of the three layouts a CSV byte stream uses."""
    text = _decode(data)
    try:
        header = next(csv.reader(io.StringIO(text)))
    except StopIteration:
        raise DataError("empty file") from None
    cells = [c.strip().lower() for c in header]
    if any(c == "series code" for c in cells):
        return "wdi"
    if cells and cells[0] in ("date", "tarih") and len(cells) >= 2:
        return "evds"
    if cells[:2] == ["year", "value"]:
        return "plain"
    raise DataError(f"unknown CSV layout (header {header[:4]!r})")


def load_path(path, name: str | None = None) -> list[RawRecord]:
    """Read one CSV file, detecting its layout.

    Plain ``year,value`` files take their series name from ``name`` or,
    failing that, the file stem.
    """
    from pathlib import Path

    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {p}: {exc}") from exc
    kind = detect_layout(data)
    return parse_csv(kind, data, name=name or p.stem)


def load_directory(path) -> list[RawRecord]:
    """Read every ``*.csv`` under ``path`` (sorted) into one record pool."""
    from pathlib import Path

    p = Path(path)
    files = sorted(p.glob("*.csv"))
    if not files:
        raise DataError(f"no CSV files found in {p}")
    records: list[RawRecord] = []
    for f in files:
        records.extend(load_path(f))
    return records


@dataclass(frozen=True)
class IngestAudit:
    """Accounting of every non-missing record: used, or rejected with cause.

    Ingestion never fabricates values, so ``used + out_of_range +
    unused_code`` always equals the number of non-missing records, and
    ``used`` equals the number of dataset cells.
    """

    used: int
    out_of_range: int
    unused_code: int
    superseded: int

    @property
    def non_missing(self) -> int:
        return self.used + self.out_of_range + self.unused_code + self.superseded


def audit_records(records: list[RawRecord], config) -> IngestAudit:
    """Classify each non-missing record as used or explicitly rejected.

    A duplicate (code, year) cell is superseded by the later record, the
    same precedence alignment uses.
    """
    codes = {config.series_codes.get(s, s) for s in config.symbols()}
    used = out_of_range = unused_code = superseded = 0
    seen: set[tuple[str, int]] = set()
    for r in reversed(records):
        if r.value is None:
            continue
        if r.series_code not in codes:
            unused_code += 1
        elif not config.start_year <= r.year <= config.end_year:
            out_of_range += 1
        elif (r.series_code, r.year) in seen:
            superseded += 1
        else:
            seen.add((r.series_code, r.year))
            used += 1
    return IngestAudit(used=used, out_of_range=out_of_range,
                       unused_code=unused_code, superseded=superseded)
