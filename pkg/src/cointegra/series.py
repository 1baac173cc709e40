"""Annual time-series containers and elementary transforms.

Series are immutable: every transform returns a new object, so fits and
reports can share inputs freely across threads without defensive copies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, InsufficientDataError

__all__ = [
    "TimeSeries",
    "Dataset",
    "SeriesSummary",
    "log10_series",
    "difference",
    "shift",
    "describe",
]


@dataclass(frozen=True)
class TimeSeries:
    """A named annual series observed on consecutive years.

    Parameters
    ----------
    name : str
        Series label, carried through transforms and reports.
    start_year : int
        Calendar year of the first observation.
    values : tuple of float
        Observations on consecutive years; must be finite and non-empty.
    """

    name: str
    start_year: int
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.name:
            raise DataError("series name must be non-empty")
        vals = tuple(float(v) for v in self.values)
        if len(vals) == 0:
            raise InsufficientDataError(f"series {self.name!r} has no observations")
        if not all(math.isfinite(v) for v in vals):
            bad = next(i for i, v in enumerate(vals) if not math.isfinite(v))
            raise DataError(
                f"series {self.name!r} has a non-finite value in year {self.start_year + bad}"
            )
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end_year(self) -> int:
        return self.start_year + len(self.values) - 1

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(range(self.start_year, self.start_year + len(self.values)))

    def to_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def value_in(self, year: int) -> float:
        if not self.start_year <= year <= self.end_year:
            raise DataError(
                f"year {year} outside the span {self.start_year}-{self.end_year} of {self.name!r}"
            )
        return self.values[year - self.start_year]

    def rename(self, name: str) -> "TimeSeries":
        return TimeSeries(name, self.start_year, self.values)

    def window(self, start_year: int, end_year: int) -> "TimeSeries":
        if start_year < self.start_year or end_year > self.end_year or start_year > end_year:
            raise DataError(
                f"window {start_year}-{end_year} not contained in "
                f"{self.start_year}-{self.end_year} of {self.name!r}"
            )
        lo = start_year - self.start_year
        hi = end_year - self.start_year + 1
        return TimeSeries(self.name, start_year, self.values[lo:hi])


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of equally-spanned, uniquely named series."""

    series: tuple[TimeSeries, ...]

    def __post_init__(self) -> None:
        if len(self.series) == 0:
            raise DataError("dataset must contain at least one series")
        names = [s.name for s in self.series]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DataError(f"duplicate series names: {', '.join(dupes)}")
        first = self.series[0]
        for s in self.series[1:]:
            if s.start_year != first.start_year or len(s) != len(first):
                raise DataError(
                    f"series {s.name!r} spans {s.start_year}-{s.end_year}, "
                    f"expected {first.start_year}-{first.end_year}"
                )

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.series)

    @property
    def start_year(self) -> int:
        return self.series[0].start_year

    @property
    def n_obs(self) -> int:
        return len(self.series[0])

    @property
    def years(self) -> tuple[int, ...]:
        return self.series[0].years

    def __getitem__(self, name: str) -> TimeSeries:
        for s in self.series:
            if s.name == name:
                return s
        raise DataError(f"no series named {name!r} in dataset ({', '.join(self.names)})")

    def __contains__(self, name: str) -> bool:
        return any(s.name == name for s in self.series)

    def to_matrix(self, names: tuple[str, ...] | list[str] | None = None) -> np.ndarray:
        """Stack the requested series as columns of a (T, k) array."""
        picked = self.names if names is None else tuple(names)
        return np.column_stack([self[n].to_array() for n in picked])

    def select(self, names: tuple[str, ...] | list[str]) -> "Dataset":
        return Dataset(tuple(self[n] for n in names))


def log10_series(s: TimeSeries) -> TimeSeries:
    """Base-10 logarithm of a strictly positive series.

    The returned series is suffixed so transformed and raw series cannot be
    confused downstream.
    """
    arr = s.to_array()
    if np.any(arr <= 0.0):
        bad = int(np.argmax(arr <= 0.0))
        raise DataError(
            f"log10 undefined for {s.name!r}: value {arr[bad]!r} in year {s.start_year + bad}"
        )
    return TimeSeries(f"{s.name}_log10", s.start_year, tuple(np.log10(arr)))


def difference(s: TimeSeries, order: int = 1) -> TimeSeries:
    """Difference a series `order` times, shortening it by `order` years."""
    if order < 1:
        raise DataError(f"difference order must be >= 1, got {order}")
    if len(s) <= order:
        raise InsufficientDataError(
            f"cannot take {order} differences of {s.name!r} with {len(s)} observations"
        )
    arr = np.diff(s.to_array(), n=order)
    return TimeSeries(f"{s.name}_d{order}", s.start_year + order, tuple(arr))


def shift(s: TimeSeries, k: int) -> TimeSeries:
    """Relabel the series years by +k without touching the values."""
    return TimeSeries(s.name, s.start_year + k, s.values)


@dataclass(frozen=True)
class SeriesSummary:
    """Row of a summary table: n, mean, sd (n-1 denominator), min, max."""

    name: str
    n: int
    mean: float
    sd: float
    minimum: float
    maximum: float
    degenerate: bool = field(default=False)


def describe(d: Dataset) -> list[SeriesSummary]:
    """Per-series summary statistics in dataset order.

    A single-observation series gets sd 0 and is flagged degenerate instead
    of raising.
    """
    rows = []
    for s in d.series:
        arr = s.to_array()
        n = arr.size
        degenerate = n < 2
        sd = 0.0 if degenerate else float(np.std(arr, ddof=1))
        rows.append(
            SeriesSummary(
                name=s.name,
                n=n,
                mean=float(np.mean(arr)),
                sd=sd,
                minimum=float(np.min(arr)),
                maximum=float(np.max(arr)),
                degenerate=degenerate,
            )
        )
    return rows
