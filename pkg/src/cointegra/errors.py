"""Exception hierarchy shared across the toolkit.

Each family carries the process exit code the CLI maps it to, so library
errors translate into stable shell semantics without string matching.
"""

from __future__ import annotations


class CointegraError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ConfigError(CointegraError):
    """Invalid or unsupported configuration (bad option, bad combination)."""

    exit_code = 2


class DataError(CointegraError):
    """Problem in the input data: parse failures, gaps, domain violations."""

    exit_code = 3


class InsufficientDataError(DataError):
    """Too few observations for the requested operation."""


class NumericalError(CointegraError):
    """Singular, collinear or otherwise numerically invalid computation."""

    exit_code = 4
