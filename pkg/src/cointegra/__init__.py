"""Unit-root, cointegration and long-run estimation toolkit for annual macro series."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    CointegraError,
    ConfigError,
    DataError,
    InsufficientDataError,
    NumericalError,
)
from .series import Dataset, SeriesSummary, TimeSeries, describe, difference, log10_series, shift
from .linreg import (
    CovarianceKind,
    InfoCriteria,
    RegressionFit,
    auto_bandwidth,
    criteria_from_loglik,
    info_criteria,
    newey_west_longrun_variance,
    ols_fit,
)
from .unitroot import LagPolicy, UnitRootResult, adf_test, df_critical_value, pp_test
from .zivot_andrews import ZA_CV, ZaResult, za_test
from .varselect import LagSelectionRow, LagSelectionTable, lag_selection_table
from .johansen import (
    EigenSolution,
    RankTestResult,
    RankTestRow,
    VecmSpec,
    johansen_critical_values,
    johansen_eigen,
    rank_test,
)
from .dols import DolsFit, DolsSpec, dols_fit
from .diagnostics import (
    CusumPath,
    DiagnosticsReport,
    TestOutcome,
    breusch_godfrey,
    cusum,
    cusumsq,
    het_test,
    jarque_bera,
    ramsey_reset,
    run_battery,
)
from .mccv import (
    DEFAULT_SEED,
    McConfig,
    McTarget,
    QuantileEstimate,
    QuantileTable,
    ValidationEntry,
    ValidationReport,
    simulate_quantiles,
    validate_tables,
)
from .ingest import (
    IngestAudit,
    RawRecord,
    audit_records,
    build_dataset,
    build_raw_dataset,
    detect_layout,
    load_directory,
    load_path,
    parse_csv,
)
from .pipeline import PaperReport, PipelineConfig, config_with, run_pipeline
from .report import FORMATS, emit

__all__ = [
    "__version__",
    "CointegraError",
    "ConfigError",
    "DataError",
    "InsufficientDataError",
    "NumericalError",
    "Dataset",
    "SeriesSummary",
    "TimeSeries",
    "describe",
    "difference",
    "log10_series",
    "shift",
    "CovarianceKind",
    "InfoCriteria",
    "RegressionFit",
    "auto_bandwidth",
    "criteria_from_loglik",
    "info_criteria",
    "newey_west_longrun_variance",
    "ols_fit",
    "LagPolicy",
    "UnitRootResult",
    "adf_test",
    "df_critical_value",
    "pp_test",
    "ZA_CV",
    "ZaResult",
    "za_test",
    "LagSelectionRow",
    "LagSelectionTable",
    "lag_selection_table",
    "EigenSolution",
    "RankTestResult",
    "RankTestRow",
    "VecmSpec",
    "johansen_critical_values",
    "johansen_eigen",
    "rank_test",
    "DolsFit",
    "DolsSpec",
    "dols_fit",
    "CusumPath",
    "DiagnosticsReport",
    "TestOutcome",
    "breusch_godfrey",
    "cusum",
    "cusumsq",
    "het_test",
    "jarque_bera",
    "ramsey_reset",
    "run_battery",
    "DEFAULT_SEED",
    "McConfig",
    "McTarget",
    "QuantileEstimate",
    "QuantileTable",
    "ValidationEntry",
    "ValidationReport",
    "simulate_quantiles",
    "validate_tables",
    "IngestAudit",
    "RawRecord",
    "audit_records",
    "build_dataset",
    "build_raw_dataset",
    "detect_layout",
    "load_directory",
    "load_path",
    "parse_csv",
    "PaperReport",
    "PipelineConfig",
    "config_with",
    "run_pipeline",
    "FORMATS",
    "emit",
]
