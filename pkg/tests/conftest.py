"""Shared fixtures: the frozen reference dataset and the bundled macro data."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from cointegra import Dataset, PipelineConfig, TimeSeries, build_dataset, load_directory

FIXTURES = Path(__file__).parent / "fixtures"
DATA_DIR = Path(__file__).parent.parent / "src" / "cointegra" / "data"


@pytest.fixture(scope="session")
def reference_values() -> dict:
    """Frozen cross-implementation constants for the estimator oracle tests."""
    with open(FIXTURES / "reference_values.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def reference_matrix() -> np.ndarray:
    """The (50, 3) y/x1/x2 matrix the reference values were computed from."""
    return np.loadtxt(FIXTURES / "reference_dataset.csv", delimiter=",", skiprows=1)


@pytest.fixture(scope="session")
def reference_dataset(reference_matrix) -> Dataset:
    names = ("y", "x1", "x2")
    return Dataset(tuple(
        TimeSeries(name, 1970, tuple(reference_matrix[:, i]))
        for i, name in enumerate(names)
    ))


@pytest.fixture(scope="session")
def macro_records():
    return load_directory(DATA_DIR)


@pytest.fixture(scope="session")
def macro_config() -> PipelineConfig:
    return PipelineConfig()


@pytest.fixture(scope="session")
def macro_dataset(macro_records, macro_config) -> Dataset:
    return build_dataset(macro_records, macro_config)


def make_random_walk(name: str, n: int, seed: int, drift: float = 0.0) -> TimeSeries:
    rng = np.random.Generator(np.random.Philox(key=seed))
    values = np.cumsum(drift + rng.standard_normal(n))
    return TimeSeries(name, 1970, tuple(values))
