"""One-off generator for the frozen cross-implementation reference values.

Requires statsmodels (NOT a package dependency; install it ad hoc to re-run).
Writes tests/fixtures/reference_dataset.csv and reference_values.json. The
JSON is the committed oracle: the package's own estimators must reproduce the
OLS coefficients, the fixed-lag ADF tau and the Johansen eigenvalues to 1e-6.

Run from the repository root:  python3 scripts/gen_reference_values.py
"""

from __future__ import annotations

import json
import pathlib

import numpy as np

SEED = 20240711
T = 50


def make_dataset() -> np.ndarray:
    """Three cointegrated-ish random-walk series, 50 annual observations."""
    rng = np.random.Generator(np.random.Philox(key=SEED))
    e = rng.standard_normal((T, 3))
    x1 = np.cumsum(0.6 * e[:, 0])
    x2 = np.cumsum(0.4 * e[:, 0] + 0.5 * e[:, 1])
    y = 1.5 + 0.8 * x1 - 0.4 * x2 + 0.7 * e[:, 2]
    return np.column_stack([y, x1, x2])


def main() -> None:
    import statsmodels.api as sm
    from statsmodels.tsa.stattools import adfuller
    from statsmodels.tsa.vector_ar.vecm import coint_johansen

    data = make_dataset()
    y, x1, x2 = data[:, 0], data[:, 1], data[:, 2]

    X = sm.add_constant(np.column_stack([x1, x2]))
    ols = sm.OLS(y, X).fit()

    adf_stat = adfuller(y, maxlag=1, regression="c", autolag=None)[0]

    # det_order=0 puts an unrestricted constant in both auxiliary regressions.
    joh = coint_johansen(data, det_order=0, k_ar_diff=1)

    out = {
        "seed": SEED,
        "n_obs": T,
        "statsmodels_version": __import__("statsmodels").__version__,
        "ols": {
            "design": "y ~ 1 + x1 + x2",
            "coefficients": [float(c) for c in ols.params],
        },
        "adf": {
            "series": "y",
            "regression": "constant",
            "fixed_lags": 1,
            "tau": float(adf_stat),
        },
        "johansen": {
            "det_case": 3,
            "diff_lags": 1,
            "eigenvalues": [float(v) for v in joh.eig],
            "trace_stats": [float(v) for v in joh.trace_stat],
        },
    }

    fixtures = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)

    header = "y,x1,x2"
    np.savetxt(fixtures / "reference_dataset.csv", data, delimiter=",",
               header=header, comments="", fmt="%.17g")
    (fixtures / "reference_values.json").write_text(json.dumps(out, indent=2) + "\n")
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
