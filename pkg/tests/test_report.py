"""Report serialization: four formats, star conventions, JSON fidelity."""

import csv
import io
import json
import re
from dataclasses import replace

import numpy as np
import pytest

from cointegra.errors import ConfigError
from cointegra.pipeline import run_pipeline
from cointegra.report import FORMATS, emit


@pytest.fixture(scope="module")
def macro_report(macro_dataset, macro_config):
    return run_pipeline(macro_dataset, macro_config, provenance="bundled fixture")


@pytest.fixture(scope="module")
def text_report(macro_report):
    return emit(macro_report, "text").decode("utf-8")


def to_plain(obj):
    """Recursively convert numpy scalars so dicts compare equal to parsed JSON."""
    if isinstance(obj, dict):
        return {k: to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


class TestFormats:
    @pytest.mark.parametrize("fmt", FORMATS)
    def test_every_format_emits_bytes(self, macro_report, fmt):
        out = emit(macro_report, fmt)
        assert isinstance(out, bytes) and len(out) > 200
        out.decode("utf-8")  # must be valid UTF-8

    def test_unknown_format_rejected(self, macro_report):
        with pytest.raises(ConfigError, match="unknown format"):
            emit(macro_report, "yaml")


class TestJson:
    def test_round_trip_is_bit_exact(self, macro_report):
        parsed = json.loads(emit(macro_report, "json"))
        assert parsed == to_plain(macro_report.as_dict())

    def test_emission_is_byte_identical(self, macro_report):
        assert emit(macro_report, "json") == emit(macro_report, "json")

    def test_floats_keep_full_precision(self, macro_report):
        parsed = json.loads(emit(macro_report, "json"))
        original = macro_report.table5[0]["trace"]
        assert parsed["table5"][0]["trace"] == float(original)  # no rounding


class TestTextRendering:
    def test_all_titles_present(self, text_report):
        for title in ("Table 1. Descriptive statistics (log10 of raw values)",
                      "Table 2. Unit root tests (ADF and Phillips-Perron)",
                      "Table 3. Structural-break unit root tests (minimum-tau)",
                      "Table 4. VAR lag-order selection criteria",
                      "Table 5. Cointegration rank tests and diagnostics",
                      "Table 6. DOLS long-run estimates and diagnostics"):
            assert title in text_report

    def test_trace_rows_render_comparison_style(self, macro_report, text_report):
        # a rejecting row reads like "105.087 > 69.819**"
        row = macro_report.table5[0]
        assert row["trace_reject"]
        expected = f"{row['trace']:.3f} > {row['trace_cv']:.3f}**"
        assert expected in text_report
        # a non-rejecting row uses <= and carries no stars
        calm = next(r for r in macro_report.table5
                    if r["kind"] == "rank" and not r["trace_reject"])
        assert f"{calm['trace']:.3f} <= {calm['trace_cv']:.3f}" in text_report

    def test_rank_null_labels(self, text_report):
        assert "r = 0" in text_report
        assert "r <= 1" in text_report

    def test_decided_rank_line(self, macro_report, text_report):
        decided = macro_report.meta["johansen"]["decided_rank"]
        assert (f"Decided rank at the 5% level: {decided} "
                "(first trace null not rejected)") in text_report

    def test_statistics_use_three_decimals(self, text_report):
        assert re.search(r"-\d+\.\d{3}\*{1,3} \(k=\d+\)", text_report)  # ADF cells
        assert re.search(r"-\d+\.\d{3}\*{0,3} \(bw=\d+\)", text_report)  # PP cells

    def test_unitroot_blocks_per_spec(self, text_report):
        assert "Deterministic terms: constant" in text_report
        assert "Deterministic terms: constant+trend" in text_report

    def test_za_critical_value_footnotes(self, text_report):
        assert "Model A critical values: 1% -5.340, 5% -4.930, 10% -4.580" in text_report
        assert "Model C critical values: 1% -5.570, 5% -5.080, 10% -4.820" in text_report

    def test_lag_table_star_note_and_fpe_scientific(self, text_report):
        assert "* marks the criterion's selected lag" in text_report
        assert re.search(r"\d\.\d{3}e-\d{2}", text_report)

    def test_notes_block(self, macro_report, text_report):
        assert ("***, **, and * denote significance at the 1%, 5%, and 10% level."
                in text_report)
        assert macro_report.meta["data"]["sha256"] in text_report
        assert "Package: cointegra" in text_report
        assert "Johansen deterministic case: 3" in text_report

    def test_caveats_render_before_tables(self, macro_report):
        tagged = replace(macro_report,
                         meta={**macro_report.meta, "caveats": ["synthetic warning"]})
        text = emit(tagged, "text").decode()
        assert "CAVEAT: synthetic warning" in text
        assert text.index("CAVEAT") < text.index("Table 1")

    def test_empty_table_is_announced_not_dropped(self, macro_report):
        hollow = replace(macro_report, table3=[])
        text = emit(hollow, "text").decode()
        assert "Table 3. Structural-break unit root tests" in text
        assert "(skipped: no rows)" in text

    def test_stability_verdicts_rendered(self, macro_report, text_report):
        for row in macro_report.table5:
            if row["kind"] == "stability":
                assert ("Stable" if row["stable"] else "Unstable") in text_report


class TestMarkdown:
    def test_heading_and_pipes(self, macro_report):
        md = emit(macro_report, "markdown").decode()
        assert md.startswith("# Cointegration analysis report")
        assert "## Table 5. Cointegration rank tests and diagnostics" in md
        assert "| Series" in md

    def test_caveat_bolded(self, macro_report):
        tagged = replace(macro_report,
                         meta={**macro_report.meta, "caveats": ["synthetic warning"]})
        assert "**CAVEAT:** synthetic warning" in emit(tagged, "markdown").decode()


class TestCsv:
    def test_sections_and_row_counts(self, macro_report):
        text = emit(macro_report, "csv").decode()
        rows = list(csv.reader(io.StringIO(text)))
        markers = [i for i, r in enumerate(rows) if r and r[0].startswith("# table")]
        assert [rows[i][0] for i in markers] == [f"# table{i}" for i in range(1, 7)]
        # table1 section: marker, header, then one line per series
        start = markers[0]
        header = rows[start + 1]
        assert header[:2] == ["series", "n"]
        assert [r[0] for r in rows[start + 2:markers[1]]] == \
            [r["series"] for r in macro_report.table1]

    def test_union_columns_pad_missing_cells(self, macro_report):
        text = emit(macro_report, "csv").decode()
        rows = list(csv.reader(io.StringIO(text)))
        start = next(i for i, r in enumerate(rows) if r == ["# table2"])
        header = rows[start + 1]
        assert "lags" in header and "bandwidth" in header
        lag_col = header.index("lags")
        bw_col = header.index("bandwidth")
        adf_row = rows[start + 2]   # first data row is an ADF row
        assert adf_row[lag_col] != "" and adf_row[bw_col] == ""
        pp_row = rows[start + 3]
        assert pp_row[lag_col] == "" and pp_row[bw_col] != ""

    def test_empty_table_marked_skipped(self, macro_report):
        hollow = replace(macro_report, table4=[])
        text = emit(hollow, "csv").decode()
        assert "# (skipped: no rows)" in text
