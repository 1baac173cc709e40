"""CLI behavior: exit codes, output contracts, config/data plumbing."""

import csv
import io
import json

import pytest

from cointegra.cli import build_parser, default_data_dir, load_config, main
from cointegra.errors import ConfigError
from cointegra.pipeline import PipelineConfig

PLAIN_CSV = "year,value\n" + "\n".join(
    f"{1990 + i},{100.0 + 3.0 * i + (i % 4)}" for i in range(30)
) + "\n"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_success_is_zero(self, capsys):
        code, out, err = run_cli(capsys, "figure-data")
        assert code == 0 and err == ""

    def test_config_error_is_two(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"no_such_knob": 1}')
        code, _, err = run_cli(capsys, "pipeline", "--config", str(bad))
        assert code == 2
        assert "unknown config keys: no_such_knob" in err

    def test_data_error_is_three(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "pipeline",
                               "--data", str(tmp_path / "absent.csv"))
        assert code == 3
        assert "cannot read" in err

    def test_numerical_error_is_four(self, capsys, tmp_path):
        flat = tmp_path / "FLAT.csv"
        flat.write_text("year,value\n" + "\n".join(
            f"{1990 + i},7.5" for i in range(30)) + "\n")
        code, _, err = run_cli(capsys, "unitroot",
                               "--data", str(flat), "--series", "FLAT")
        assert code in (3, 4)  # constant series: domain or rank failure
        assert err.startswith("cointegra: error:")

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["--version"])
        assert excinfo.value.code == 0
        assert capsys.readouterr().out.startswith("cointegra ")


class TestPipelineCommand:
    def test_json_output_is_deterministic(self, capsys):
        code1, out1, _ = run_cli(capsys, "pipeline", "--format", "json")
        code2, out2, _ = run_cli(capsys, "pipeline", "--format", "json")
        assert code1 == code2 == 0
        assert out1 == out2
        parsed = json.loads(out1)
        assert set(parsed) == {"meta"} | {f"table{i}" for i in range(1, 7)}

    def test_text_output_has_all_tables(self, capsys):
        code, out, _ = run_cli(capsys, "pipeline")
        assert code == 0
        for i in range(1, 7):
            assert f"Table {i}." in out


class TestStageCommands:
    def test_unitroot_series_filter(self, capsys):
        code, out, _ = run_cli(capsys, "unitroot", "--series", "EXP",
                               "--spec", "constant", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 4  # one series, one spec, 2 forms x 2 tests
        assert {r["series"] for r in rows} == {"EXP"}
        assert {r["test"] for r in rows} == {"adf", "pp"}

    def test_za_single_model(self, capsys):
        code, out, _ = run_cli(capsys, "za", "--series", "INF",
                               "--spec", "A", "--format", "json")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert len(rows) == 1
        assert rows[0]["model"] == "A"
        assert rows[0]["cv_5pct"] == -4.93

    def test_lagselect_spec_sets_pmax(self, capsys):
        code, out, _ = run_cli(capsys, "lagselect", "--spec", "1",
                               "--format", "json")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert [r["lag"] for r in rows] == [0, 1]

    def test_johansen_summary_row(self, capsys):
        code, out, _ = run_cli(capsys, "johansen", "--format", "json")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert rows[-1]["det_case"] == 3
        assert rows[-1]["decided_rank"] >= 0
        assert len(rows) == 6  # five rank rows plus the summary

    def test_dols_requires_regressors(self, capsys):
        code, _, err = run_cli(capsys, "dols", "--vars", "EXP")
        assert code == 2
        assert "dependent plus at least one regressor" in err

    def test_dols_spec_and_rows(self, capsys):
        code, out, _ = run_cli(capsys, "dols", "--vars", "EXP,EXC,IMP",
                               "--spec", "0,0", "--format", "json")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert [r.get("name") for r in rows[:-1]] == ["EXC", "IMP", "C"]
        assert rows[-1]["bandwidth"] >= 0

    def test_diagnose_requires_regressors(self, capsys):
        code, _, err = run_cli(capsys, "diagnose", "--vars", "EXP")
        assert code == 2
        assert "dependent plus regressors" in err

    def test_diagnose_rows(self, capsys):
        code, out, _ = run_cli(capsys, "diagnose", "--format", "json",
                               "--spec", "white-no-cross")
        assert code == 0
        rows = json.loads(out)["rows"]
        names = [r["name"] for r in rows]
        assert names[:4] == ["breusch-godfrey", "white-no-cross",
                             "jarque-bera", "ramsey-reset"]
        assert [r["name"] for r in rows if r["kind"] == "stability"] == \
            ["CUSUM", "CUSUMSQ"]


class TestFigureData:
    def test_default_emits_three_raw_series(self, capsys):
        code, out, _ = run_cli(capsys, "figure-data")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["year", "EXP", "EXC", "INF"]
        assert rows[1][0] == "1995"
        assert len(rows) == 30  # header + 29 years
        # values are raw levels, not logs: exports are in the hundreds
        assert float(rows[1][1]) > 10.0

    def test_series_selection(self, capsys):
        code, out, _ = run_cli(capsys, "figure-data", "--series", "FDI,IMP")
        assert code == 0
        assert out.splitlines()[0] == "year,FDI,IMP"

    def test_unknown_series_rejected(self, capsys):
        code, _, err = run_cli(capsys, "figure-data", "--series", "GDP")
        assert code == 2
        assert "'GDP' not in dataset" in err


class TestDataPlumbing:
    def test_plain_csv_with_name_flag(self, capsys, tmp_path):
        f = tmp_path / "anything.csv"
        f.write_text(PLAIN_CSV)
        code, out, _ = run_cli(capsys, "unitroot", "--data", str(f),
                               "--name", "GROWTH", "--series", "GROWTH",
                               "--spec", "constant", "--format", "csv")
        assert code == 0
        assert {r["series"] for r in csv.DictReader(io.StringIO(out))} == {"GROWTH"}

    def test_plain_csv_defaults_to_file_stem(self, capsys, tmp_path):
        f = tmp_path / "GROWTH.csv"
        f.write_text(PLAIN_CSV)
        code, out, _ = run_cli(capsys, "unitroot", "--data", str(f),
                               "--series", "GROWTH", "--spec", "constant",
                               "--format", "csv")
        assert code == 0
        assert "GROWTH" in out

    def test_data_dir_env_override(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("COINTEGRA_DATA_DIR", str(tmp_path))
        assert default_data_dir() == tmp_path
        code, _, err = run_cli(capsys, "pipeline")
        assert code == 3
        assert "no CSV files found" in err

    def test_bundled_default_when_env_unset(self, monkeypatch):
        monkeypatch.delenv("COINTEGRA_DATA_DIR", raising=False)
        assert default_data_dir().name == "data"
        assert (default_data_dir() / "wdi_panel.csv").exists() or \
            any(default_data_dir().glob("*.csv"))


class TestLoadConfig:
    def test_none_gives_defaults(self):
        assert load_config(None) == PipelineConfig()

    def test_overrides_applied(self, tmp_path):
        f = tmp_path / "c.json"
        f.write_text('{"pmax": 3, "za_models": ["A", "B", "C"], "level": 0.1}')
        config = load_config(f)
        assert config.pmax == 3
        assert config.za_models == ("A", "B", "C")
        assert config.level == 0.1

    def test_invalid_json_rejected(self, tmp_path):
        f = tmp_path / "c.json"
        f.write_text("{pmax: 3}")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_config(f)

    def test_non_object_rejected(self, tmp_path):
        f = tmp_path / "c.json"
        f.write_text("[1, 2]")
        with pytest.raises(ConfigError, match="must hold a JSON object"):
            load_config(f)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read config file"):
            load_config(tmp_path / "absent.json")

    def test_field_validation_still_runs(self, tmp_path):
        f = tmp_path / "c.json"
        f.write_text('{"level": 0.2}')
        with pytest.raises(ConfigError, match="unsupported level"):
            load_config(f)


class TestMcCvCommand:
    def test_quantiles_quick_run(self, capsys):
        code, out, _ = run_cli(capsys, "mc-cv", "--target", "df:constant",
                               "--T", "50", "--reps", "400", "--seed", "7",
                               "--format", "json")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert [r["level"] for r in rows] == [0.01, 0.05, 0.1]
        assert all(r["quantile"] < 0 for r in rows)
        assert all(r["se"] > 0 for r in rows)

    def test_single_level_flag(self, capsys):
        code, out, _ = run_cli(capsys, "mc-cv", "--target", "df:constant",
                               "--T", "50", "--reps", "400", "--seed", "7",
                               "--level", "0.05", "--format", "json")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert len(rows) == 1 and rows[0]["level"] == 0.05

    def test_quantiles_worker_invariance(self, capsys):
        argv = ["mc-cv", "--target", "za:A", "--T", "60", "--reps", "300",
                "--seed", "11", "--format", "csv"]
        code1, out1, _ = run_cli(capsys, *argv, "--workers", "1")
        code2, out2, _ = run_cli(capsys, *argv, "--workers", "2")
        assert code1 == code2 == 0
        assert out1 == out2

    def test_unknown_target_rejected(self, capsys):
        code, _, err = run_cli(capsys, "mc-cv", "--target", "kpss",
                               "--T", "50", "--reps", "400")
        assert code == 2
        assert "unknown mc-cv target" in err

    def test_unknown_action_rejected(self, capsys):
        code, _, err = run_cli(capsys, "mc-cv", "tables")
        assert code == 2
        assert "unknown mc-cv action" in err

    def test_validate_tables_requires_min_reps(self, capsys):
        code, _, err = run_cli(capsys, "mc-cv", "validate-tables",
                               "--reps", "10")
        assert code == 2
        assert "replications" in err


class TestParser:
    def test_stage_spec_help_strings_differ(self):
        parser = build_parser()
        helps = {}
        for action in parser._subparsers._group_actions[0].choices.items():
            name, sub = action
            for a in sub._actions:
                if "--spec" in getattr(a, "option_strings", ()):
                    helps[name] = a.help
        assert helps["unitroot"] != helps["za"] != helps["dols"]
        assert "leads,lags" in helps["dols"]

    def test_level_choices_enforced(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["unitroot", "--level", "0.2"])
        assert excinfo.value.code == 2
