"""
Tests for the command line.

Scenarios:
- train writes a model and a non-increasing trace, deterministically
- eval reports one-step metrics that recompute from the CSV rows
- compare emits per-seed and aggregate rows
- predict emits consecutive months
- eval and compare write their JSON reports without --out
- exit statuses: 1 for bad input or unwritable output, 2 for divergence
- precedence of flags, config file and environment
"""

import io
import json

import numpy as np
import pandas as pd
import pytest

from applications.cli.main import main
from applications.timeseries_data.sample import build_sample_series
from applications.timeseries_data.schemas import TimeSeries
from applications.timeseries_data.services import SeriesService


def run(*argv) -> int:
    return main([str(a) for a in argv])


def train_model(out, sample_csv, quick_config, *extra) -> int:
    return run("train", "--data", sample_csv, "--algorithm", "mpso-bp", "--out", out, "--config", quick_config, *extra)


@pytest.mark.integration
class TestTrain:
    def test_writes_model_and_trace(self, tmp_path, sample_csv, quick_config, capsys):
        """mpso-bp, seed 7: model file exists and the trace never increases."""
        assert train_model(tmp_path / "run", sample_csv, quick_config, "--seed", 7, "--split", "2015-01") == 0

        model = json.loads((tmp_path / "run" / "model.json").read_text())
        assert model["trainer"] == "MPSO-BP"
        assert model["seed"] == 7
        assert model["topology"] == {"input": 12, "hidden": 3, "output": 1}

        trace = pd.read_csv(tmp_path / "run" / "trace.csv")
        assert list(trace.columns) == ["iteration", "global_best_fitness"]
        assert list(trace["iteration"]) == [1, 2, 3, 4, 5]
        assert trace["global_best_fitness"].is_monotonic_decreasing

        out = capsys.readouterr().out
        assert "final fitness:" in out
        assert "iterations: 5" in out

    def test_byte_identical_reruns(self, tmp_path, sample_csv, quick_config):
        train_model(tmp_path / "a", sample_csv, quick_config, "--seed", 3)
        train_model(tmp_path / "b", sample_csv, quick_config, "--seed", 3)
        assert (tmp_path / "a" / "model.json").read_bytes() == (tmp_path / "b" / "model.json").read_bytes()
        assert (tmp_path / "a" / "trace.csv").read_bytes() == (tmp_path / "b" / "trace.csv").read_bytes()

    def test_bp_trace_counts_epochs(self, tmp_path, sample_csv, quick_config):
        status = run("train", "--data", sample_csv, "--algorithm", "bp", "--out", tmp_path, "--config", quick_config)
        assert status == 0
        model = json.loads((tmp_path / "model.json").read_text())
        trace = pd.read_csv(tmp_path / "trace.csv")
        assert len(trace) == model["iterations_used"]

    def test_refine_trace_written_by_default(self, tmp_path, sample_csv, quick_config, capsys):
        config = tmp_path / "refine.conf"
        config.write_text(quick_config.read_text() + "target_loss = 0.000001\n")
        assert train_model(tmp_path / "run", sample_csv, config) == 0
        assert len(pd.read_csv(tmp_path / "run" / "refine_trace.csv")) == 20
        assert "refine epochs: 20" in capsys.readouterr().out

    def test_refine_disabled(self, tmp_path, sample_csv, quick_config):
        config = tmp_path / "swarm_only.conf"
        config.write_text(quick_config.read_text() + "bp_refine = false\n")
        assert train_model(tmp_path / "run", sample_csv, config) == 0
        assert json.loads((tmp_path / "run" / "model.json").read_text())["refine_epochs"] == 0
        assert not (tmp_path / "run" / "refine_trace.csv").exists()

    def test_config_not_utf8(self, tmp_path, sample_csv, capsys):
        config = tmp_path / "latin1.conf"
        config.write_bytes(b"# \xff\xfe caf\xe9\nswarm_size = 6\n")
        assert train_model(tmp_path / "run", sample_csv, config) == 1
        err = capsys.readouterr().err
        assert err.startswith("error[config_error]")
        assert str(config) in err

    def test_out_is_an_existing_file(self, tmp_path, sample_csv, quick_config, capsys):
        occupied = tmp_path / "occupied"
        occupied.write_text("not a directory\n")
        assert train_model(occupied, sample_csv, quick_config) == 1
        assert capsys.readouterr().err.startswith("error[data_file_error]")
        assert occupied.read_text() == "not a directory\n"

    def test_missing_data_file(self, tmp_path, quick_config, capsys):
        missing = tmp_path / "nowhere.csv"
        assert train_model(tmp_path / "run", missing, quick_config) == 1
        err = capsys.readouterr().err
        assert str(missing) in err
        assert err.startswith("error[data_file_error]")

    def test_unknown_algorithm(self, tmp_path, sample_csv, capsys):
        assert run("train", "--data", sample_csv, "--algorithm", "anfis", "--out", tmp_path) == 1
        assert "error[config_error]" in capsys.readouterr().err

    def test_unknown_config_key(self, tmp_path, sample_csv):
        config = tmp_path / "typo.conf"
        config.write_text("swarm_sise = 10\n")
        assert train_model(tmp_path / "run", sample_csv, config) == 1

    def test_malformed_csv(self, tmp_path, quick_config, capsys):
        data = tmp_path / "bad.csv"
        data.write_text("month,value\n2015-01,36.1\n2015-03,35.2\n")
        assert train_model(tmp_path / "run", data, quick_config) == 1
        assert "2015-02" in capsys.readouterr().err

    def test_divergence_exits_2(self, tmp_path, sample_csv, quick_config):
        config = tmp_path / "wild.conf"
        config.write_text("learning_rate = 100000000\nmomentum = 0.9\nmax_epochs = 500\ntarget_loss = 0.000000001\n")
        with np.errstate(all="ignore"):
            status = run("train", "--data", sample_csv, "--algorithm", "bp", "--out", tmp_path, "--config", config)
        assert status == 2


@pytest.mark.integration
class TestEval:
    def test_constant_series_perfect_model(self, tmp_path, constant_model_file):
        data = tmp_path / "flat.csv"
        flat = TimeSeries.from_values(build_sample_series().start, [35.0] * 24)
        data.write_text(SeriesService.series_to_csv(flat))
        model = constant_model_file(35.0)
        assert run("eval", "--model", model, "--data", data, "--split", "2012-01", "--out", tmp_path / "eval") == 0
        report = json.loads((tmp_path / "eval" / "metrics.json").read_text())
        assert report["mse"] == 0.0
        assert len(report["rows"]) == 12

    def test_published_pair_in_report(self, tmp_path, sample_csv, constant_model_file, capsys):
        """Model predicting 36.18 against the published 36.82 for 2015-01: error 1.739 %."""
        model = constant_model_file(36.18)
        assert run("eval", "--model", model, "--data", sample_csv, "--split", "2015-01", "--out", tmp_path / "eval") == 0
        report = json.loads((tmp_path / "eval" / "metrics.json").read_text())
        first = report["rows"][0]
        assert first["month"] == "2015-01"
        assert first["true"] == 36.82
        assert first["relative_error"] == pytest.approx(1.739, abs=0.01)
        assert "Relative error %" in capsys.readouterr().out

    def test_aggregates_match_csv_rows(self, tmp_path, sample_csv, quick_config):
        train_model(tmp_path / "run", sample_csv, quick_config, "--split", "2015-01")
        status = run("eval", "--model", tmp_path / "run" / "model.json", "--data", sample_csv, "--split", "2015-01", "--out", tmp_path / "eval")
        assert status == 0

        report = json.loads((tmp_path / "eval" / "metrics.json").read_text())
        rows = pd.read_csv(tmp_path / "eval" / "metrics.csv", float_precision="round_trip")
        assert len(rows) == 12
        assert report["mse"] == float(np.mean((rows["true"] - rows["predicted"]).to_numpy() ** 2))
        assert report["average_relative_error"] == float(np.mean(np.abs(rows["relative_error_pct"].to_numpy())))
        assert report["max_relative_error"] == float(np.max(np.abs(rows["relative_error_pct"].to_numpy())))
        assert (tmp_path / "eval" / "metrics.txt").read_text().count("2015-") == 12

    def test_reports_written_next_to_model_without_out(self, tmp_path, sample_csv, constant_model_file, capsys):
        model = constant_model_file(36.0)
        assert run("eval", "--model", model, "--data", sample_csv, "--split", "2015-01") == 0
        report = json.loads((tmp_path / "metrics.json").read_text())
        assert len(report["rows"]) == 12
        assert (tmp_path / "metrics.csv").exists()
        assert "Relative error %" in capsys.readouterr().out

    def test_out_under_a_regular_file(self, tmp_path, sample_csv, constant_model_file, capsys):
        occupied = tmp_path / "occupied"
        occupied.write_text("")
        status = run("eval", "--model", constant_model_file(36.0), "--data", sample_csv, "--split", "2015-01", "--out", occupied / "eval")
        assert status == 1
        assert capsys.readouterr().err.startswith("error[data_file_error]")

    def test_spot_months(self, tmp_path, sample_csv, constant_model_file, capsys):
        model = constant_model_file(36.0)
        status = run("eval", "--model", model, "--data", sample_csv, "--split", "2015-01", "--spot-months", "2012-11,2014-04")
        assert status == 0
        out = capsys.readouterr().out
        assert "Accuracy (%)" in out
        assert "2012-11" in out

    def test_split_required(self, tmp_path, sample_csv, constant_model_file, capsys):
        assert run("eval", "--model", constant_model_file(36.0), "--data", sample_csv) == 1
        assert "split" in capsys.readouterr().err

    def test_not_enough_history_for_window(self, tmp_path, sample_csv, constant_model_file):
        assert run("eval", "--model", constant_model_file(36.0), "--data", sample_csv, "--split", "2011-06") == 1


@pytest.mark.integration
class TestCompare:
    def test_rows_and_aggregates(self, tmp_path, sample_csv, quick_config, capsys):
        """3 trainers x 2 seeds -> 6 per-seed rows and 3 aggregate rows."""
        argv = ["compare", "--data", sample_csv, "--split", "2015-01", "--seeds", "1,2", "--config", quick_config]
        assert run(*argv, "--out", tmp_path / "a") == 0
        report = json.loads((tmp_path / "a" / "comparison.json").read_text())
        assert len(report["rows"]) == 6
        assert [row["model"] for row in report["aggregate"]] == ["BP", "PSO-BP", "MPSO-BP"]
        for aggregate in report["aggregate"]:
            iterations = [r["iterations"] for r in report["rows"] if r["model"] == aggregate["model"]]
            assert aggregate["iterations"] == float(np.median(iterations))
        assert "Aggregated over seeds 1,2" in capsys.readouterr().out

        assert run(*argv, "--out", tmp_path / "b") == 0
        assert (tmp_path / "a" / "comparison.json").read_bytes() == (tmp_path / "b" / "comparison.json").read_bytes()

    def test_report_written_to_working_directory_without_out(self, tmp_path, sample_csv, quick_config, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert run("compare", "--data", sample_csv, "--split", "2015-01", "--seeds", "0", "--config", quick_config) == 0
        report = json.loads((tmp_path / "comparison.json").read_text())
        assert [row["model"] for row in report["rows"]] == ["BP", "PSO-BP", "MPSO-BP"]
        assert (tmp_path / "comparison.txt").exists()

    def test_iterations_include_fine_tuning(self, tmp_path, sample_csv, quick_config):
        config = tmp_path / "refine.conf"
        config.write_text(quick_config.read_text() + "target_loss = 0.000001\n")
        argv = ["compare", "--data", sample_csv, "--split", "2015-01", "--seeds", "0", "--config", config]
        assert run(*argv, "--out", tmp_path / "cmp") == 0
        rows = {row["model"]: row for row in json.loads((tmp_path / "cmp" / "comparison.json").read_text())["rows"]}
        assert rows["PSO-BP"]["refine_epochs"] == rows["MPSO-BP"]["refine_epochs"] == 20
        assert rows["MPSO-BP"]["iterations"] == 5 + 20
        assert rows["BP"]["refine_epochs"] == 0

    def test_bad_seed_list(self, tmp_path, sample_csv):
        assert run("compare", "--data", sample_csv, "--split", "2015-01", "--seeds", "1,x") == 1


@pytest.mark.integration
class TestPredict:
    def test_twelve_consecutive_months(self, tmp_path, sample_csv, quick_config, capsys):
        train_model(tmp_path / "run", sample_csv, quick_config)
        capsys.readouterr()
        assert run("predict", "--model", tmp_path / "run" / "model.json", "--data", sample_csv, "--horizon", 12) == 0
        frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
        assert list(frame.columns) == ["month", "predicted_kwh_per_t", "clamped"]
        assert list(frame["month"]) == [f"2016-{m:02d}" for m in range(1, 13)]

    def test_horizon_one_matches_last_evaluation_row(self, tmp_path, sample_csv, quick_config):
        train_model(tmp_path / "run", sample_csv, quick_config)
        model = tmp_path / "run" / "model.json"
        run("eval", "--model", model, "--data", sample_csv, "--split", "2015-01", "--out", tmp_path / "eval")

        truncated = tmp_path / "to_2015_11.csv"
        series = build_sample_series()
        truncated.write_text(SeriesService.series_to_csv(TimeSeries(points=series.points[:-1])))
        assert run("predict", "--model", model, "--data", truncated, "--horizon", 1, "--out", tmp_path / "f.csv") == 0

        forecast = pd.read_csv(tmp_path / "f.csv", float_precision="round_trip")
        rows = pd.read_csv(tmp_path / "eval" / "metrics.csv", float_precision="round_trip")
        assert forecast["month"].iloc[0] == rows["month"].iloc[-1] == "2015-12"
        assert forecast["predicted_kwh_per_t"].iloc[0] == rows["predicted"].iloc[-1]

    def test_rejects_training_flags(self, tmp_path, sample_csv, constant_model_file, capsys):
        status = run("predict", "--model", constant_model_file(36.0), "--data", sample_csv, "--horizon", 1, "--seed", 3)
        assert status == 1
        assert "error[config_error]" in capsys.readouterr().err

    def test_horizon_zero(self, tmp_path, sample_csv, constant_model_file, capsys):
        assert run("predict", "--model", constant_model_file(36.0), "--data", sample_csv, "--horizon", 0) == 1
        assert "horizon" in capsys.readouterr().err


@pytest.mark.integration
class TestSettingsPrecedence:
    def test_environment_seed_is_default(self, tmp_path, sample_csv, quick_config, monkeypatch):
        monkeypatch.setenv("SWARM_FORECAST_SEED", "11")
        train_model(tmp_path / "run", sample_csv, quick_config)
        assert json.loads((tmp_path / "run" / "model.json").read_text())["seed"] == 11

    def test_config_file_beats_environment(self, tmp_path, sample_csv, quick_config, monkeypatch):
        monkeypatch.setenv("SWARM_FORECAST_SEED", "11")
        config = tmp_path / "seeded.conf"
        config.write_text(quick_config.read_text() + "seed = 12\n")
        train_model(tmp_path / "run", sample_csv, config)
        assert json.loads((tmp_path / "run" / "model.json").read_text())["seed"] == 12

    def test_flag_beats_config_file(self, tmp_path, sample_csv, quick_config):
        config = tmp_path / "seeded.conf"
        config.write_text(quick_config.read_text() + "seed = 12\n")
        train_model(tmp_path / "run", sample_csv, config, "--seed", 13)
        assert json.loads((tmp_path / "run" / "model.json").read_text())["seed"] == 13

    def test_log_flags_reconfigure_logging(self, tmp_path, sample_csv, quick_config, logging_setup):
        train_model(tmp_path / "run", sample_csv, quick_config, "--log-level", "debug", "--log-format", "json")
        logging_setup.assert_called_with("DEBUG", "json")
