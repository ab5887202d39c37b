"""
End-to-end tests of the ``gabp`` command line on small synthetic markets
"""

import json

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from gabp import __version__
from gabp.cli import cli

ARTIFACTS = ["model.json", "fitness_trace.csv", "predictions.csv", "errors.csv", "report.json",
             "fitness.svg", "predictions.svg", "errors.svg", "error_pct.svg"]

SMALL_RUN = {
    'vol_window': 5,
    'bp': {'lr': 0.01, 'epochs': 30},
    'ga': {'pop_size': 6, 'generations': 3, 'fitness_bp_epochs': 2},
}


def _invoke(*args):
    return CliRunner().invoke(cli, [str(a) for a in args])


def _json_from(output):
    return json.loads(output[output.index("{"):])


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    data = root / "market.csv"
    result = _invoke("synth", "--out", data, "--n", 200, "--seed", 3)
    assert result.exit_code == 0, result.output

    config = root / "run.json"
    config.write_text(json.dumps(SMALL_RUN))
    return {'root': root, 'data': data, 'config': config}


@pytest.fixture(scope="module")
def trained(workspace):
    out = workspace['root'] / "run1"
    result = _invoke("train", "--config", workspace['config'], "--data", workspace['data'],
                     "--seed", 1, "--out-dir", out)
    assert result.exit_code == 0, result.output
    return out


def test_version():
    """Test --version prints the package version"""
    result = _invoke("--version")
    assert result.exit_code == 0
    assert __version__ in result.output


def test_synth_writes_csv(workspace):
    """Test the synthetic CSV has the loader's columns"""
    frame = pd.read_csv(workspace['data'])
    assert list(frame.columns) == ["date", "close", "volume", "sse50", "bond3m", "bond6m", "fx"]
    assert len(frame) == 200


def test_synth_rejects_non_stationary(tmp_path):
    """Test alpha + beta >= 1 exits with the input code"""
    result = _invoke("synth", "--out", tmp_path / "x.csv", "--alpha", 0.5, "--beta", 0.5)
    assert result.exit_code == 2
    assert "synth:" in result.output


def test_stats_json(workspace):
    """Test the summary of 199 log returns"""
    result = _invoke("-q", "stats", workspace['data'], "--lag", 5, "--json")
    assert result.exit_code == 0, result.output
    summary = _json_from(result.output)
    assert summary["n_obs"] == 199
    assert summary["lag"] == 5
    assert "arch_stat" in summary and "q2_stat" in summary


def test_train_writes_artifacts(trained, workspace):
    """Test every artifact is written with the expected layout"""
    for name in ARTIFACTS:
        assert (trained / name).is_file(), name

    trace = pd.read_csv(trained / "fitness_trace.csv")
    assert list(trace.columns) == ["generation", "best_fitness"]
    assert trace["generation"].tolist() == [0, 1, 2]
    assert trace["best_fitness"].is_monotonic_decreasing

    predictions = pd.read_csv(trained / "predictions.csv")
    assert list(predictions.columns) == ["date", "actual_rv", "predicted", "split"]
    assert len(predictions) == 200 - 2 - 5

    report = json.loads((trained / "report.json").read_text())
    errors = pd.read_csv(trained / "errors.csv")
    assert list(errors.columns) == ["index", "error", "error_pct"]
    assert len(errors) == report["samples"]["test"] == (predictions["split"] == "test").sum()
    assert report["samples"]["train"] + report["samples"]["test"] == len(predictions)
    assert report["ga"]["evaluations"] == 6 + 2 * 5
    assert "workers" not in report["config"]
    assert report["test"]["mae"] <= report["test"]["rmse"]


def test_train_is_reproducible_across_workers(trained, workspace):
    """Test a threaded rerun writes byte-identical artifacts"""
    out = workspace['root'] / "run2"
    result = _invoke("train", "--config", workspace['config'], "--data", workspace['data'],
                     "--seed", 1, "--workers", 4, "--out-dir", out)
    assert result.exit_code == 0, result.output
    for name in ARTIFACTS:
        assert (out / name).read_bytes() == (trained / name).read_bytes(), name


def test_seed_changes_run(trained, workspace):
    """Test another seed gives another model"""
    out = workspace['root'] / "run3"
    result = _invoke("train", "--config", workspace['config'], "--data", workspace['data'],
                     "--seed", 2, "--out-dir", out, "--no-svg")
    assert result.exit_code == 0, result.output
    assert (out / "model.json").read_bytes() != (trained / "model.json").read_bytes()
    assert not (out / "fitness.svg").exists()


def test_predict_replays_training_predictions(trained, workspace):
    """Test a saved model reproduces its predictions exactly"""
    out = workspace['root'] / "replayed.csv"
    result = _invoke("predict", trained / "model.json", workspace['data'], "--out", out)
    assert result.exit_code == 0, result.output

    replayed = pd.read_csv(out, dtype=str)
    original = pd.read_csv(trained / "predictions.csv", dtype=str)
    assert list(replayed.columns) == ["date", "actual_rv", "predicted"]
    assert replayed["date"].tolist() == original["date"].tolist()
    assert replayed["predicted"].tolist() == original["predicted"].tolist()


def test_predict_missing_column(trained, workspace):
    """Test data without a model column exits 2 from the loader"""
    data = pd.read_csv(workspace['data']).drop(columns=["fx"])
    path = workspace['root'] / "no_fx.csv"
    data.to_csv(path, index=False)

    result = _invoke("predict", trained / "model.json", path, "--out", workspace['root'] / "x.csv")
    assert result.exit_code == 2
    assert "ingest:" in result.output


def test_predict_bad_model(workspace):
    """Test an unreadable model exits 2"""
    model = workspace['root'] / "bad_model.json"
    model.write_text("{}")
    result = _invoke("predict", model, workspace['data'])
    assert result.exit_code == 2
    assert "network:" in result.output


def test_evaluate_matches_report(trained, workspace):
    """Test scoring the predictions file agrees with the training report"""
    errors_out = workspace['root'] / "errors_again.csv"
    result = _invoke("-q", "evaluate", trained / "predictions.csv", "--json",
                     "--errors-out", errors_out)
    assert result.exit_code == 0, result.output

    scored = _json_from(result.output)
    report = json.loads((trained / "report.json").read_text())
    assert scored["n"] == report["test"]["n"]
    assert scored["rmse"] == pytest.approx(report["test"]["rmse"], rel=1e-9)
    assert len(pd.read_csv(errors_out)) == scored["n"]


def test_evaluate_all_rows(trained):
    """Test --split all scores every sample"""
    result = _invoke("-q", "evaluate", trained / "predictions.csv", "--split", "all", "--json")
    assert result.exit_code == 0, result.output
    assert _json_from(result.output)["n"] == 200 - 2 - 5


def test_skip_ga_baseline(workspace):
    """Test the plain BP baseline writes an empty fitness trace"""
    out = workspace['root'] / "baseline"
    result = _invoke("train", "--config", workspace['config'], "--data", workspace['data'],
                     "--skip-ga", "--out-dir", out)
    assert result.exit_code == 0, result.output

    trace = pd.read_csv(out / "fitness_trace.csv")
    assert list(trace.columns) == ["generation", "best_fitness"]
    assert trace.empty
    report = json.loads((out / "report.json").read_text())
    assert report["ga"]["skipped"] is True
    assert report["ga"]["evaluations"] == 0


def test_standard_mutation_variant(workspace):
    """Test the mutation variant flag is accepted and recorded"""
    out = workspace['root'] / "standard"
    result = _invoke("train", "--config", workspace['config'], "--data", workspace['data'],
                     "--mutation-variant", "standard", "--out-dir", out, "--no-svg")
    assert result.exit_code == 0, result.output
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["ga"]["mutation_variant"] == "standard"


def test_train_without_data(workspace):
    """Test a run with no data file is a configuration error"""
    result = _invoke("train", "--config", workspace['config'])
    assert result.exit_code == 2
    assert "config:" in result.output


def test_train_invalid_config(workspace, tmp_path):
    """Test validation errors are listed and exit 2"""
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({'ga': {'pop_size': 1}}))
    result = _invoke("train", "--config", config, "--data", workspace['data'])
    assert result.exit_code == 2
    assert "Population size" in result.output


def test_usage_error_exit_code():
    """Test malformed flags exit 2"""
    result = _invoke("train", "--workers", "many")
    assert result.exit_code == 2


def test_missing_data_file(tmp_path):
    """Test a missing data file exits 2"""
    result = _invoke("stats", tmp_path / "absent.csv")
    assert result.exit_code == 2
    assert "ingest:" in result.output


def test_paper_mutation_variant(workspace):
    """Test the default sign convention can be requested by name"""
    out = workspace['root'] / "paper"
    result = _invoke("train", "--config", workspace['config'], "--data", workspace['data'],
                     "--mutation-variant", "paper", "--out-dir", out, "--no-svg")
    assert result.exit_code == 0, result.output
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["ga"]["mutation_variant"] == "paper"


def test_predict_on_header_only_file(trained, tmp_path):
    """Test a data file without rows is an input error, not a numeric one"""
    empty = tmp_path / "empty.csv"
    empty.write_text("date,close,volume,sse50,bond3m,bond6m,fx\n")
    result = _invoke("predict", trained / "model.json", empty, "--out", tmp_path / "p.csv")
    assert result.exit_code == 2
    assert "cli:" in result.output
    assert not (tmp_path / "p.csv").exists()


def test_train_on_too_few_rows(workspace, tmp_path):
    """Test a short data file exits with the input code"""
    short = tmp_path / "short.csv"
    lines = workspace['data'].read_text().splitlines()[:4]
    short.write_text("\n".join(lines) + "\n")
    result = _invoke("train", "--config", workspace['config'], "--data", short,
                     "--out-dir", tmp_path / "run")
    assert result.exit_code == 2
    assert "features:" in result.output


def test_stats_needs_only_close(tmp_path):
    """Test stats runs on a file with just date and close"""
    data = tmp_path / "close.csv"
    prices = 100.0 * np.exp(np.cumsum(np.random.default_rng(2).normal(0.0, 0.01, 40)))
    data.write_text("date,close\n" + "".join(
        f"{day},{price:.6f}\n" for day, price in zip(pd.bdate_range("2024-01-01", periods=40)
                                                     .strftime("%Y-%m-%d"), prices)))
    result = _invoke("-q", "stats", data, "--lag", 3, "--json")
    assert result.exit_code == 0, result.output
    assert _json_from(result.output)["n_obs"] == 39
