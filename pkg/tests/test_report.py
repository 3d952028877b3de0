from __future__ import annotations

import json

import pytest

from calibration.errors import ConfigurationError
from engine.config import GameConfig
from engine.runner import run_trials
from experiments.opt_table import OptRow, opt_table
from experiments.report import GAME_COLUMNS, OPT_COLUMNS, format_value, opt_csv_rows, render_csv, report
from experiments.scaling import ScalingPoint, ScalingResult
from signgame.solver import SolverBudget


def _scaling_result() -> ScalingResult:
    return ScalingResult(
        adversary="ladder:cbrt",
        forecaster="truthful:cbrt",
        seed=0,
        points=[
            ScalingPoint(T=4096, mean_calerr=12.5, std_err=0.25, trials=4),
            ScalingPoint(T=8192, mean_calerr=15.75, std_err=0.5, trials=4),
            ScalingPoint(T=16384, mean_calerr=20.0, std_err=0.75, trials=4),
        ],
        fitted_exponent=0.5,
        intercept=-1.25,
        bootstrap_ci=(0.25, 0.75),
    )


@pytest.mark.parametrize(
    "value, text",
    [(None, ""), (True, "true"), (False, "false"), (3, "3"), (0.1234567, "0.123457"), (2048.0, "2048"), (1e-7, "1e-07")],
)
def test_format_value(value, text):
    assert format_value(value) == text


def test_empty_result_set_is_header_only(tmp_path):
    path = report([], "csv", tmp_path / "empty.csv")
    assert path.read_text(encoding="utf-8") == ",".join(GAME_COLUMNS) + "\n"


def test_game_rows(tmp_path):
    config = GameConfig(horizon=4, adversary="iid:1", forecaster="const:1/2", keep_transcript=False)
    results = run_trials(config, 2, first_trial=3)
    lines = report(results, "csv", tmp_path / "trials.csv", first_trial=3).read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(GAME_COLUMNS)
    assert lines[1].startswith("3,")
    assert lines[1].split(",")[4:6] == ["2", "2"]
    assert lines[2].startswith("4,")

    records = json.loads(report(results, "json", tmp_path / "trials.json").read_text(encoding="utf-8"))
    assert [r["calerr"] for r in records] == [2.0, 2.0]
    assert records[0]["epoch_labels"] == []


def test_reports_are_byte_identical(tmp_path):
    a = report(_scaling_result(), "json", tmp_path / "a.json").read_bytes()
    b = report(_scaling_result(), "json", tmp_path / "b.json").read_bytes()
    assert a == b


def test_scaling_json_round_trips(tmp_path):
    path = report(_scaling_result(), "json", tmp_path / "scaling.json")
    assert ScalingResult.model_validate_json(path.read_text(encoding="utf-8")) == _scaling_result()
    csv_lines = report(_scaling_result(), "csv", tmp_path / "scaling.csv").read_text(encoding="utf-8").splitlines()
    assert csv_lines == ["T,mean_calerr,std_err,trials", "4096,12.5,0.25,4", "8192,15.75,0.5,4", "16384,20,0.75,4"]


def test_opt_rows_over_budget_are_marked_na(tmp_path):
    rows = [OptRow(k=1, r=1, opt=1, diagonal=True, diagonal_ok=True), OptRow(k=20, r=1, opt=None, diagonal=False)]
    text = report(rows, "csv", tmp_path / "opt.csv").read_text(encoding="utf-8")
    assert text.splitlines() == ["k,r,opt,diagonal,diagonal_ok", "1,1,1,true,true", "20,1,NA,false,"]
    assert render_csv(OPT_COLUMNS, opt_csv_rows([rows[1].model_dump()])).endswith("20,1,NA,false,\n")
    records = json.loads(report(rows, "json", tmp_path / "opt.json").read_text(encoding="utf-8"))
    assert records[1]["opt"] is None


def test_opt_table_over_budget_rows_in_the_csv(tmp_path):
    rows = opt_table(4, 1, SolverBudget(max_cells=3, max_rounds=8))
    lines = report(rows, "csv", tmp_path / "opt.csv").read_text(encoding="utf-8").splitlines()
    assert lines[-1] == "4,1,NA,false,"
    assert lines[1] == "1,1,1,true,true"


def test_unknown_format_is_rejected(tmp_path):
    with pytest.raises(ConfigurationError):
        report([], "xml", tmp_path / "out.xml")
