from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence

from calibration.errors import ConfigurationError
from engine.artifacts import atomic_write_text
from engine.models import GameResult
from experiments.opt_table import OptRow
from experiments.scaling import ScalingResult

GAME_COLUMNS = [
    "trial",
    "seed",
    "steps",
    "t_act",
    "calerr",
    "maxerr",
    "preserved_signs",
    "early_stop_triggered",
    "trigger_step",
    "tail_bit",
    "B",
]
SCALING_COLUMNS = ["T", "mean_calerr", "std_err", "trials"]
OPT_COLUMNS = ["k", "r", "opt", "diagonal", "diagonal_ok"]


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.6g" % value
    return str(value)


def _round_floats(value: Any) -> Any:
    if isinstance(value, float):
        return float("%.6g" % value)
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(v) for v in value]
    return value


def render_csv(columns: Sequence[str], rows: Sequence[Dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(col)) for col in columns])
    return buf.getvalue()


def render_json(payload: Any) -> str:
    return json.dumps(_round_floats(payload), indent=2) + "\n"


def game_rows(results: Sequence[GameResult], first_trial: int = 0) -> List[Dict[str, Any]]:
    rows = []
    for i, result in enumerate(results, start=first_trial):
        rows.append(
            {
                "trial": i,
                "seed": result.seed,
                "steps": result.steps,
                "t_act": result.t_act,
                "calerr": result.final_calerr,
                "maxerr": result.max_err,
                "preserved_signs": result.preserved_signs,
                "early_stop_triggered": result.early_stop_triggered,
                "trigger_step": result.trigger_step,
                "tail_bit": result.tail_bit,
                "B": result.B,
            }
        )
    return rows


def opt_csv_rows(rows: Sequence[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Rows over the solver budget carry `NA` in the opt column."""
    return [{**row, "opt": "NA" if row["opt"] is None else row["opt"]} for row in rows]


def report(
    results: Sequence[GameResult] | ScalingResult | Sequence[OptRow],
    fmt: str,
    path: str | Path,
    *,
    first_trial: int = 0,
) -> Path:
    """Write a result set as CSV or JSON (atomically)."""
    if fmt not in ("csv", "json"):
        raise ConfigurationError(f"report format must be csv or json, got {fmt!r}")
    if isinstance(results, ScalingResult):
        if fmt == "csv":
            text = render_csv(SCALING_COLUMNS, [p.model_dump() for p in results.points])
        else:
            text = render_json(results.model_dump(mode="json"))
    elif results and isinstance(results[0], OptRow):
        rows = [row.model_dump() for row in results]  # type: ignore[union-attr]
        text = render_csv(OPT_COLUMNS, opt_csv_rows(rows)) if fmt == "csv" else render_json(rows)
    else:
        games: Sequence[GameResult] = results  # type: ignore[assignment]
        if fmt == "csv":
            text = render_csv(GAME_COLUMNS, game_rows(games, first_trial))
        else:
            text = render_json([r.to_record() for r in games])
    return atomic_write_text(path, text)
