from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import structlog
from pydantic import ValidationError

from adversaries import build_adversary
from adversaries.epochs import classify_epochs
from calibration.errors import CalibrationGameError, ConfigurationError, SolverBudgetError
from calibration.transcript import read_transcript_csv
from engine.artifacts import write_json, write_transcript_csv
from engine.config import GameConfig, Settings, load_settings, read_config_file
from engine.runner import run_game, run_trials
from experiments.logging_setup import configure_logging
from experiments.opt_table import opt_table
from experiments.report import render_json, report
from experiments.scaling import parse_t_list, scaling_experiment
from signgame.constants import ADMISSIBLE_ALPHA, ADMISSIBLE_BETA, derived_constants_record

log = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


def _common(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--config", default=None, help="File of 'key = value' lines used as flag defaults")
    ap.add_argument("--output-dir", default=None, help="Output directory (default: CALGAME_OUTPUT_DIR or ./results)")
    ap.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default: CALGAME_LOG_LEVEL or INFO)")
    ap.add_argument("--log-json", action="store_true", help="Emit log events as JSON lines")


def _game_flags(ap: argparse.ArgumentParser, *, adversary: str = "iid:0.5") -> None:
    ap.add_argument("--horizon", "-T", type=int, default=1024, help="Number of steps T")
    ap.add_argument("--seed", type=int, default=0, help="64-bit base seed")
    ap.add_argument(
        "--adversary",
        default=adversary,
        help="iid:p | ladder:k|cbrt | sidestep | sidestep+earlystop",
    )
    ap.add_argument(
        "--forecaster",
        default="const:1/2",
        help="const:p | truthful:g|cbrt | coarse | hedging | script:file",
    )
    ap.add_argument("--grid-resolution", type=int, default=None, help="Working grid {0, 1/n, ..., 1} (default n = T)")
    _scheme_flags(ap)


def _scheme_flags(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--alpha", type=float, default=None, help="Sign-game exponent alpha (default: admissible pair)")
    ap.add_argument("--beta", type=float, default=None, help="Sign-game exponent beta (default: admissible pair)")
    ap.add_argument("--c0", type=float, default=None, help="Constant of the admissible pair (default 2/9)")
    ap.add_argument("--player-a", "--playerA", default="binary", help="binary | tensor:a,b,t | minimax")


def build_parser() -> tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    ap = argparse.ArgumentParser(prog="calgame", description="Adversarial calibration games and experiments.")
    sub = ap.add_subparsers(dest="command", required=True)
    parsers: Dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("run", help="Play one game and print its result as JSON")
    _game_flags(p)
    p.add_argument("--transcript", default=None, help="Also write the transcript CSV here")
    parsers["run"] = p

    p = sub.add_parser("trials", help="Play independent trials and write one row per game")
    _game_flags(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--first-trial", type=int, default=0, help="Index of the first trial (for split runs)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None, help="Output file (default: <output-dir>/trials.<format>)")
    parsers["trials"] = p

    p = sub.add_parser("scaling", help="Fit the exponent of mean CalErr over a list of horizons")
    p.add_argument("--adversary", default="ladder:cbrt")
    p.add_argument("--forecaster", default="truthful:cbrt")
    p.add_argument("--t-list", default="2^12..2^18", help="Comma list or power range like 2^12..2^18")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--resamples", type=int, default=None, help="Bootstrap resamples (default: CALGAME_BOOTSTRAP_RESAMPLES)")
    p.add_argument("--out-prefix", default="scaling", help="Writes <prefix>.csv and <prefix>.json")
    _scheme_flags(p)
    parsers["scaling"] = p

    p = sub.add_parser("opt", help="Tabulate opt(k, r) of the sign-preservation game")
    p.add_argument("--k-max", type=int, default=7)
    p.add_argument("--r-max", type=int, default=4)
    p.add_argument("--alpha", type=float, default=ADMISSIBLE_ALPHA)
    p.add_argument("--beta", type=float, default=ADMISSIBLE_BETA)
    p.add_argument("--out-prefix", default="opt", help="Writes <prefix>.csv and <prefix>_constants.json")
    parsers["opt"] = p

    p = sub.add_parser("classify", help="Label the epochs of a sidestepping game")
    _game_flags(p, adversary="sidestep")
    p.add_argument("--transcript", default=None, help="Classify this transcript CSV instead of playing a game")
    parsers["classify"] = p

    for parser in parsers.values():
        _common(parser)
    return ap, parsers


def _coerce_defaults(parser: argparse.ArgumentParser, values: Dict[str, str], source: str) -> Dict[str, object]:
    actions = {a.dest: a for a in parser._actions if a.dest != "help"}
    out: Dict[str, object] = {}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None:
            raise ConfigurationError(f"{source}: unknown option {key!r} for this command")
        if isinstance(action, argparse._StoreTrueAction):
            lowered = raw.lower()
            if lowered not in _TRUE | _FALSE:
                raise ConfigurationError(f"{source}: {key} expects true/false, got {raw!r}")
            out[key] = lowered in _TRUE
        else:
            # argparse applies the option's type to string defaults
            out[key] = raw
    return out


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    ap, parsers = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(list(argv))
    if known.config and known.command in parsers:
        parser = parsers[known.command]
        parser.set_defaults(**_coerce_defaults(parser, read_config_file(known.config), known.config))
    return ap.parse_args(list(argv))


def _game_config(args: argparse.Namespace, **overrides: object) -> GameConfig:
    fields = dict(
        horizon=args.horizon,
        seed=args.seed,
        grid_resolution=args.grid_resolution,
        adversary=args.adversary,
        forecaster=args.forecaster,
        alpha=args.alpha,
        beta=args.beta,
        c0=args.c0,
        player_a=args.player_a,
    )
    fields.update(overrides)
    return GameConfig(**fields)


def _output_dir(args: argparse.Namespace, settings: Settings) -> Path:
    return Path(args.output_dir or settings.output_dir)


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    result = run_game(_game_config(args), budget=settings.solver_budget)
    if args.transcript and result.transcript is not None:
        write_transcript_csv(result.transcript, args.transcript)
    record = result.to_record()
    record.update(steps=result.steps, early_stop_triggered=result.early_stop_triggered, B=result.B)
    sys.stdout.write(render_json(record))
    return EXIT_OK


def cmd_trials(args: argparse.Namespace, settings: Settings) -> int:
    config = _game_config(args, keep_transcript=False)
    results = run_trials(
        config,
        args.trials,
        first_trial=args.first_trial,
        workers=args.workers,
        budget=settings.solver_budget,
    )
    out = Path(args.out) if args.out else _output_dir(args, settings) / f"trials.{args.format}"
    report(results, args.format, out, first_trial=args.first_trial)
    mean = sum(r.final_calerr for r in results) / len(results)
    print(f"Trials: {len(results)}  mean CalErr: {mean:.6g}")
    print(f"Wrote: {out}")
    return EXIT_OK


def cmd_scaling(args: argparse.Namespace, settings: Settings) -> int:
    result = scaling_experiment(
        args.adversary,
        args.forecaster,
        parse_t_list(args.t_list),
        args.trials,
        args.seed,
        alpha=args.alpha,
        beta=args.beta,
        c0=args.c0,
        player_a=args.player_a,
        workers=args.workers,
        resamples=args.resamples,
        budget=settings.solver_budget,
    )
    prefix = _output_dir(args, settings) / args.out_prefix
    csv_path = report(result, "csv", prefix.with_suffix(".csv"))
    json_path = report(result, "json", prefix.with_suffix(".json"))
    lo, hi = result.bootstrap_ci
    print(f"Exponent: {result.fitted_exponent:.6g}  95% CI: [{lo:.6g}, {hi:.6g}]")
    if result.note:
        print(f"Note: {result.note}")
    print(f"Wrote: {csv_path}, {json_path}")
    return EXIT_OK


def cmd_opt(args: argparse.Namespace, settings: Settings) -> int:
    rows = opt_table(args.k_max, args.r_max, settings.solver_budget)
    out_dir = _output_dir(args, settings)
    csv_path = report(rows, "csv", out_dir / f"{args.out_prefix}.csv")
    constants = derived_constants_record(args.alpha, args.beta)
    json_path = write_json(out_dir / f"{args.out_prefix}_constants.json", constants.model_dump())
    for row in rows:
        value = "NA" if row.opt is None else str(row.opt)
        flag = "" if not row.diagonal else ("  diagonal ok" if row.diagonal_ok else "  diagonal")
        print(f"opt({row.k}, {row.r}) = {value}{flag}")
    print(f"c = {constants.c:.6g}")
    print(f"Wrote: {csv_path}, {json_path}")
    return EXIT_OK if all(row.diagonal_ok is not False for row in rows) else EXIT_FAILURE


def cmd_classify(args: argparse.Namespace, settings: Settings) -> int:
    if args.transcript:
        adversary = build_adversary(
            "sidestep",
            horizon=args.horizon,
            alpha=args.alpha,
            beta=args.beta,
            c0=args.c0,
            player_a=args.player_a,
            grid_resolution=args.grid_resolution,
            budget=settings.solver_budget,
        )
        params = adversary.scheme_params
        assert params is not None
        transcript = read_transcript_csv(args.transcript, num_cells=params.k)
        labels = classify_epochs(transcript, params)
    else:
        result = run_game(_game_config(args), budget=settings.solver_budget)
        if result.epoch_labels is None:
            raise ConfigurationError(f"adversary {args.adversary!r} has no epochs to classify")
        labels = result.epoch_labels
    sys.stdout.write(render_json([label.model_dump(mode="json") for label in labels]))
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "trials": cmd_trials,
    "scaling": cmd_scaling,
    "opt": cmd_opt,
    "classify": cmd_classify,
}


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        settings = load_settings()
        configure_logging(args.log_level or settings.log_level, json=args.log_json)
        log.debug("command_start", command=args.command)
        return COMMANDS[args.command](args, settings)
    except SolverBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigurationError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CalibrationGameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
