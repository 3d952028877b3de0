from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, List, Optional

import numpy as np
import structlog

from adversaries import build_adversary
from adversaries.base import Adversary, Commit, ObliviousAdversary
from adversaries.early_stop import EarlyStoppingWrapper
from adversaries.epochs import classify_epochs
from calibration.errors import CalibrationGameError, ConfigurationError, StrategyFailure, UnsupportedAdversaryError
from calibration.grid import PredictionGrid
from calibration.ledger import CalibrationLedger
from calibration.transcript import Transcript
from engine.config import GameConfig, load_settings
from engine.context import GameContext, new_context
from engine.models import GameResult
from forecasters import build_forecaster
from forecasters.base import Forecaster, ForecasterView
from signgame.solver import SolverBudget
from signgame.state import preserved_count

log = structlog.get_logger(__name__)

MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15

CommitHook = Callable[[int, Commit], Commit]
SCHEME_KINDS = ("sidestep", "sidestep+earlystop")


def splitmix64(i: int) -> int:
    """Element i of the splitmix64 sequence started from state 0; maps 0 to 0."""
    z = (i * _GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(base_seed: int, trial: int) -> int:
    return (base_seed ^ splitmix64(trial)) & MASK64


def _check_capabilities(
    adversary: Adversary,
    forecaster: Forecaster,
    grid: PredictionGrid,
    schedule: Optional[np.ndarray],
) -> None:
    if forecaster.requires_oracle and not adversary.announces_bias:
        raise UnsupportedAdversaryError(f"{forecaster.name} needs announced biases; {adversary.name} has none")
    if forecaster.requires_schedule and schedule is None:
        raise UnsupportedAdversaryError(
            f"{forecaster.name} needs a declared bias schedule; {adversary.name} is adaptive"
        )
    params = adversary.scheme_params
    if params is not None:
        params.check_grid(grid)


def _strategy_failure(role: str, name: str, step: int, exc: Exception) -> StrategyFailure:
    return StrategyFailure(f"{role} {name} failed at step {step}: {exc!r}", step=step)


def _play_batch(ctx: GameContext, adversary: ObliviousAdversary, forecaster: Forecaster) -> None:
    bits, biases = adversary.draw_all(ctx.horizon, ctx.rng)
    announced = biases if adversary.announces_bias else None
    indices = np.asarray(forecaster.predict_batch(announced), dtype=np.int64)
    ctx.ledger = CalibrationLedger.from_arrays(ctx.grid, indices, bits)
    ctx.transcript = Transcript(
        denominator=ctx.grid.resolution,
        numerators=indices.tolist(),
        bits=bits.tolist(),
        announced=biases.tolist(),
    )


def _play_steps(
    ctx: GameContext,
    adversary: Adversary,
    forecaster: Forecaster,
    forecaster_rng: np.random.Generator,
    commit_hook: Optional[CommitHook],
) -> None:
    stream: Iterator[Commit] = iter(adversary.play(ctx))
    while True:
        step = ctx.step + 1
        try:
            commit = next(stream, None)
        except CalibrationGameError:
            raise
        except Exception as exc:
            raise _strategy_failure("adversary", adversary.name, step, exc) from exc
        if commit is None:
            break
        if ctx.step >= ctx.horizon:
            close = getattr(stream, "close", None)
            if close is not None:
                close()
            break
        if commit_hook is not None:
            commit = commit_hook(step, commit)

        view = ForecasterView(
            ledger=ctx.ledger,
            transcript=ctx.transcript,
            announced_bias=commit.announced_bias if adversary.announces_bias else None,
            grid=ctx.grid,
            rng=forecaster_rng,
            step=step,
        )
        try:
            index = forecaster.predict(view)
        except CalibrationGameError:
            raise
        except Exception as exc:
            raise _strategy_failure("forecaster", forecaster.name, step, exc) from exc
        ctx.grid.check_index(index)
        ctx.ledger.record_index(index, commit.bit)
        ctx.transcript.append(index, commit.bit, commit.announced_bias)


def play_game(
    adversary: Adversary,
    forecaster: Forecaster,
    *,
    horizon: int,
    grid: PredictionGrid,
    seed: int = 0,
    keep_transcript: bool = True,
    commit_hook: Optional[CommitHook] = None,
) -> GameResult:
    """One game of `horizon` steps: the adversary commits b(t) (and optionally
    announces its bias), then the forecaster predicts without seeing b(t)."""
    adversary_seq, forecaster_seq = np.random.SeedSequence(seed).spawn(2)
    adversary_rng = np.random.default_rng(adversary_seq)
    forecaster_rng = np.random.default_rng(forecaster_seq)

    schedule = adversary.declared_schedule(horizon)
    _check_capabilities(adversary, forecaster, grid, schedule)
    forecaster.start(grid, horizon, forecaster_rng, schedule)
    ctx = new_context(grid, horizon, adversary_rng)

    if commit_hook is None and isinstance(adversary, ObliviousAdversary) and forecaster.oblivious:
        _play_batch(ctx, adversary, forecaster)
    else:
        _play_steps(ctx, adversary, forecaster, forecaster_rng, commit_hook)

    t_act = ctx.scheme_steps if ctx.scheme_steps is not None else ctx.step
    params = adversary.scheme_params
    labels = None
    if params is not None:
        labels = classify_epochs(ctx.transcript, params, t_act) if ctx.transcript.epochs else []

    result = GameResult(
        seed=seed,
        horizon=horizon,
        steps=ctx.step,
        t_act=t_act,
        final_calerr=ctx.ledger.calerr,
        max_err=ctx.ledger.max_err_seen,
        transcript=ctx.transcript if keep_transcript else None,
        preserved_signs=preserved_count(ctx.sign_state) if ctx.sign_state is not None else None,
        epoch_labels=labels,
    )
    if isinstance(adversary, EarlyStoppingWrapper):
        result.B = adversary.B
    if ctx.early_stop is not None:
        result.early_stop_triggered = ctx.early_stop.triggered
        result.trigger_step = ctx.early_stop.decision_step if ctx.early_stop.triggered else None
        result.tail_bit = ctx.early_stop.tail_bit
    log.debug(
        "game_done",
        adversary=adversary.name,
        forecaster=forecaster.name,
        seed=seed,
        steps=result.steps,
        calerr=result.final_calerr,
    )
    return result


def _adversary_kind(spec: str) -> str:
    return spec.strip().partition(":")[0].strip().lower()


def _empty_scheme_game(config: GameConfig) -> GameResult:
    """A sidestepping game with T = 0 plays nothing; its parameters need T >= 3 and are never built."""
    kind = _adversary_kind(config.adversary)
    build_forecaster(config.forecaster)
    return GameResult(
        seed=config.seed,
        horizon=0,
        steps=0,
        t_act=0,
        final_calerr=0.0,
        max_err=0.0,
        transcript=Transcript(config.grid.resolution) if config.keep_transcript else None,
        epoch_labels=[],
        early_stop_triggered=False if kind == "sidestep+earlystop" else None,
    )


def run_game(
    config: GameConfig,
    *,
    commit_hook: Optional[CommitHook] = None,
    budget: Optional[SolverBudget] = None,
) -> GameResult:
    if config.horizon == 0 and _adversary_kind(config.adversary) in SCHEME_KINDS:
        return _empty_scheme_game(config)
    adversary = build_adversary(
        config.adversary,
        horizon=config.horizon,
        alpha=config.alpha,
        beta=config.beta,
        c0=config.c0,
        player_a=config.player_a,
        grid_resolution=config.grid_resolution,
        budget=budget or load_settings().solver_budget,
    )
    forecaster = build_forecaster(config.forecaster)
    return play_game(
        adversary,
        forecaster,
        horizon=config.horizon,
        grid=config.grid,
        seed=config.seed,
        keep_transcript=config.keep_transcript,
        commit_hook=commit_hook,
    )


def _run_seeded(config: GameConfig, budget: SolverBudget) -> GameResult:
    return run_game(config, budget=budget)


def run_trials(
    config: GameConfig,
    trials: int,
    *,
    first_trial: int = 0,
    workers: int = 1,
    budget: Optional[SolverBudget] = None,
) -> List[GameResult]:
    """Trial i plays `config` with seed base ^ splitmix64(i); results come back in trial order."""
    if trials < 1:
        raise ConfigurationError(f"trials must be positive, got {trials}")
    budget = budget or load_settings().solver_budget
    indices = range(first_trial, first_trial + trials)
    configs = [config.with_seed(trial_seed(config.seed, i)) for i in indices]

    results: List[GameResult] = []
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = pool.map(_run_seeded, configs, [budget] * trials)
            for i, result in zip(indices, outcomes):
                log.debug("trial_done", trial=i, seed=result.seed, calerr=result.final_calerr)
                results.append(result)
        return results

    for i, trial_config in zip(indices, configs):
        result = _run_seeded(trial_config, budget)
        log.debug("trial_done", trial=i, seed=result.seed, calerr=result.final_calerr)
        results.append(result)
    return results
