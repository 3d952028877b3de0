from __future__ import annotations

from pydantic import ValidationError

from adversaries.base import Adversary, Commit, ObliviousAdversary
from adversaries.bernoulli import EpochLadder, IidBernoulli, epoch_ladder, iid_bernoulli
from adversaries.early_stop import EarlyStoppingWrapper, early_stopping_wrapper
from adversaries.epochs import EpochClass, EpochLabel, classify_epochs
from adversaries.sidestep import (
    SchemeParams,
    SidesteppingScheme,
    epoch_interval,
    run_epoch,
    sidestepping_scheme,
)
from calibration.errors import ConfigurationError
from calibration.grid import resolve_size
from signgame.solver import MinimaxSolver, SolverBudget
from signgame.strategies import BinarySearchStrategy, MinimaxStrategy, PlayerA, TensorStrategy

ADVERSARY_KINDS = ("iid", "ladder", "sidestep", "sidestep+earlystop")


def _split(spec: str) -> tuple[str, str | None]:
    kind, _, arg = spec.strip().partition(":")
    return kind.strip().lower(), (arg.strip() or None)


def build_player_a(spec: str, num_cells: int, rounds: int, budget: SolverBudget | None = None) -> PlayerA:
    """`binary`, `tensor:a,b,t` or `minimax`, for SP(num_cells, rounds)."""
    kind, arg = _split(spec)
    if kind == "binary":
        return BinarySearchStrategy.for_cells(num_cells, rounds)
    if kind == "minimax":
        return MinimaxStrategy(MinimaxSolver(num_cells, rounds, budget))
    if kind == "tensor":
        try:
            a, b, t = (int(part) for part in (arg or "").split(","))
        except ValueError as exc:
            raise ConfigurationError(f"tensor player A needs 'tensor:a,b,t', got {spec!r}") from exc
        if a == 2**b - 1:
            base: PlayerA = BinarySearchStrategy(b)
        else:
            base = MinimaxStrategy(MinimaxSolver(a, b, budget))
        strategy = TensorStrategy(base, t)
        if strategy.num_cells > num_cells:
            raise ConfigurationError(f"tensor game SP({a}^{t}, {b}^{t}) needs more than {num_cells} cells")
        return strategy
    raise ConfigurationError(f"unknown player A {spec!r}; expected binary, tensor:a,b,t or minimax")


def build_adversary(
    spec: str,
    *,
    horizon: int,
    alpha: float | None = None,
    beta: float | None = None,
    c0: float | None = None,
    player_a: str = "binary",
    grid_resolution: int | None = None,
    budget: SolverBudget | None = None,
) -> Adversary:
    """Parse `iid:p | ladder:k | sidestep | sidestep+earlystop`."""
    kind, arg = _split(spec)
    if kind == "iid":
        try:
            p = float(arg) if arg is not None else 0.5
        except ValueError as exc:
            raise ConfigurationError(f"iid bias must be a number, got {arg!r}") from exc
        return IidBernoulli(p)
    if kind == "ladder":
        return EpochLadder(resolve_size(arg or "cbrt", horizon))
    if kind in ("sidestep", "sidestep+earlystop"):
        overrides = {"alpha": alpha, "beta": beta, "c0": c0, "grid_resolution": grid_resolution}
        try:
            params = SchemeParams(horizon=horizon, **{key: v for key, v in overrides.items() if v is not None})
        except ValidationError as exc:
            raise ConfigurationError(f"invalid sidestepping parameters for T={horizon}: {exc}") from exc
        scheme = SidesteppingScheme(params, build_player_a(player_a, params.k, params.num_epochs, budget))
        if kind == "sidestep":
            return scheme
        return EarlyStoppingWrapper(scheme, params.B, horizon)
    raise ConfigurationError(f"unknown adversary {spec!r}; expected one of {', '.join(ADVERSARY_KINDS)}")


__all__ = [
    "ADVERSARY_KINDS",
    "Adversary",
    "Commit",
    "EarlyStoppingWrapper",
    "EpochClass",
    "EpochLabel",
    "EpochLadder",
    "IidBernoulli",
    "ObliviousAdversary",
    "SchemeParams",
    "SidesteppingScheme",
    "build_adversary",
    "build_player_a",
    "classify_epochs",
    "early_stopping_wrapper",
    "epoch_interval",
    "epoch_ladder",
    "iid_bernoulli",
    "run_epoch",
    "sidestepping_scheme",
]
