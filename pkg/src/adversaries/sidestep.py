from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Generator, Iterator, Optional, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, Field, computed_field, model_validator

from adversaries.base import Adversary, Commit
from calibration.errors import ConfigurationError
from calibration.grid import OpenInterval, PredictionGrid
from calibration.transcript import EpochRecord
from engine.context import GameContext
from signgame.constants import ADMISSIBLE_ALPHA, ADMISSIBLE_BETA, ADMISSIBLE_C0
from signgame.state import Sign, new_game, place
from signgame.strategies import PlayerA

log = structlog.get_logger(__name__)

_EPS = 1e-9


def _floor_root(horizon: int, power: float) -> int:
    """Largest integer k >= 1 with k**power <= horizon, robust to float error."""
    k = max(1, int(horizon ** (1.0 / power)))
    while (k + 1) ** power <= horizon * (1 + _EPS):
        k += 1
    while k > 1 and k**power > horizon * (1 + _EPS):
        k -= 1
    return k


class SchemeParams(BaseModel):
    horizon: int = Field(ge=3)
    alpha: float = Field(default=ADMISSIBLE_ALPHA, gt=0, le=1)
    beta: float = Field(default=ADMISSIBLE_BETA, gt=0, le=1)
    c0: float = Field(default=ADMISSIBLE_C0, gt=0)
    theta_constant: float = Field(default=1 / 1440, gt=0)
    grid_resolution: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _positive_b(self) -> "SchemeParams":
        if not self.B > 0:
            raise ValueError("early-stopping threshold B must be positive")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def k(self) -> int:
        return _floor_root(self.horizon, self.alpha + 2 * self.beta + 2)

    @property
    def k_alpha(self) -> float:
        return float(self.k) ** self.alpha

    @computed_field  # type: ignore[prop-decorator]
    @property
    def num_epochs(self) -> int:
        return max(1, math.ceil(self.k_alpha - _EPS))

    @computed_field  # type: ignore[prop-decorator]
    @property
    def epoch_len(self) -> int:
        return max(1, math.floor(self.horizon / self.k_alpha + _EPS))

    @computed_field  # type: ignore[prop-decorator]
    @property
    def theta(self) -> float:
        return self.theta_constant * math.sqrt(self.horizon / (self.k_alpha * math.log(self.horizon)))

    @computed_field  # type: ignore[prop-decorator]
    @property
    def B(self) -> float:
        return min(
            self.horizon / (48 * self.k ** (self.alpha + 1)),
            self.c0 * self.theta * self.k**self.beta / 4,
        )

    @property
    def grid(self) -> PredictionGrid:
        return PredictionGrid(self.grid_resolution or self.horizon)

    @property
    def untruthful_threshold(self) -> float:
        return self.horizon / (2 * self.k_alpha)

    def check_grid(self, grid: PredictionGrid) -> None:
        if grid.resolution <= 6 * self.k:
            raise ConfigurationError(
                f"grid resolution {grid.resolution} too coarse for k={self.k}: "
                f"every epoch interval needs a grid point (resolution > {6 * self.k})"
            )


def epoch_interval(num_cells: int, cell: int) -> Tuple[OpenInterval, Fraction]:
    """Interval I_j = (1/3 + (j-1)/(3k), 1/3 + j/(3k)) and its midpoint bias."""
    k = num_cells
    third = Fraction(1, 3)
    interval = OpenInterval(third + Fraction(cell - 1, 3 * k), third + Fraction(cell, 3 * k))
    return interval, interval.midpoint


@dataclass(frozen=True)
class EpochOutcome:
    steps: int
    stopped_by_threshold: bool


def run_epoch(
    ctx: GameContext,
    length: int,
    interval: OpenInterval,
    bias: Fraction,
    theta: float,
) -> Generator[Commit, None, EpochOutcome]:
    """Up to `length` Ber(bias) bits; stops before a draw once the interval's
    share of CalErr has reached theta."""
    scaled_theta = theta * ctx.grid.resolution
    p = float(bias)
    emitted = 0
    for _ in range(length):
        if ctx.ledger.scaled_interval_error(interval) >= scaled_theta:
            return EpochOutcome(emitted, True)
        yield Commit(int(ctx.rng.random() < p), p)
        emitted += 1
    return EpochOutcome(emitted, False)


class SidesteppingScheme(Adversary):
    """Man in the middle between a player A of SP(k, k^alpha) and the forecaster.

    Each round's cell j becomes an epoch with bias at the midpoint of I_j; when
    the epoch ends, the sign fed back to player A is "+" iff the positive part
    of the interval's biases is at least its negative part.
    """

    name = "sidestep"

    def __init__(self, params: SchemeParams, player_a: PlayerA) -> None:
        if player_a.num_cells > params.k:
            raise ConfigurationError(
                f"player A plays on {player_a.num_cells} cells but the scheme has k={params.k}"
            )
        self.params = params
        self.player_a = player_a

    @property
    def scheme_params(self) -> SchemeParams:
        return self.params

    def declared_schedule(self, horizon: int) -> Optional[np.ndarray]:
        # every epoch bias is an interval midpoint of the band (1/3, 2/3)
        return np.full(horizon, 0.5)

    def play(self, ctx: GameContext) -> Iterator[Commit]:
        params = self.params
        params.check_grid(ctx.grid)
        k = params.k
        state = new_game(k, params.num_epochs)
        ctx.sign_state = state

        for index in range(1, params.num_epochs + 1):
            if ctx.remaining <= 0:
                break
            cell = self.player_a.choose(state)
            if cell is None:
                break
            interval, bias = epoch_interval(k, cell)
            start = ctx.step
            outcome = yield from run_epoch(ctx, min(params.epoch_len, ctx.remaining), interval, bias, params.theta)

            positive, negative = ctx.ledger.scaled_parts(ctx.grid.indices_inside(interval))
            sign = Sign.PLUS if positive >= negative else Sign.MINUS
            state = place(state, cell, sign)
            ctx.sign_state = state
            ctx.transcript.mark_epoch(
                EpochRecord(
                    index=index,
                    cell=cell,
                    interval=interval,
                    bias=bias,
                    start_step=start,
                    end_step=ctx.step,
                    sign=sign.value,
                    stopped_by_threshold=outcome.stopped_by_threshold,
                )
            )
            log.debug(
                "epoch_done",
                epoch=index,
                cell=cell,
                steps=outcome.steps,
                stopped=outcome.stopped_by_threshold,
                sign=sign.value,
            )


def sidestepping_scheme(params: SchemeParams, player_a: PlayerA) -> SidesteppingScheme:
    return SidesteppingScheme(params, player_a)
