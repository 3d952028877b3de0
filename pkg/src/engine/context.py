from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from calibration.grid import PredictionGrid
from calibration.ledger import CalibrationLedger
from calibration.transcript import Transcript
from signgame.state import SignGameState


@dataclass
class EarlyStopInfo:
    triggered: bool
    decision_step: int  # t0 when triggered, otherwise the step the inner scheme ended
    positive_part: float
    negative_part: float
    tail_bit: Optional[int]  # None when no tail was needed


@dataclass
class GameContext:
    """Everything one game shares between the engine and its adversary.

    The adversary reads the ledger and transcript, which hold steps 1..t-1 each
    time it is asked for bit t, and writes its bookkeeping (epochs, simulated
    sign game, early stopping) back here.
    """

    grid: PredictionGrid
    horizon: int
    ledger: CalibrationLedger
    transcript: Transcript
    rng: np.random.Generator
    sign_state: Optional[SignGameState] = None
    scheme_steps: Optional[int] = None
    early_stop: Optional[EarlyStopInfo] = None

    @property
    def step(self) -> int:
        return self.ledger.step

    @property
    def remaining(self) -> int:
        return self.horizon - self.ledger.step


def new_context(grid: PredictionGrid, horizon: int, rng: np.random.Generator) -> GameContext:
    return GameContext(
        grid=grid,
        horizon=horizon,
        ledger=CalibrationLedger(grid),
        transcript=Transcript(denominator=grid.resolution),
        rng=rng,
    )
