from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np

from calibration.grid import PredictionGrid
from calibration.ledger import CalibrationLedger
from calibration.transcript import Transcript


@dataclass(frozen=True)
class ForecasterView:
    """What the forecaster sees before predicting step `step` (1-based).

    The ledger and transcript hold steps 1..step-1 only; the upcoming bit is
    never part of the view.
    """

    ledger: CalibrationLedger
    transcript: Transcript
    announced_bias: Optional[float]
    grid: PredictionGrid
    rng: np.random.Generator
    step: int


class Forecaster(ABC):
    """Prediction strategy. One instance per game; `start` runs before step 1."""

    name: str = "forecaster"
    requires_oracle: bool = False
    requires_schedule: bool = False
    # prediction depends only on the step index and the announced bias
    oblivious: bool = False

    grid: PredictionGrid
    horizon: int
    rng: np.random.Generator

    def start(
        self,
        grid: PredictionGrid,
        horizon: int,
        rng: np.random.Generator,
        schedule: Optional[np.ndarray] = None,
    ) -> None:
        self.grid = grid
        self.horizon = horizon
        self.rng = rng

    @abstractmethod
    def predict(self, view: ForecasterView) -> int:
        """Grid index of the prediction for the upcoming step."""

    def predict_batch(self, announced: Optional[np.ndarray]) -> np.ndarray:
        """All T predictions at once; only oblivious forecasters support this."""
        raise NotImplementedError(f"{self.name} is not oblivious and cannot predict a whole game up front")
