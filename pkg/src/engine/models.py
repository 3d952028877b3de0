from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from adversaries.epochs import EpochLabel
from calibration.transcript import Transcript


@dataclass
class GameResult:
    seed: int
    horizon: int
    steps: int
    t_act: int  # steps of the scheme before any early-stopping tail
    final_calerr: float
    max_err: float
    transcript: Optional[Transcript] = None
    preserved_signs: Optional[int] = None
    epoch_labels: Optional[List[EpochLabel]] = None
    early_stop_triggered: Optional[bool] = None
    trigger_step: Optional[int] = None
    tail_bit: Optional[int] = None
    B: Optional[float] = None

    def to_record(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "t_act": self.t_act,
            "calerr": self.final_calerr,
            "maxerr": self.max_err,
            "preserved_signs": self.preserved_signs,
            "epoch_labels": [label.model_dump(mode="json") for label in self.epoch_labels or []],
        }
