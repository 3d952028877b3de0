from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from calibration.errors import ScriptExhaustedError, UnsupportedAdversaryError
from calibration.grid import Number, PredictionGrid, as_fraction, resolve_size, round_half_down
from forecasters.base import Forecaster, ForecasterView

# announced biases arrive as floats; recover the rational they stand for
_MAX_BIAS_DENOMINATOR = 10**12


def _exact_bias(bias: Number) -> Fraction:
    if isinstance(bias, float):
        return Fraction(bias).limit_denominator(_MAX_BIAS_DENOMINATOR)
    return as_fraction(bias)


class ConstantForecaster(Forecaster):
    oblivious = True

    def __init__(self, p: Number) -> None:
        self.p = as_fraction(p)
        self.name = f"const:{self.p}"
        self.index = 0

    def start(self, grid: PredictionGrid, horizon: int, rng: np.random.Generator, schedule=None) -> None:
        super().start(grid, horizon, rng, schedule)
        self.index = grid.index_of(self.p)

    def predict(self, view: ForecasterView) -> int:
        return self.index

    def predict_batch(self, announced: Optional[np.ndarray]) -> np.ndarray:
        return np.full(self.horizon, self.index, dtype=np.int64)


class TruthfulRoundingForecaster(Forecaster):
    """Rounds the announced bias to the nearest multiple of 1/g (ties down),
    then snaps that value onto the working grid."""

    requires_oracle = True
    oblivious = True

    def __init__(self, coarseness: int | str) -> None:
        self.coarseness_token = coarseness
        self.coarseness = 0
        self.name = f"truthful:{coarseness}"

    def start(self, grid: PredictionGrid, horizon: int, rng: np.random.Generator, schedule=None) -> None:
        super().start(grid, horizon, rng, schedule)
        self.coarseness = resolve_size(self.coarseness_token, horizon)

    def index_for(self, bias: Optional[Number]) -> int:
        if bias is None:
            raise UnsupportedAdversaryError(f"{self.name} needs an announced bias every step")
        g = self.coarseness
        rounded = Fraction(round_half_down(_exact_bias(bias) * g), g)
        return self.grid.nearest_index(rounded)

    def predict(self, view: ForecasterView) -> int:
        return self.index_for(view.announced_bias)

    def predict_batch(self, announced: Optional[np.ndarray]) -> np.ndarray:
        if announced is None:
            raise UnsupportedAdversaryError(f"{self.name} needs an announced bias every step")
        values, inverse = np.unique(announced, return_inverse=True)
        mapped = np.array([self.index_for(float(v)) for v in values], dtype=np.int64)
        return mapped[inverse].reshape(-1)


class CoarseMeanForecaster(Forecaster):
    """Bins every step together: predicts the mean of the declared bias schedule."""

    name = "coarse"
    requires_schedule = True
    oblivious = True

    def __init__(self) -> None:
        self.index = 0

    def start(self, grid: PredictionGrid, horizon: int, rng: np.random.Generator, schedule=None) -> None:
        super().start(grid, horizon, rng, schedule)
        if schedule is None:
            raise UnsupportedAdversaryError("coarse forecaster needs an adversary with a declared bias schedule")
        mean = float(np.mean(schedule)) if len(schedule) else 0.5
        self.index = grid.nearest_index(_exact_bias(mean))

    def predict(self, view: ForecasterView) -> int:
        return self.index

    def predict_batch(self, announced: Optional[np.ndarray]) -> np.ndarray:
        return np.full(self.horizon, self.index, dtype=np.int64)


class ScriptedForecaster(Forecaster):
    oblivious = True

    def __init__(self, script: Sequence[Number], name: str = "script") -> None:
        self.script: List[Fraction] = [as_fraction(p) for p in script]
        self.name = name
        self.indices: List[int] = []

    def start(self, grid: PredictionGrid, horizon: int, rng: np.random.Generator, schedule=None) -> None:
        super().start(grid, horizon, rng, schedule)
        self.indices = [grid.index_of(p) for p in self.script]

    def predict(self, view: ForecasterView) -> int:
        if view.step > len(self.indices):
            raise ScriptExhaustedError(f"script of {len(self.indices)} predictions exhausted at step {view.step}")
        return self.indices[view.step - 1]

    def predict_batch(self, announced: Optional[np.ndarray]) -> np.ndarray:
        if self.horizon > len(self.indices):
            raise ScriptExhaustedError(
                f"script of {len(self.indices)} predictions is shorter than the horizon {self.horizon}"
            )
        return np.asarray(self.indices[: self.horizon], dtype=np.int64)


def constant_forecaster(p: Number) -> ConstantForecaster:
    return ConstantForecaster(p)


def truthful_rounding_forecaster(coarseness: int | str) -> TruthfulRoundingForecaster:
    return TruthfulRoundingForecaster(coarseness)


def coarse_mean_forecaster() -> CoarseMeanForecaster:
    return CoarseMeanForecaster()


def scripted_forecaster(script: Sequence[Number]) -> ScriptedForecaster:
    return ScriptedForecaster(script)
