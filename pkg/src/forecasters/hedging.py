from __future__ import annotations

import heapq
from typing import List, Optional, Tuple

import numpy as np

from calibration.grid import PredictionGrid
from calibration.ledger import CalibrationLedger
from forecasters.base import Forecaster, ForecasterView


class HedgingForecaster(Forecaster):
    """Hedges between an over-predicted and an under-predicted value.

    When some p1 < p2 have bias(p1) <= -1 and bias(p2) >= +1, predicts p1 or
    p2 with probability 1/2 each; the expected CalErr change of that step is
    -(p2 - p1)/2 whatever the bit. The widest such pair is used. Without a
    pair it predicts the value with the smallest |bias|, nearest 1/2 on ties.

    Only the bucket predicted last can change between calls, so the
    over/under/zero sets are kept as lazy heaps and validated on read.
    """

    name = "hedging"

    def start(self, grid: PredictionGrid, horizon: int, rng: np.random.Generator, schedule=None) -> None:
        super().start(grid, horizon, rng, schedule)
        self._last: Optional[int] = None
        self._synced = 0
        self._rebuild(CalibrationLedger(grid))

    def _distance(self, index: int) -> int:
        return abs(2 * index - self.grid.resolution)

    def _rebuild(self, ledger: CalibrationLedger) -> None:
        n = self.grid.resolution
        scaled = ledger.scaled_bias
        self._under: List[int] = [int(i) for i in np.flatnonzero(scaled <= -n)]  # min-heap
        self._over: List[int] = [-int(i) for i in np.flatnonzero(scaled >= n)]  # max-heap, negated
        self._zero: List[Tuple[int, int]] = [(self._distance(int(i)), int(i)) for i in np.flatnonzero(scaled == 0)]
        heapq.heapify(self._under)
        heapq.heapify(self._over)
        heapq.heapify(self._zero)

    def _refresh(self, ledger: CalibrationLedger) -> None:
        index = self._last
        expected = self._synced + (0 if index is None else 1)
        self._synced = ledger.step
        if ledger.step != expected:
            # ledger was written by someone else
            self._rebuild(ledger)
            return
        if index is None:
            return
        n = self.grid.resolution
        value = int(ledger.scaled_bias[index])
        if value <= -n:
            heapq.heappush(self._under, index)
        elif value >= n:
            heapq.heappush(self._over, -index)
        elif value == 0:
            heapq.heappush(self._zero, (self._distance(index), index))

    def _top_under(self, ledger: CalibrationLedger) -> Optional[int]:
        n = self.grid.resolution
        while self._under and int(ledger.scaled_bias[self._under[0]]) > -n:
            heapq.heappop(self._under)
        return self._under[0] if self._under else None

    def _top_over(self, ledger: CalibrationLedger) -> Optional[int]:
        n = self.grid.resolution
        while self._over and int(ledger.scaled_bias[-self._over[0]]) < n:
            heapq.heappop(self._over)
        return -self._over[0] if self._over else None

    def _top_zero(self, ledger: CalibrationLedger) -> Optional[int]:
        while self._zero and int(ledger.scaled_bias[self._zero[0][1]]) != 0:
            heapq.heappop(self._zero)
        return self._zero[0][1] if self._zero else None

    def hedge_pair(self, ledger: CalibrationLedger) -> Optional[Tuple[int, int]]:
        low = self._top_under(ledger)
        high = self._top_over(ledger)
        if low is None or high is None or low >= high:
            return None
        return low, high

    def _fallback(self, ledger: CalibrationLedger) -> int:
        zero = self._top_zero(ledger)
        if zero is not None:
            return zero
        size = self.grid.size
        magnitude = np.abs(ledger.scaled_bias)
        distance = np.abs(2 * np.arange(size) - self.grid.resolution)
        return int(np.lexsort((np.arange(size), distance, magnitude))[0])

    def predict(self, view: ForecasterView) -> int:
        ledger = view.ledger
        self._refresh(ledger)
        pair = self.hedge_pair(ledger)
        if pair is None:
            choice = self._fallback(ledger)
        else:
            choice = pair[0] if view.rng.random() < 0.5 else pair[1]
        self._last = choice
        return choice


def hedging_forecaster() -> HedgingForecaster:
    return HedgingForecaster()
