from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Tuple

import numpy as np

from calibration.errors import OffGridError
from calibration.grid import Number, OpenInterval, PredictionGrid

if TYPE_CHECKING:
    from calibration.transcript import Transcript


class CalibrationLedger:
    """Per-bucket counters n_p, m_p with exact running CalErr and MaxErr.

    Biases are kept scaled by the grid resolution n: for p = i/n the stored
    value is n*Delta_p = n*m_p - n_p*i, an integer. All error sums are exact
    integers divided by n on the way out.
    """

    def __init__(self, grid: PredictionGrid) -> None:
        self.grid = grid
        self.counts = np.zeros(grid.size, dtype=np.int64)
        self.ones = np.zeros(grid.size, dtype=np.int64)
        self.scaled_bias = np.zeros(grid.size, dtype=np.int64)
        self.step = 0
        self._scaled_calerr = 0
        self._scaled_max = 0
        self._scaled_ones_minus_predictions = 0

    # -- updates -----------------------------------------------------------

    def record_index(self, index: int, bit: int) -> None:
        n = self.grid.resolution
        if not 0 <= index <= n:
            raise OffGridError(f"grid index {index} outside 0..{n}")
        if bit not in (0, 1):
            raise ValueError(f"bit must be 0 or 1, got {bit!r}")
        old = int(self.scaled_bias[index])
        new = old + n * bit - index
        self.counts[index] += 1
        self.ones[index] += bit
        self.scaled_bias[index] = new
        self.step += 1
        self._scaled_calerr += abs(new) - abs(old)
        self._scaled_ones_minus_predictions += n * bit - index
        if self._scaled_calerr > self._scaled_max:
            self._scaled_max = self._scaled_calerr

    def record_step(self, p: Number, bit: int) -> "CalibrationLedger":
        self.record_index(self.grid.index_of(p), bit)
        return self

    # -- reads -------------------------------------------------------------

    @property
    def calerr(self) -> float:
        return self._scaled_calerr / self.grid.resolution

    @property
    def max_err_seen(self) -> float:
        return self._scaled_max / self.grid.resolution

    @property
    def exact_calerr(self) -> Fraction:
        return Fraction(self._scaled_calerr, self.grid.resolution)

    @property
    def exact_max_err(self) -> Fraction:
        return Fraction(self._scaled_max, self.grid.resolution)

    def bias(self, p: Number) -> float:
        return int(self.scaled_bias[self.grid.index_of(p)]) / self.grid.resolution

    def total_bias(self) -> float:
        """Sum of Delta_p over all p, tracked independently of the buckets."""
        return self._scaled_ones_minus_predictions / self.grid.resolution

    def scaled_parts(self, indices: range | None = None) -> Tuple[int, int]:
        values = self.scaled_bias if indices is None else self.scaled_bias[indices.start : indices.stop]
        positive = int(values[values > 0].sum())
        negative = int(-values[values < 0].sum())
        return positive, negative

    def interval_parts(self, interval: OpenInterval) -> Tuple[float, float]:
        pos, neg = self.scaled_parts(self.grid.indices_inside(interval))
        n = self.grid.resolution
        return pos / n, neg / n

    def scaled_interval_error(self, interval: OpenInterval) -> int:
        inside = self.grid.indices_inside(interval)
        return int(np.abs(self.scaled_bias[inside.start : inside.stop]).sum())

    # -- construction --------------------------------------------------------

    @classmethod
    def from_arrays(cls, grid: PredictionGrid, indices: np.ndarray, bits: np.ndarray) -> "CalibrationLedger":
        """Build the ledger of a whole game at once, MaxErr included."""
        ledger = cls(grid)
        indices = np.asarray(indices, dtype=np.int64)
        bits = np.asarray(bits, dtype=np.int64)
        if indices.size == 0:
            return ledger
        n = grid.resolution
        if indices.min() < 0 or indices.max() > n:
            raise OffGridError(f"grid indices must lie in 0..{n}")

        ledger.counts = np.bincount(indices, minlength=grid.size).astype(np.int64)
        ledger.ones = np.bincount(indices, weights=bits, minlength=grid.size).astype(np.int64)
        ledger.scaled_bias = n * ledger.ones - ledger.counts * np.arange(grid.size, dtype=np.int64)
        ledger.step = int(indices.size)

        # Running |bias| per bucket: group steps by bucket (stable); cumulative
        # sums restart at every group boundary.
        size = indices.size
        increments = n * bits - indices
        order = np.argsort(indices, kind="stable")
        grouped = increments[order]
        sorted_indices = indices[order]
        starts = np.ones(size, dtype=bool)
        starts[1:] = sorted_indices[1:] != sorted_indices[:-1]
        total = np.cumsum(grouped)
        before = total - grouped
        group_start = np.maximum.accumulate(np.where(starts, np.arange(size), 0))
        magnitude = np.abs(total - before[group_start])
        previous = np.zeros(size, dtype=np.int64)
        previous[1:] = magnitude[:-1]
        previous[starts] = 0
        change = np.empty(size, dtype=np.int64)
        change[order] = magnitude - previous
        series = np.cumsum(change)

        ledger._scaled_calerr = int(series[-1])
        ledger._scaled_max = max(int(series.max()), 0)
        ledger._scaled_ones_minus_predictions = int(increments.sum())
        return ledger

    @classmethod
    def replay(cls, transcript: "Transcript") -> "CalibrationLedger":
        ledger = cls(PredictionGrid(transcript.denominator))
        for index, bit in zip(transcript.numerators, transcript.bits):
            ledger.record_index(index, bit)
        return ledger


def calib_error(ledger: CalibrationLedger) -> float:
    return ledger.calerr


def pos_neg_parts(ledger: CalibrationLedger) -> Tuple[float, float]:
    pos, neg = ledger.scaled_parts()
    n = ledger.grid.resolution
    return pos / n, neg / n


def interval_error(ledger: CalibrationLedger, interval: OpenInterval) -> float:
    """Sum of |Delta_p| over grid values strictly inside the interval."""
    return ledger.scaled_interval_error(interval) / ledger.grid.resolution


def record_step(ledger: CalibrationLedger, p: Number, b: int) -> CalibrationLedger:
    return ledger.record_step(p, b)
