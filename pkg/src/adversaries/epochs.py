from __future__ import annotations

from enum import Enum
from typing import Dict, List, Optional

import structlog
from pydantic import BaseModel

from adversaries.sidestep import SchemeParams
from calibration.errors import TranscriptStructureError
from calibration.grid import PredictionGrid
from calibration.ledger import CalibrationLedger
from calibration.transcript import Transcript

log = structlog.get_logger(__name__)


class EpochClass(str, Enum):
    UNTRUTHFUL = "untruthful"
    NEGLIGIBLE = "negligible"
    COVERED = "covered"
    UNCOVERED = "uncovered"


class EpochLabel(BaseModel):
    index: int
    label: EpochClass
    outside_predictions: int
    error_at_end: float
    error_at_t_act: float
    # the epoch stopped on the threshold check but is negligible at its end
    # step, or ran to exhaustion while its interval error already reached theta
    threshold_divergence: bool = False


def classify_epochs(
    transcript: Transcript,
    params: SchemeParams,
    t_act: Optional[int] = None,
) -> List[EpochLabel]:
    """Label every epoch untruthful, negligible, covered or uncovered.

    Truthful epochs split into negligible and non-negligible; non-negligible
    ones into covered and uncovered.
    """
    if not transcript.epochs:
        raise TranscriptStructureError("transcript has no epoch marks to classify")
    t_act = len(transcript) if t_act is None else min(t_act, len(transcript))
    grid = PredictionGrid(transcript.denominator)
    theta_scaled = params.theta * grid.resolution

    ends: Dict[int, List[int]] = {}
    for pos, record in enumerate(transcript.epochs):
        ends.setdefault(record.end_step, []).append(pos)

    at_end: Dict[int, int] = {}
    at_t_act: Dict[int, int] = {}
    ledger = CalibrationLedger(grid)

    def snapshot(step: int) -> None:
        for pos in ends.get(step, []):
            at_end[pos] = ledger.scaled_interval_error(transcript.epochs[pos].interval)
        if step == t_act:
            for pos, record in enumerate(transcript.epochs):
                at_t_act[pos] = ledger.scaled_interval_error(record.interval)

    snapshot(0)
    for step, (index, bit) in enumerate(zip(transcript.numerators, transcript.bits), start=1):
        if step > t_act and len(at_end) == len(transcript.epochs):
            break
        ledger.record_index(index, bit)
        snapshot(step)

    labels: List[EpochLabel] = []
    for pos, record in enumerate(transcript.epochs):
        outside = sum(
            1
            for index in transcript.numerators[record.start_step : record.end_step]
            if not record.interval.contains(grid.value(index))
        )
        end_error = at_end[pos]
        final_error = at_t_act[pos]
        if outside >= params.untruthful_threshold:
            label = EpochClass.UNTRUTHFUL
        elif end_error < theta_scaled:
            label = EpochClass.NEGLIGIBLE
        elif final_error < theta_scaled / 4:
            label = EpochClass.COVERED
        else:
            label = EpochClass.UNCOVERED
        stopped = record.stopped_by_threshold
        divergent = stopped is not None and stopped != (end_error >= theta_scaled)
        if divergent:
            log.warning("epoch_threshold_divergence", epoch=record.index, stopped=stopped)
        labels.append(
            EpochLabel(
                index=record.index,
                label=label,
                outside_predictions=outside,
                error_at_end=end_error / grid.resolution,
                error_at_t_act=final_error / grid.resolution,
                threshold_divergence=divergent,
            )
        )
    return labels
