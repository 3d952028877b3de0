# calibration core: prediction grid, ledger, transcript
from calibration.grid import OpenInterval, PredictionGrid
from calibration.ledger import (
    CalibrationLedger,
    calib_error,
    interval_error,
    pos_neg_parts,
    record_step,
)
from calibration.transcript import EpochRecord, Transcript, round_transcript

__all__ = [
    "CalibrationLedger",
    "EpochRecord",
    "OpenInterval",
    "PredictionGrid",
    "Transcript",
    "calib_error",
    "interval_error",
    "pos_neg_parts",
    "record_step",
    "round_transcript",
]
