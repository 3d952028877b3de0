from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

from calibration.errors import TranscriptStructureError
from calibration.grid import OpenInterval, PredictionGrid, round_half_down

CSV_HEADER = ["step", "prediction_num", "prediction_den", "bit", "announced_bias", "epoch_id"]


@dataclass
class EpochRecord:
    index: int
    cell: int
    interval: OpenInterval
    bias: Fraction
    start_step: int  # steps elapsed when the epoch began
    end_step: int  # steps elapsed when it ended; the epoch owns steps [start_step, end_step)
    sign: Optional[str] = None
    stopped_by_threshold: Optional[bool] = None  # unknown for epochs rebuilt from CSV

    @property
    def length(self) -> int:
        return self.end_step - self.start_step


@dataclass
class Transcript:
    denominator: int
    numerators: List[int] = field(default_factory=list)
    bits: List[int] = field(default_factory=list)
    announced: List[Optional[float]] = field(default_factory=list)
    epochs: List[EpochRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.bits)

    def append(self, index: int, bit: int, announced_bias: Optional[float] = None) -> None:
        self.numerators.append(index)
        self.bits.append(bit)
        self.announced.append(announced_bias)

    def mark_epoch(self, record: EpochRecord) -> None:
        if self.epochs and record.start_step < self.epochs[-1].end_step:
            raise TranscriptStructureError(
                f"epoch {record.index} starts at {record.start_step}, "
                f"before epoch {self.epochs[-1].index} ended at {self.epochs[-1].end_step}"
            )
        self.epochs.append(record)

    def epoch_ids(self) -> List[Optional[int]]:
        ids: List[Optional[int]] = [None] * len(self)
        for record in self.epochs:
            for t in range(record.start_step, min(record.end_step, len(self))):
                ids[t] = record.index
        return ids


def round_transcript(transcript: Transcript, grid: PredictionGrid) -> Transcript:
    """Snap every prediction to the nearest value of `grid` (ties toward the smaller value)."""
    n, den = grid.resolution, transcript.denominator
    return Transcript(
        denominator=n,
        numerators=[round_half_down(Fraction(num * n, den)) for num in transcript.numerators],
        bits=list(transcript.bits),
        announced=list(transcript.announced),
        epochs=list(transcript.epochs),
    )


def _format_bias(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def transcript_to_csv(transcript: Transcript) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for step, (num, bit, ann, epoch_id) in enumerate(
        zip(transcript.numerators, transcript.bits, transcript.announced, transcript.epoch_ids()), start=1
    ):
        writer.writerow([step, num, transcript.denominator, bit, _format_bias(ann), "" if epoch_id is None else epoch_id])
    return buf.getvalue()


def _epoch_from_rows(epoch_id: int, steps: List[int], bias: float, num_cells: int) -> EpochRecord:
    k = num_cells
    cell = round_half_down((Fraction(bias) - Fraction(1, 3)) * 3 * k + Fraction(1, 2))
    cell = min(max(cell, 1), k)
    interval = OpenInterval(Fraction(1, 3) + Fraction(cell - 1, 3 * k), Fraction(1, 3) + Fraction(cell, 3 * k))
    return EpochRecord(
        index=epoch_id,
        cell=cell,
        interval=interval,
        bias=interval.midpoint,
        start_step=steps[0],
        end_step=steps[-1] + 1,
    )


def transcript_from_csv(text: str, *, num_cells: int | None = None) -> Transcript:
    """Parse the CSV codec. Epoch records are rebuilt only when `num_cells` is given.

    Epochs that emitted no bit leave no row behind and cannot be recovered.
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_HEADER:
        raise TranscriptStructureError(f"unexpected transcript header {reader.fieldnames!r}")
    transcript: Transcript | None = None
    grouped: dict[int, Tuple[List[int], float]] = {}
    for row_no, row in enumerate(reader):
        try:
            den = int(row["prediction_den"])
            num = int(row["prediction_num"])
            bit = int(row["bit"])
            ann = float(row["announced_bias"]) if row["announced_bias"] else None
        except (TypeError, ValueError) as exc:
            raise TranscriptStructureError(f"malformed transcript row {row_no + 1}: {row!r}") from exc
        if transcript is None:
            transcript = Transcript(denominator=den)
        elif den != transcript.denominator:
            raise TranscriptStructureError(f"row {row_no + 1} changes the denominator to {den}")
        transcript.append(num, bit, ann)
        if row["epoch_id"]:
            epoch_id = int(row["epoch_id"])
            steps, _ = grouped.setdefault(epoch_id, ([], ann if ann is not None else 0.5))
            steps.append(row_no)
    if transcript is None:
        raise TranscriptStructureError("transcript CSV has no rows")
    if num_cells is not None:
        for epoch_id in sorted(grouped):
            steps, bias = grouped[epoch_id]
            transcript.mark_epoch(_epoch_from_rows(epoch_id, steps, bias, num_cells))
    return transcript


def read_transcript_csv(path: str | Path, *, num_cells: int | None = None) -> Transcript:
    return transcript_from_csv(Path(path).read_text(encoding="utf-8"), num_cells=num_cells)
