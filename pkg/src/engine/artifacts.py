from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from calibration.transcript import Transcript, transcript_to_csv


def atomic_write_text(path: str | Path, content: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    tmp.replace(path)
    return path


def write_json(path: str | Path, payload: Any) -> Path:
    return atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=False) + "\n")


def write_transcript_csv(transcript: Transcript, path: str | Path) -> Path:
    return atomic_write_text(path, transcript_to_csv(transcript))
