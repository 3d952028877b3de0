from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import structlog

from calibration.grid import PredictionGrid
from calibration.ledger import CalibrationLedger


@pytest.fixture
def grid10() -> PredictionGrid:
    return PredictionGrid(10)


@pytest.fixture
def ledger_factory():
    """Ledger on a grid of resolution n after recording (p, bit) pairs."""

    def make(n: int, steps) -> CalibrationLedger:
        ledger = CalibrationLedger(PredictionGrid(n))
        for p, bit in steps:
            ledger.record_step(Fraction(p), bit)
        return ledger

    return make


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def _isolated_settings(monkeypatch, tmp_path):
    # keep every test off the developer's CALGAME_* environment
    for name in ("OUTPUT_DIR", "SOLVER_MAX_CELLS", "SOLVER_MAX_ROUNDS", "BOOTSTRAP_RESAMPLES", "LOG_LEVEL"):
        monkeypatch.delenv(f"CALGAME_{name}", raising=False)
    monkeypatch.setenv("CALGAME_OUTPUT_DIR", str(tmp_path / "results"))
    yield
    structlog.reset_defaults()
