from __future__ import annotations


class CalibrationGameError(Exception):
    """Base class for every error raised by this package."""


class OffGridError(CalibrationGameError, ValueError):
    pass


class IllegalMoveError(CalibrationGameError, ValueError):
    pass


class SolverBudgetError(CalibrationGameError):
    pass


class ConfigurationError(CalibrationGameError, ValueError):
    pass


class UnsupportedAdversaryError(ConfigurationError):
    """A forecaster needs a channel (oracle bias, declared schedule) the adversary lacks."""


class ScriptExhaustedError(CalibrationGameError):
    pass


class TranscriptStructureError(CalibrationGameError, ValueError):
    pass


class FitError(CalibrationGameError):
    pass


class StrategyFailure(CalibrationGameError):
    """A strategy raised mid-game; wraps the cause with the step it failed at."""

    def __init__(self, message: str, *, step: int) -> None:
        super().__init__(message)
        self.step = step
