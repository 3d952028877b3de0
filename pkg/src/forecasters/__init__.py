from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import List

from calibration.errors import ConfigurationError
from forecasters.base import Forecaster, ForecasterView
from forecasters.hedging import HedgingForecaster, hedging_forecaster
from forecasters.simple import (
    CoarseMeanForecaster,
    ConstantForecaster,
    ScriptedForecaster,
    TruthfulRoundingForecaster,
    coarse_mean_forecaster,
    constant_forecaster,
    scripted_forecaster,
    truthful_rounding_forecaster,
)

FORECASTER_KINDS = ("const", "truthful", "coarse", "hedging", "script")


def _parse_value(token: str) -> Fraction:
    try:
        return Fraction(token.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"expected a probability like 0.5 or 1/2, got {token!r}") from exc


def load_script(path: str | Path) -> List[Fraction]:
    """One prediction per line or comma separated; `#` starts a comment."""
    values: List[Fraction] = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read forecaster script {path}: {exc}") from exc
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        values.extend(_parse_value(tok) for tok in line.split(",") if tok.strip())
    return values


def build_forecaster(spec: str) -> Forecaster:
    """Parse `const:p | truthful:g | coarse | hedging | script:file`."""
    kind, _, arg = spec.strip().partition(":")
    kind = kind.strip().lower()
    arg = arg.strip()
    if kind == "const":
        return ConstantForecaster(_parse_value(arg or "1/2"))
    if kind == "truthful":
        if not arg:
            raise ConfigurationError("truthful forecaster needs a coarseness, e.g. truthful:16 or truthful:cbrt")
        return TruthfulRoundingForecaster(arg if arg.lower() == "cbrt" else _parse_int(arg))
    if kind == "coarse":
        return CoarseMeanForecaster()
    if kind == "hedging":
        return HedgingForecaster()
    if kind == "script":
        if not arg:
            raise ConfigurationError("script forecaster needs a file, e.g. script:predictions.txt")
        return ScriptedForecaster(load_script(arg), name=f"script:{Path(arg).name}")
    raise ConfigurationError(f"unknown forecaster {spec!r}; expected one of {', '.join(FORECASTER_KINDS)}")


def _parse_int(token: str) -> int:
    try:
        value = int(token)
    except ValueError as exc:
        raise ConfigurationError(f"expected a positive integer or 'cbrt', got {token!r}") from exc
    if value < 1:
        raise ConfigurationError(f"coarseness must be positive, got {value}")
    return value


__all__ = [
    "FORECASTER_KINDS",
    "CoarseMeanForecaster",
    "ConstantForecaster",
    "Forecaster",
    "ForecasterView",
    "HedgingForecaster",
    "ScriptedForecaster",
    "TruthfulRoundingForecaster",
    "build_forecaster",
    "coarse_mean_forecaster",
    "constant_forecaster",
    "hedging_forecaster",
    "load_script",
    "scripted_forecaster",
    "truthful_rounding_forecaster",
]
