from __future__ import annotations

from pathlib import Path
from typing import Dict, Optional

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from calibration.errors import ConfigurationError
from calibration.grid import PredictionGrid
from signgame.solver import DEFAULT_MAX_CELLS, DEFAULT_MAX_ROUNDS, SolverBudget


class Settings(BaseSettings):
    """Process-wide defaults, overridable through CALGAME_* environment variables."""

    model_config = SettingsConfigDict(env_prefix="CALGAME_", extra="ignore")

    output_dir: str = "results"
    solver_max_cells: int = Field(default=DEFAULT_MAX_CELLS, ge=1)
    solver_max_rounds: int = Field(default=DEFAULT_MAX_ROUNDS, ge=1)
    bootstrap_resamples: int = Field(default=1000, ge=1)
    log_level: str = "INFO"

    @property
    def solver_budget(self) -> SolverBudget:
        return SolverBudget(self.solver_max_cells, self.solver_max_rounds)


def load_settings() -> Settings:
    return Settings()


class GameConfig(BaseModel):
    horizon: int = Field(ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    grid_resolution: Optional[int] = Field(default=None, ge=1)  # defaults to T (at least 2)
    adversary: str = "iid:0.5"
    forecaster: str = "const:1/2"
    alpha: Optional[float] = None
    beta: Optional[float] = None
    c0: Optional[float] = None
    player_a: str = "binary"
    keep_transcript: bool = True

    @property
    def grid(self) -> PredictionGrid:
        return PredictionGrid(self.grid_resolution or max(self.horizon, 2))

    def with_seed(self, seed: int) -> "GameConfig":
        return self.model_copy(update={"seed": seed})


def read_config_file(path: str | Path) -> Dict[str, str]:
    """`key = value` lines; `#` comments and blank lines are skipped.

    Keys are normalized to argparse destinations (`t-list` -> `t_list`).
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    values: Dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"{path}:{line_no}: expected 'key = value', got {raw!r}")
        values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values
