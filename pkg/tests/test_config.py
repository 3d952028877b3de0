from __future__ import annotations

import pytest
from pydantic import ValidationError

from calibration.errors import ConfigurationError
from calibration.grid import PredictionGrid
from engine.artifacts import atomic_write_text, write_json
from engine.config import GameConfig, load_settings, read_config_file
from signgame.solver import SolverBudget


def test_settings_read_the_environment(monkeypatch, tmp_path):
    settings = load_settings()
    assert settings.output_dir == str(tmp_path / "results")
    assert settings.solver_budget == SolverBudget(16, 8)
    assert settings.bootstrap_resamples == 1000

    monkeypatch.setenv("CALGAME_SOLVER_MAX_CELLS", "10")
    monkeypatch.setenv("CALGAME_BOOTSTRAP_RESAMPLES", "50")
    settings = load_settings()
    assert settings.solver_budget == SolverBudget(10, 8)
    assert settings.bootstrap_resamples == 50

    monkeypatch.setenv("CALGAME_SOLVER_MAX_CELLS", "0")
    with pytest.raises(ValidationError):
        load_settings()


def test_game_config_defaults_and_bounds():
    config = GameConfig(horizon=100)
    assert config.grid == PredictionGrid(100)
    assert GameConfig(horizon=100, grid_resolution=7).grid == PredictionGrid(7)
    assert GameConfig(horizon=0).grid == PredictionGrid(2)
    assert config.with_seed(9).seed == 9
    assert config.seed == 0

    for bad in ({"horizon": -1}, {"horizon": 4, "seed": 2**64}, {"horizon": 4, "grid_resolution": 0}):
        with pytest.raises(ValidationError):
            GameConfig(**bad)


def test_read_config_file(tmp_path):
    path = tmp_path / "game.cfg"
    path.write_text("# sweep\nhorizon = 16\n\n--t-list = 2^4..2^6  # powers\nlog-json = true\n", encoding="utf-8")
    assert read_config_file(path) == {"horizon": "16", "t_list": "2^4..2^6", "log_json": "true"}

    path.write_text("horizon 16\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        read_config_file(path)
    with pytest.raises(ConfigurationError):
        read_config_file(tmp_path / "missing.cfg")


def test_atomic_writes_leave_no_temporaries(tmp_path):
    target = atomic_write_text(tmp_path / "nested" / "out.txt", "one\n")
    atomic_write_text(target, "two\n")
    assert target.read_text(encoding="utf-8") == "two\n"
    write_json(tmp_path / "nested" / "out.json", {"a": 1})
    assert sorted(p.name for p in target.parent.iterdir()) == ["out.json", "out.txt"]
