from __future__ import annotations

import numpy as np
import pytest

from adversaries import (
    EarlyStoppingWrapper,
    EpochLadder,
    IidBernoulli,
    SchemeParams,
    SidesteppingScheme,
    build_adversary,
    build_player_a,
    early_stopping_wrapper,
    epoch_ladder,
    iid_bernoulli,
    sidestepping_scheme,
)
from calibration.errors import ConfigurationError, SolverBudgetError
from signgame.strategies import BinarySearchStrategy, MinimaxStrategy, TensorStrategy


def test_iid_schedule_and_draws(rng):
    adversary = IidBernoulli(0.3)
    assert np.all(adversary.schedule(5) == 0.3)
    bits, biases = adversary.draw_all(1000, rng)
    assert bits.shape == biases.shape == (1000,)
    assert set(np.unique(bits).tolist()) <= {0, 1}
    assert 200 < bits.sum() < 400


def test_degenerate_iid_biases_are_deterministic(rng):
    ones, _ = IidBernoulli(1.0).draw_all(50, rng)
    zeros, _ = IidBernoulli(0.0).draw_all(50, rng)
    assert ones.tolist() == [1] * 50
    assert zeros.tolist() == [0] * 50


def test_ladder_schedule():
    assert EpochLadder(4).schedule(10).tolist() == [0.25] * 3 + [0.5] * 2 + [0.75] * 3 + [1.0] * 2
    schedule = EpochLadder(8).schedule(512)
    assert schedule[0] == 0.125
    assert schedule[63] == 0.125
    assert schedule[64] == 0.25
    assert schedule[-1] == 1.0


@pytest.mark.parametrize("k, horizon", [(8, 12), (6, 10), (7, 100), (5, 5)])
def test_ladder_reaches_every_bias_when_k_does_not_divide_t(k, horizon):
    schedule = EpochLadder(k).schedule(horizon)
    assert len(schedule) == horizon
    assert np.unique(schedule).tolist() == [i / k for i in range(1, k + 1)]
    assert np.all(np.diff(schedule) >= 0)
    lengths = np.unique(schedule, return_counts=True)[1]
    assert set(lengths.tolist()) <= {horizon // k, -(-horizon // k)}


@pytest.mark.parametrize("bad", [-0.1, 1.5])
def test_iid_rejects_out_of_range_bias(bad):
    with pytest.raises(ConfigurationError):
        IidBernoulli(bad)


def test_registry_parses_specs():
    assert build_adversary("iid", horizon=10).p == 0.5
    assert build_adversary("iid:0.25", horizon=10).p == 0.25
    assert build_adversary("ladder:cbrt", horizon=512).k == 8
    assert build_adversary("ladder:5", horizon=512).k == 5

    scheme = build_adversary("sidestep", horizon=4096)
    assert isinstance(scheme, SidesteppingScheme)
    assert scheme.scheme_params.k == 17
    assert isinstance(scheme.player_a, BinarySearchStrategy)

    wrapped = build_adversary("sidestep+earlystop", horizon=4096)
    assert isinstance(wrapped, EarlyStoppingWrapper)
    assert wrapped.B == wrapped.scheme_params.B
    assert wrapped.horizon == 4096


@pytest.mark.parametrize(
    "spec, horizon",
    [
        ("nope", 100),
        ("iid:half", 100),
        ("ladder:0", 100),
        ("ladder:many", 100),
        ("sidestep", 2),
        ("sidestep+earlystop", 0),
    ],
)
def test_registry_rejects_bad_specs(spec, horizon):
    with pytest.raises(ConfigurationError):
        build_adversary(spec, horizon=horizon)


def test_sidestep_overrides_reach_the_parameters():
    scheme = build_adversary("sidestep", horizon=4096, alpha=1.0, beta=1.0, grid_resolution=5000)
    params = scheme.scheme_params
    assert (params.alpha, params.beta, params.grid_resolution) == (1.0, 1.0, 5000)
    # k = floor(T^(1/5)) = 5
    assert params.k == 5


def test_named_constructors():
    assert iid_bernoulli(0.75).p == 0.75
    assert epoch_ladder(4).k == 4

    params = SchemeParams(horizon=300)
    scheme = sidestepping_scheme(params, BinarySearchStrategy.for_cells(params.k, params.num_epochs))
    assert scheme.scheme_params is params
    wrapped = early_stopping_wrapper(scheme, 5.0, 300)
    assert wrapped.inner is scheme
    assert (wrapped.B, wrapped.horizon) == (5.0, 300)


def test_player_a_registry():
    assert isinstance(build_player_a("binary", 17, 3), BinarySearchStrategy)
    tensor = build_player_a("tensor:3,2,2", 17, 3)
    assert isinstance(tensor, TensorStrategy)
    assert tensor.num_cells == 9
    assert isinstance(build_player_a("minimax", 7, 3), MinimaxStrategy)

    with pytest.raises(ConfigurationError):
        build_player_a("tensor:3,2,3", 17, 3)
    with pytest.raises(ConfigurationError):
        build_player_a("tensor:3,2", 17, 3)
    with pytest.raises(ConfigurationError):
        build_player_a("spiral", 17, 3)
    with pytest.raises(SolverBudgetError):
        build_player_a("minimax", 17, 3)
