from __future__ import annotations

import itertools
import math

import pytest

from calibration.errors import IllegalMoveError
from signgame import (
    ADMISSIBLE_ALPHA,
    ADMISSIBLE_BETA,
    BinarySearchStrategy,
    MinimaxSolver,
    MinimaxStrategy,
    TensorStrategy,
    admissibility_lower_bound,
    binary_search_strategy,
    derived_constants,
    derived_constants_record,
    new_game,
    play_out,
    place,
    preserved_count,
    tensor_strategy,
    worst_case_preserved,
)
from signgame.constants import tensor_lower_bound
from signgame.state import Sign
from signgame.strategies import ConstantResponder, MinimaxResponder, ScriptedResponder


def test_binary_search_follows_the_sign():
    strategy = binary_search_strategy(2)
    state = new_game(3, 2)
    assert strategy.choose(state) == 2
    assert strategy.choose(place(state, 2, "+")) == 3
    assert strategy.choose(place(state, 2, "-")) == 1
    assert preserved_count(play_out(strategy, 3, 2, ConstantResponder(Sign.PLUS))) == 2
    assert preserved_count(play_out(strategy, 3, 2, ConstantResponder(Sign.MINUS))) == 2


@pytest.mark.parametrize("t", [1, 2, 3])
def test_binary_search_preserves_every_sign(t):
    value, witness = worst_case_preserved(binary_search_strategy(t), 2**t - 1, t)
    assert value == t
    assert len(witness) == t
    for signs in itertools.product("+-", repeat=t):
        state = play_out(binary_search_strategy(t), 2**t - 1, t, ScriptedResponder(signs))
        assert preserved_count(state) == t


def test_binary_search_against_exact_minimax_player_f():
    solver = MinimaxSolver(7, 3)
    state = play_out(BinarySearchStrategy(3), 7, 3, MinimaxResponder(solver))
    assert preserved_count(state) == 3


def test_binary_search_for_arbitrary_cell_counts():
    strategy = BinarySearchStrategy.for_cells(10, 3)
    state = new_game(10, 3)
    assert strategy.choose(state) == 5
    assert strategy.choose(place(state, 5, "+")) == 8
    assert strategy.choose(place(state, 5, "-")) == 2


def test_tensor_of_one_level_is_the_base():
    base = binary_search_strategy(3)
    tensor = tensor_strategy(base, 1)
    for signs in itertools.product("+-", repeat=3):
        assert play_out(tensor, 7, 3, ScriptedResponder(signs)).history == play_out(
            base, 7, 3, ScriptedResponder(signs)
        ).history


def test_tensor_strategy_on_nine_cells():
    strategy = TensorStrategy(binary_search_strategy(2), 2)
    assert (strategy.num_cells, strategy.rounds) == (9, 4)
    value, _ = worst_case_preserved(strategy, 9, 4)
    assert value >= math.ceil(tensor_lower_bound(2, 2))
    assert value >= 3


def test_tensor_strategy_keeps_inner_moves_inside_their_block():
    strategy = TensorStrategy(binary_search_strategy(2), 2)
    state = play_out(strategy, 9, 4, ConstantResponder(Sign.PLUS))
    cells = [cell for cell, _ in state.history]
    # outer game picks super-cell 2 (cells 4..6), then super-cell 3 (cells 7..9)
    assert cells == [5, 6, 8, 9]
    assert preserved_count(state) == 4


def test_tensor_strategy_rejects_foreign_histories():
    strategy = TensorStrategy(binary_search_strategy(2), 2)
    state = place(new_game(9, 4), 1, "+")
    with pytest.raises(IllegalMoveError):
        strategy.choose(state)


def test_minimax_strategy_attains_the_game_value():
    solver = MinimaxSolver(5, 3)
    value, _ = worst_case_preserved(MinimaxStrategy(solver), 5, 3)
    assert value == solver.value(new_game(5, 3))


def test_derived_constants():
    assert ADMISSIBLE_ALPHA == pytest.approx(0.375265, abs=1e-5)
    assert ADMISSIBLE_BETA == pytest.approx(0.271434, abs=1e-5)
    c = derived_constants(ADMISSIBLE_ALPHA, ADMISSIBLE_BETA)
    assert round(c, 4) == 0.5287
    assert c > 0.528
    assert derived_constants(1, 1) == pytest.approx(3 / 5)

    record = derived_constants_record(ADMISSIBLE_ALPHA, ADMISSIBLE_BETA)
    assert record.c == c
    assert record.c_alternative == pytest.approx(0.663, abs=1e-3)
    assert record.exceeds_half


def test_admissibility_lower_bound():
    assert admissibility_lower_bound(254, 8) == 1
    assert admissibility_lower_bound(255, 8) == pytest.approx(4.5)
    assert admissibility_lower_bound(255**2, 64) == pytest.approx(20.25)
    assert admissibility_lower_bound(255**2, 63) == pytest.approx(4.5)
    assert admissibility_lower_bound(0, 5) == 0
