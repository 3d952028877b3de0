from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import structlog

from calibration.errors import SolverBudgetError
from signgame.state import Sign, SignGameState, new_game, place_masks

log = structlog.get_logger(__name__)

DEFAULT_MAX_CELLS = 16
DEFAULT_MAX_ROUNDS = 8

Key = Tuple[int, int, int, int]


@dataclass(frozen=True)
class SolverBudget:
    max_cells: int = DEFAULT_MAX_CELLS
    max_rounds: int = DEFAULT_MAX_ROUNDS

    def check(self, num_cells: int, rounds: int) -> None:
        if num_cells > self.max_cells or rounds > self.max_rounds:
            raise SolverBudgetError(
                f"SP({num_cells}, {rounds}) exceeds the solver budget "
                f"(cells <= {self.max_cells}, rounds <= {self.max_rounds})"
            )


def _reverse(mask: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (mask & 1)
        mask >>= 1
    return out


class MinimaxSolver:
    """Exact value of SP(k, r) positions, player A maximizing preserved signs.

    Dead signs never influence the future, so a position is fully described by
    (empty, alive "+", alive "-", rounds left). Keys are canonicalized under the
    mirror symmetry: reversing the cell order and swapping the signs.
    """

    def __init__(self, num_cells: int, rounds: int, budget: SolverBudget | None = None) -> None:
        self.budget = budget or SolverBudget()
        # rounds beyond the cell count can never be played
        effective_rounds = min(rounds, num_cells)
        self.budget.check(num_cells, effective_rounds)
        self.num_cells = num_cells
        self.rounds = rounds
        self.full = (1 << num_cells) - 1
        self._memo: Dict[Key, int] = {}

    @property
    def states_visited(self) -> int:
        return len(self._memo)

    def _canonical(self, empty: int, plus: int, minus: int, rounds: int) -> Key:
        k = self.num_cells
        mirrored = (_reverse(empty, k), _reverse(minus, k), _reverse(plus, k), rounds)
        key = (empty, plus, minus, rounds)
        return min(key, mirrored)

    def _child(self, empty: int, plus: int, minus: int, cell: int, sign: Sign) -> Tuple[int, int, int]:
        return place_masks(empty, plus, minus, self.full, cell, sign)

    def _value(self, empty: int, plus: int, minus: int, rounds: int) -> int:
        alive = (plus | minus).bit_count()
        if rounds == 0 or empty == 0:
            return alive
        key = self._canonical(empty, plus, minus, rounds)
        cached = self._memo.get(key)
        if cached is not None:
            return cached

        best = alive  # terminate now
        ceiling = alive + min(rounds, empty.bit_count())
        rest = empty
        while rest and best < ceiling:
            low = rest & -rest
            rest ^= low
            cell = low.bit_length()
            after_plus = self._value(*self._child(empty, plus, minus, cell, Sign.PLUS), rounds - 1)
            if after_plus <= best:
                continue
            after_minus = self._value(*self._child(empty, plus, minus, cell, Sign.MINUS), rounds - 1)
            best = max(best, min(after_plus, after_minus))

        self._memo[key] = best
        return best

    def value(self, state: SignGameState) -> int:
        return self._value(state.empty_mask, state.plus_mask, state.minus_mask, state.rounds_left)

    def best_action(self, state: SignGameState) -> Optional[int]:
        """Player A's move: the smallest optimal cell, or None to terminate."""
        target = self.value(state)
        if state.is_over or target == (state.plus_mask | state.minus_mask).bit_count():
            return None
        for cell in sorted(state.empty_cells):
            if self.move_value(state, cell) == target:
                return cell
        raise AssertionError("minimax value not attained by any move")

    def move_value(self, state: SignGameState, cell: int) -> int:
        return min(self._after(state, cell, Sign.PLUS), self._after(state, cell, Sign.MINUS))

    def best_response(self, state: SignGameState, cell: int) -> Sign:
        """Player F's reply to `cell`; ties go to "+"."""
        if self._after(state, cell, Sign.PLUS) <= self._after(state, cell, Sign.MINUS):
            return Sign.PLUS
        return Sign.MINUS

    def _after(self, state: SignGameState, cell: int, sign: Sign) -> int:
        empty, plus, minus = self._child(state.empty_mask, state.plus_mask, state.minus_mask, cell, sign)
        return self._value(empty, plus, minus, state.rounds_left - 1)


def solve_opt(num_cells: int, rounds: int, budget: SolverBudget | None = None) -> int:
    """opt(k, r): exact minimax number of preserved signs in SP(k, r)."""
    solver = MinimaxSolver(num_cells, rounds, budget)
    value = solver.value(new_game(num_cells, rounds))
    log.debug("solve_opt", k=num_cells, r=rounds, opt=value, states=solver.states_visited)
    return value
