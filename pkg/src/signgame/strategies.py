from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from calibration.errors import IllegalMoveError
from signgame.solver import MinimaxSolver
from signgame.state import (
    Move,
    Sign,
    SignGameState,
    new_game,
    place,
    preserved_count,
    preserved_moves,
    replay,
)


class PlayerA(ABC):
    """Cell chooser for SP(num_cells, rounds). Pure function of the state's history."""

    num_cells: int
    rounds: int

    @abstractmethod
    def choose(self, state: SignGameState) -> Optional[int]:
        """An empty cell, or None to terminate the game."""


class PlayerF(ABC):
    @abstractmethod
    def respond(self, state: SignGameState, cell: int) -> Sign:
        ...


class BinarySearchStrategy(PlayerA):
    """Median of the active range; "+" moves right, "-" moves left."""

    def __init__(self, t: int) -> None:
        if t < 1:
            raise ValueError(f"binary search needs t >= 1, got {t}")
        self.num_cells = 2**t - 1
        self.rounds = t

    @classmethod
    def for_cells(cls, num_cells: int, rounds: int) -> "BinarySearchStrategy":
        strategy = cls.__new__(cls)
        strategy.num_cells = num_cells
        strategy.rounds = rounds
        return strategy

    def choose(self, state: SignGameState) -> Optional[int]:
        lo, hi = 1, self.num_cells
        for cell, sign in state.history:
            if Sign(sign) is Sign.PLUS:
                lo = cell + 1
            else:
                hi = cell - 1
        if len(state.history) >= self.rounds or lo > hi or state.is_over:
            return None
        return (lo + hi) // 2


def majority_sign(history: Sequence[Move]) -> Sign:
    kept = preserved_moves(history)
    plus = sum(1 for _, sign in kept if sign is Sign.PLUS)
    return Sign.PLUS if plus >= len(kept) - plus else Sign.MINUS


class TensorStrategy(PlayerA):
    """Player A for SP(a^t, b^t) built from a player A for SP(a, b).

    The a^t cells are split into a contiguous super-cells of a^(t-1) cells each.
    An outer SP(a, b) picks super-cells; each pick runs an inner SP(a^(t-1),
    b^(t-1)) on that block, and the outer game receives the majority sign of
    the inner game's preserved signs.
    """

    def __init__(self, base: PlayerA, t: int) -> None:
        if t < 1:
            raise ValueError(f"tensor power must be >= 1, got {t}")
        self.base = base
        self.t = t
        self.a = base.num_cells
        self.b = base.rounds
        self.num_cells = self.a**t
        self.rounds = self.b**t

    def choose(self, state: SignGameState) -> Optional[int]:
        if state.is_over:
            return None
        return self._next(state.history, self.t)

    def _next(self, history: Sequence[Move], level: int) -> Optional[int]:
        if level == 1:
            return self.base.choose(replay(self.a, self.b, history))

        block = self.a ** (level - 1)
        inner_rounds = self.b ** (level - 1)
        outer = new_game(self.a, self.b)
        pos = 0
        while True:
            super_cell = None if outer.is_over else self.base.choose(outer)
            if super_cell is None:
                return None
            offset = (super_cell - 1) * block
            inner: List[Move] = []
            while len(inner) < inner_rounds:
                cell = self._next(inner, level - 1)
                if cell is None:
                    break
                if pos == len(history):
                    return offset + cell
                actual, sign = history[pos]
                pos += 1
                if not offset < actual <= offset + block:
                    raise IllegalMoveError(f"cell {actual} was not played by this tensor strategy")
                inner.append((actual - offset, Sign(sign)))
            outer = place(outer, super_cell, majority_sign(inner))


class MinimaxStrategy(PlayerA):
    def __init__(self, solver: MinimaxSolver) -> None:
        self.solver = solver
        self.num_cells = solver.num_cells
        self.rounds = solver.rounds

    def choose(self, state: SignGameState) -> Optional[int]:
        return self.solver.best_action(state)


class MinimaxResponder(PlayerF):
    def __init__(self, solver: MinimaxSolver) -> None:
        self.solver = solver

    def respond(self, state: SignGameState, cell: int) -> Sign:
        return self.solver.best_response(state, cell)


@dataclass
class ConstantResponder(PlayerF):
    sign: Sign = Sign.PLUS

    def respond(self, state: SignGameState, cell: int) -> Sign:
        return self.sign


class ScriptedResponder(PlayerF):
    def __init__(self, signs: Sequence["Sign | str"]) -> None:
        self.signs = [Sign.parse(s) for s in signs]

    def respond(self, state: SignGameState, cell: int) -> Sign:
        return self.signs[len(state.history)]


def _checked(state: SignGameState, cell: Optional[int]) -> Optional[int]:
    if cell is not None and not state.is_empty(cell):
        raise IllegalMoveError(f"player A chose non-empty cell {cell}")
    return cell


def play_out(player_a: PlayerA, num_cells: int, rounds: int, responder: PlayerF) -> SignGameState:
    state = new_game(num_cells, rounds)
    while not state.is_over:
        cell = _checked(state, player_a.choose(state))
        if cell is None:
            break
        state = place(state, cell, responder.respond(state, cell))
    return state


def worst_case_preserved(player_a: PlayerA, num_cells: int, rounds: int) -> Tuple[int, Tuple[Sign, ...]]:
    """Minimum preserved count over every sequence of F responses, with a witness."""

    def search(state: SignGameState) -> Tuple[int, Tuple[Sign, ...]]:
        cell = None if state.is_over else _checked(state, player_a.choose(state))
        if cell is None:
            return preserved_count(state), ()
        best: Tuple[int, Tuple[Sign, ...]] | None = None
        for sign in (Sign.PLUS, Sign.MINUS):
            value, witness = search(place(state, cell, sign))
            if best is None or value < best[0]:
                best = (value, (sign,) + witness)
        assert best is not None
        return best

    return search(new_game(num_cells, rounds))


def binary_search_strategy(t: int) -> BinarySearchStrategy:
    return BinarySearchStrategy(t)


def tensor_strategy(base: PlayerA, t: int) -> TensorStrategy:
    return TensorStrategy(base, t)
