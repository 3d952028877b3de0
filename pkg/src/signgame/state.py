from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, Sequence, Tuple

from calibration.errors import IllegalMoveError


class Sign(str, Enum):
    PLUS = "+"
    MINUS = "-"

    @classmethod
    def parse(cls, value: "str | Sign") -> "Sign":
        try:
            return cls(value)
        except ValueError as exc:
            raise IllegalMoveError(f"unknown sign {value!r}; expected '+' or '-'") from exc


Move = Tuple[int, Sign]


def _bit(cell: int) -> int:
    return 1 << (cell - 1)


def _cells(mask: int) -> FrozenSet[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class SignGameState:
    """SP(k, r) position. Cell c (1-based) is bit c-1 of each mask."""

    num_cells: int
    rounds_left: int
    empty_mask: int
    plus_mask: int = 0
    minus_mask: int = 0
    history: Tuple[Move, ...] = ()

    @property
    def full_mask(self) -> int:
        return (1 << self.num_cells) - 1

    @property
    def empty_cells(self) -> FrozenSet[int]:
        return _cells(self.empty_mask)

    @property
    def alive_plus(self) -> FrozenSet[int]:
        return _cells(self.plus_mask)

    @property
    def alive_minus(self) -> FrozenSet[int]:
        return _cells(self.minus_mask)

    @property
    def dead_count(self) -> int:
        return len(self.history) - (self.plus_mask | self.minus_mask).bit_count()

    @property
    def key(self) -> Tuple[int, int, int, int]:
        return self.empty_mask, self.plus_mask, self.minus_mask, self.rounds_left

    @property
    def is_over(self) -> bool:
        return self.rounds_left == 0 or self.empty_mask == 0

    def is_empty(self, cell: int) -> bool:
        return 1 <= cell <= self.num_cells and bool(self.empty_mask & _bit(cell))


def new_game(num_cells: int, rounds: int) -> SignGameState:
    if num_cells < 1 or rounds < 0:
        raise IllegalMoveError(f"SP({num_cells}, {rounds}) is not a valid game")
    return SignGameState(num_cells=num_cells, rounds_left=rounds, empty_mask=(1 << num_cells) - 1)


def place_masks(empty: int, plus: int, minus: int, full: int, cell: int, sign: Sign) -> Tuple[int, int, int]:
    bit = _bit(cell)
    below = bit - 1
    above = full & ~(bit | below)
    # a later sign at `cell` kills every alive "+" to its right and "-" to its left
    plus &= below
    minus &= above
    if sign is Sign.PLUS:
        plus |= bit
    else:
        minus |= bit
    return empty & ~bit, plus, minus


def place(state: SignGameState, cell: int, sign: "Sign | str") -> SignGameState:
    sign = Sign.parse(sign)
    if state.rounds_left < 1:
        raise IllegalMoveError("no rounds left")
    if not state.is_empty(cell):
        raise IllegalMoveError(f"cell {cell} is not an empty cell of SP({state.num_cells}, ·)")
    empty, plus, minus = place_masks(
        state.empty_mask, state.plus_mask, state.minus_mask, state.full_mask, cell, sign
    )
    return SignGameState(
        num_cells=state.num_cells,
        rounds_left=state.rounds_left - 1,
        empty_mask=empty,
        plus_mask=plus,
        minus_mask=minus,
        history=state.history + ((cell, sign),),
    )


def preserved_count(state: SignGameState) -> int:
    return (state.plus_mask | state.minus_mask).bit_count()


def preserved_moves(history: Sequence[Move]) -> list[Move]:
    """Brute-force rescan of the removal rule over a full history."""
    kept = []
    for i, (cell, sign) in enumerate(history):
        later = [c for c, _ in history[i + 1 :]]
        if Sign(sign) is Sign.PLUS:
            ok = all(c > cell for c in later)
        else:
            ok = all(c < cell for c in later)
        if ok:
            kept.append((cell, Sign(sign)))
    return kept


def rescan_preserved(history: Sequence[Move]) -> int:
    return len(preserved_moves(history))


def replay(num_cells: int, rounds: int, history: Iterable[Move]) -> SignGameState:
    state = new_game(num_cells, rounds)
    for cell, sign in history:
        state = place(state, cell, sign)
    return state
