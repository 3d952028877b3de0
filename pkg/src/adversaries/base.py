from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Optional, Tuple

import numpy as np

from engine.context import GameContext

if TYPE_CHECKING:
    from adversaries.sidestep import SchemeParams


@dataclass(frozen=True)
class Commit:
    bit: int
    announced_bias: Optional[float] = None


class Adversary(ABC):
    """Bit generator. `play` is resumed once per step and may read the context,
    which at that point holds exactly the steps before the one being committed."""

    name: str = "adversary"
    announces_bias: bool = True
    adaptive: bool = True

    def declared_schedule(self, horizon: int) -> Optional[np.ndarray]:
        """Per-step bias schedule fixed before the game starts, if the scheme has one."""
        return None

    @property
    def scheme_params(self) -> Optional["SchemeParams"]:
        return None

    @abstractmethod
    def play(self, ctx: GameContext) -> Iterator[Commit]:
        ...


class ObliviousAdversary(Adversary):
    """Draws the whole bit sequence up front from a fixed bias schedule."""

    adaptive = False

    @abstractmethod
    def schedule(self, horizon: int) -> np.ndarray:
        ...

    def declared_schedule(self, horizon: int) -> Optional[np.ndarray]:
        return self.schedule(horizon)

    def draw_all(self, horizon: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        biases = self.schedule(horizon)
        bits = (rng.random(horizon) < biases).astype(np.int64)
        return bits, biases

    def play(self, ctx: GameContext) -> Iterator[Commit]:
        bits, biases = self.draw_all(ctx.horizon, ctx.rng)
        for bit, bias in zip(bits.tolist(), biases.tolist()):
            yield Commit(bit, bias)
