from __future__ import annotations

import math
from typing import Iterator, Optional

import numpy as np
import structlog

from adversaries.base import Adversary, Commit
from adversaries.sidestep import SchemeParams
from calibration.errors import ConfigurationError
from engine.context import EarlyStopInfo, GameContext

log = structlog.get_logger(__name__)


class EarlyStoppingWrapper(Adversary):
    """Runs `inner` until CalErr first reaches B, then emits a constant tail.

    The tail is all ones when the positive parts of the biases sum to at least
    the negative parts, all zeros otherwise; either way that part can only grow,
    so CalErr(T) >= B/2. An inner scheme that ends early without triggering is
    padded by the same rule. Exactly T bits are always emitted.
    """

    def __init__(self, inner: Adversary, B: float, horizon: int) -> None:
        if not B > 0:
            raise ConfigurationError(f"early-stopping threshold must be positive, got {B}")
        self.inner = inner
        self.B = B
        self.horizon = horizon
        self.name = f"{inner.name}+earlystop"
        self.announces_bias = inner.announces_bias

    @property
    def scheme_params(self) -> Optional[SchemeParams]:
        return self.inner.scheme_params

    def declared_schedule(self, horizon: int) -> Optional[np.ndarray]:
        return self.inner.declared_schedule(horizon)

    def _triggered(self, ctx: GameContext) -> bool:
        if math.isinf(self.B):
            return False
        return ctx.ledger.exact_calerr >= self.B

    def play(self, ctx: GameContext) -> Iterator[Commit]:
        horizon = min(self.horizon, ctx.horizon)
        stream = self.inner.play(ctx)
        triggered = False
        while True:
            if self._triggered(ctx):
                triggered = True
                break
            if ctx.step >= horizon:
                # let the inner scheme finish its bookkeeping
                next(stream, None)
                break
            commit = next(stream, None)
            if commit is None:
                break
            yield commit
        stream.close()

        decision_step = ctx.step
        ctx.scheme_steps = decision_step
        positive, negative = ctx.ledger.scaled_parts()
        n = ctx.grid.resolution
        tail_bit = None if decision_step >= horizon else int(positive >= negative)
        ctx.early_stop = EarlyStopInfo(
            triggered=triggered,
            decision_step=decision_step,
            positive_part=positive / n,
            negative_part=negative / n,
            tail_bit=tail_bit,
        )
        if triggered:
            log.debug("early_stop", step=decision_step, calerr=ctx.ledger.calerr, tail_bit=tail_bit)
        if tail_bit is None:
            return
        for _ in range(horizon - decision_step):
            yield Commit(tail_bit, float(tail_bit))


def early_stopping_wrapper(inner: Adversary, B: float, T: int) -> EarlyStoppingWrapper:
    return EarlyStoppingWrapper(inner, B, T)
