from __future__ import annotations

import numpy as np

from adversaries.base import ObliviousAdversary
from calibration.errors import ConfigurationError


class IidBernoulli(ObliviousAdversary):
    def __init__(self, p: float) -> None:
        if not 0.0 <= p <= 1.0:
            raise ConfigurationError(f"iid bias must lie in [0, 1], got {p}")
        self.p = p
        self.name = f"iid:{p:g}"

    def schedule(self, horizon: int) -> np.ndarray:
        return np.full(horizon, self.p, dtype=float)


class EpochLadder(ObliviousAdversary):
    """k epochs of T/k steps; epoch i samples Ber(i/k). When k does not divide T
    the epochs take floor or ceil of T/k steps, so every bias i/k appears once T >= k."""

    def __init__(self, k: int) -> None:
        if k < 1:
            raise ConfigurationError(f"ladder needs k >= 1, got {k}")
        self.k = k
        self.name = f"ladder:{k}"

    def schedule(self, horizon: int) -> np.ndarray:
        epoch = (np.arange(horizon) * self.k) // max(horizon, 1) + 1
        return epoch / self.k


def iid_bernoulli(p: float) -> IidBernoulli:
    return IidBernoulli(p)


def epoch_ladder(k: int) -> EpochLadder:
    return EpochLadder(k)
