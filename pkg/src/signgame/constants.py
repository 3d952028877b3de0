from __future__ import annotations

import math

from pydantic import BaseModel

# opt(255, 8) = 8 tensorized gives opt(255^t, 8^t) >= (9/2)^t
ADMISSIBLE_ALPHA = math.log(8) / math.log(255)
ADMISSIBLE_BETA = math.log(9 / 2) / math.log(255)
ADMISSIBLE_C0 = 2 / 9


class DerivedConstants(BaseModel):
    alpha: float
    beta: float
    c: float
    # (beta + 1) / (alpha + 2 beta + 1); disagrees with c, reported only
    c_alternative: float
    exceeds_half: bool


def derived_constants(alpha: float, beta: float) -> float:
    """Calibration-error exponent c = (2 beta + 1) / (alpha + 2 beta + 2)."""
    return (2 * beta + 1) / (alpha + 2 * beta + 2)


def derived_constants_record(alpha: float, beta: float) -> DerivedConstants:
    return DerivedConstants(
        alpha=alpha,
        beta=beta,
        c=derived_constants(alpha, beta),
        c_alternative=(beta + 1) / (alpha + 2 * beta + 1),
        exceeds_half=beta > alpha / 2,
    )


def tensor_lower_bound(base_value: float, t: int) -> float:
    """opt(a^t, b^t) >= ((c + 1) / 2)^t given opt(a, b) >= c >= 1."""
    return ((base_value + 1) / 2) ** t


def admissibility_lower_bound(
    num_cells: int,
    rounds: int,
    *,
    base_cells: int = 255,
    base_rounds: int = 8,
    base_value: int = 8,
) -> float:
    """Lower bound on opt(k, r) from monotonicity plus tensorization of a base game.

    Uses the largest t with base_cells^t <= k and base_rounds^t <= r; t = 0
    gives the trivial bound opt(k, r) >= 1.
    """
    if num_cells < 1 or rounds < 1:
        return 0.0
    t = 0
    while base_cells ** (t + 1) <= num_cells and base_rounds ** (t + 1) <= rounds:
        t += 1
    return tensor_lower_bound(base_value, t)
