from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from calibration.errors import ConfigurationError, OffGridError

Number = int | float | Fraction

FLOAT_GRID_TOLERANCE = 1e-9


def as_fraction(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


def round_half_down(x: Fraction) -> int:
    """Nearest integer to x, ties toward the smaller one."""
    q, rem = divmod(x.numerator, x.denominator)
    return q + 1 if 2 * rem > x.denominator else q


@dataclass(frozen=True)
class OpenInterval:
    lo: Fraction
    hi: Fraction

    @classmethod
    def of(cls, lo: Number, hi: Number) -> "OpenInterval":
        return cls(as_fraction(lo), as_fraction(hi))

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Number) -> bool:
        return self.lo < as_fraction(x) < self.hi


@dataclass(frozen=True)
class PredictionGrid:
    """The values {0, 1/n, ..., 1}; a value is addressed by its integer numerator."""

    resolution: int

    def __post_init__(self) -> None:
        if self.resolution < 1:
            raise ConfigurationError(f"grid resolution must be positive, got {self.resolution}")

    @property
    def size(self) -> int:
        return self.resolution + 1

    def value(self, index: int) -> Fraction:
        return Fraction(index, self.resolution)

    def index_of(self, p: Number) -> int:
        n = self.resolution
        if isinstance(p, float):
            # binary floats like 0.3 are never exact multiples of 1/10
            scaled_float = p * n
            index = round(scaled_float)
            if abs(scaled_float - index) > FLOAT_GRID_TOLERANCE * max(1, n) or not 0 <= index <= n:
                raise OffGridError(f"{p} is not a multiple of 1/{n} in [0, 1]")
            return index
        scaled = as_fraction(p) * n
        if scaled.denominator != 1 or not 0 <= scaled <= n:
            raise OffGridError(f"{p} is not a multiple of 1/{n} in [0, 1]")
        return int(scaled)

    def check_index(self, index: int) -> int:
        if not 0 <= index <= self.resolution:
            raise OffGridError(f"grid index {index} outside 0..{self.resolution}")
        return index

    def nearest_index(self, x: Number) -> int:
        index = round_half_down(as_fraction(x) * self.resolution)
        return min(max(index, 0), self.resolution)

    def indices_inside(self, interval: OpenInterval) -> range:
        n = self.resolution
        lo = max(interval.lo * n, Fraction(-1))
        hi = min(interval.hi * n, Fraction(n + 1))
        first = (lo.numerator // lo.denominator) + 1
        last = -((-hi.numerator) // hi.denominator) - 1
        return range(max(first, 0), min(last, n) + 1)


def resolve_size(token: str | int, horizon: int) -> int:
    """Parse a positive size; the token ``cbrt`` means round(T^(1/3))."""
    if isinstance(token, int):
        value = token
    elif token.strip().lower() == "cbrt":
        value = max(1, round(horizon ** (1 / 3)))
        for exact in (value - 1, value + 1):
            if exact >= 1 and exact**3 == horizon:
                value = exact
    else:
        try:
            value = int(token)
        except ValueError as exc:
            raise ConfigurationError(f"expected a positive integer or 'cbrt', got {token!r}") from exc
    if value < 1:
        raise ConfigurationError(f"size must be positive, got {value}")
    return value
