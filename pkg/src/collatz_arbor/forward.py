"""Forward accelerated Collatz map and trajectory generation.

The map sends an odd x to (3x + 1) / 2^a with a the full power of two in
3x + 1, so iterates stay odd.  This module is the independent oracle against
which the inverse construction is validated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .core import _require_odd_positive

__all__ = [
    "valuation2",
    "f_step",
    "trajectory",
    "trajectory_summary",
    "TrajectoryRecord",
    "TrajectorySummary",
    "DEFAULT_MAX_STEPS",
]

# Far above known odd-step counts for desk-scale inputs; guards against
# nontermination without being hit in practice.
DEFAULT_MAX_STEPS = 10_000


def valuation2(m: int) -> int:
    """Largest a with 2^a dividing m.  Rejects odd or nonpositive input."""
    if not isinstance(m, int) or isinstance(m, bool):
        raise TypeError(f"m must be an int, got {type(m).__name__}")
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if m % 2:
        raise ValueError(f"m must be even, got {m}")
    # Trailing-zero count; this is the hot loop of every coverage sweep.
    return (m & -m).bit_length() - 1


def f_step(x: int) -> tuple[int, int]:
    """One application: returns ((3x + 1) / 2^a, a) with the quotient odd."""
    _require_odd_positive(x)
    t = 3 * x + 1
    a = (t & -t).bit_length() - 1
    return t >> a, a


@dataclass(frozen=True)
class TrajectoryRecord:
    """A forward orbit x0, x1, ..., xk with the exponent spent at each step.

    exponents[i] is the power of two divided out going from values[i] to
    values[i + 1]; length k counts applications of the map, so the identity
    orbit of 1 has length 0.
    """

    start: int
    values: tuple[int, ...]
    exponents: tuple[int, ...]
    converged: bool

    def __post_init__(self) -> None:
        if not self.values or self.values[0] != self.start:
            raise ValueError("values must begin at start")
        if len(self.values) != len(self.exponents) + 1:
            raise ValueError("need exactly one exponent per step")
        if self.converged and self.values[-1] != 1:
            raise ValueError("converged orbit must end at 1")

    @property
    def length(self) -> int:
        return len(self.exponents)

    def steps(self) -> Iterator[tuple[int, int]]:
        """Pairs (value, exponent applied to it), one per step."""
        return zip(self.values, self.exponents)


@dataclass(frozen=True)
class TrajectorySummary:
    """Orbit statistics without the orbit itself, for bulk sweeps."""

    start: int
    length: int
    peak: int
    converged: bool


def trajectory(x0: int, max_steps: int = DEFAULT_MAX_STEPS) -> TrajectoryRecord:
    """Iterate the map from x0 until 1 is reached or the budget runs out.

    Budget exhaustion is a normal outcome (converged=False), not an error.
    """
    _require_odd_positive(x0, "x0")
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    values = [x0]
    exponents: list[int] = []
    x = x0
    while x != 1 and len(exponents) < max_steps:
        x, a = f_step(x)
        values.append(x)
        exponents.append(a)
    return TrajectoryRecord(x0, tuple(values), tuple(exponents), x == 1)


def trajectory_summary(x0: int, max_steps: int = DEFAULT_MAX_STEPS) -> TrajectorySummary:
    """Like trajectory() but retains only (length, peak); O(1) memory."""
    _require_odd_positive(x0, "x0")
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    x = x0
    peak = x0
    steps = 0
    while x != 1 and steps < max_steps:
        t = 3 * x + 1
        x = t >> ((t & -t).bit_length() - 1)
        if x > peak:
            peak = x
        steps += 1
    return TrajectorySummary(x0, steps, peak, x == 1)
