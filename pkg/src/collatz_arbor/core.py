"""Exact integer arithmetic: residue decomposition and the base sequences Z, W.

Everything here is plain ``int`` arithmetic (arbitrary precision); the terms of
Z grow like 4^n / 3, so fixed-width types are out of the question.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InconsistencyError

__all__ = ["OddInteger", "decompose", "z_term", "w_term", "BaseSequences", "base_sequences"]


def _require_odd_positive(x: int, what: str = "x") -> None:
    if not isinstance(x, int) or isinstance(x, bool):
        raise TypeError(f"{what} must be an int, got {type(x).__name__}")
    if x < 1:
        raise ValueError(f"{what} must be positive, got {x}")
    if x % 2 == 0:
        raise ValueError(f"{what} must be odd, got {x}")


def _require_index(n: int, what: str = "n") -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"{what} must be an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"{what} must be >= 1, got {n}")


@dataclass(frozen=True)
class OddInteger:
    """An odd positive integer x split as x = 3*multiple + residue.

    The parity of the multiple is forced by oddness: residue 1 gives an even
    multiple, residues 0 and 2 give odd multiples (0, for x = 1, counts even).
    """

    value: int
    residue: int
    multiple: int

    def __post_init__(self) -> None:
        _require_odd_positive(self.value, "value")
        if self.residue != self.value % 3:
            raise ValueError(f"residue {self.residue} is not {self.value} mod 3")
        if 3 * self.multiple + self.residue != self.value:
            raise ValueError(
                f"decomposition broken: 3*{self.multiple} + {self.residue} != {self.value}"
            )
        want_even = self.residue == 1
        if (self.multiple % 2 == 0) != want_even:
            raise InconsistencyError(
                f"multiple {self.multiple} has impossible parity for residue {self.residue}"
            )


def decompose(x: int) -> OddInteger:
    """Split an odd positive integer into (value, residue mod 3, multiple)."""
    _require_odd_positive(x)
    r = x % 3
    return OddInteger(x, r, (x - r) // 3)


# Memo caches, 1-indexed with a [0] sentinel.  Both sequences are cheap to
# recompute, so there is deliberately no persistent cache.
_Z: list[int] = [0]
_W: list[int] = [0]


def z_term(n: int) -> int:
    """n-th term of Z: (2^(2n) - 1) / 3, equal to 1 + 4 + ... + 4^(n-1).

    The closed form and the geometric sum are both evaluated and must agree;
    a mismatch raises InconsistencyError.
    """
    _require_index(n)
    while len(_Z) <= n:
        k = len(_Z)
        numer = (1 << (2 * k)) - 1
        if numer % 3:
            raise InconsistencyError(f"2^{2 * k} - 1 not divisible by 3")
        closed = numer // 3
        summed = _Z[k - 1] + (1 << (2 * (k - 1)))
        if closed != summed:
            raise InconsistencyError(f"z_{k}: closed form {closed} != geometric sum {summed}")
        _Z.append(closed)
    return _Z[n]


def w_term(n: int) -> int:
    """n-th term of W: the multiple of z_n, i.e. (z_n - z_n mod 3) / 3.

    Evaluated by the piecewise sum selected by n mod 3:

        n == 0 (mod 3):  7 * sum 4^(3(i-1))      for i = 1 .. n/3
        n == 1 (mod 3):  7 * sum 4^(3(i-1)+1)    for i = 1 .. (n-1)/3
        n == 2 (mod 3):  1 + 7 * sum 4^(3(i-1)+2) for i = 1 .. (n-2)/3

    and cross-checked against the direct multiple of z_n; a mismatch raises
    InconsistencyError.
    """
    _require_index(n)
    while len(_W) <= n:
        k = len(_W)
        r = k % 3
        if r == 0:
            terms = k // 3
            offset, base = 0, 0
        elif r == 1:
            terms = (k - 1) // 3
            offset, base = 2, 0
        else:
            terms = (k - 2) // 3
            offset, base = 4, 1
        acc = 0
        for i in range(1, terms + 1):
            acc += 1 << (6 * (i - 1) + offset)
        piecewise = base + 7 * acc
        direct = decompose(z_term(k)).multiple
        if piecewise != direct:
            raise InconsistencyError(f"w_{k}: piecewise form {piecewise} != (z_{k} - r) / 3 {direct}")
        _W.append(piecewise)
    return _W[n]


@dataclass(frozen=True)
class BaseSequences:
    """Materialized prefixes of Z and W, keyed by index n >= 1."""

    z: dict[int, int]
    w: dict[int, int]


def base_sequences(count: int) -> BaseSequences:
    """First `count` terms of both base sequences."""
    _require_index(count, "count")
    return BaseSequences(
        z={n: z_term(n) for n in range(1, count + 1)},
        w={n: w_term(n) for n in range(1, count + 1)},
    )
