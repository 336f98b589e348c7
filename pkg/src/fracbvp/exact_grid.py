"""Exact grid coordinates, signed log-Gamma and the falling factorial.

Grid coordinates and fractional orders are :class:`fractions.Fraction`
values so that Gamma-pole detection is an exact test. Only function values
are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

import numpy as np

from .errors import DomainError, InsufficientGrid, PoleError

RationalLike = Union[Fraction, int, str]

_POLE_TOL = 1e-12


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a normalized Fraction.

    Floats are rejected: a float grid coordinate would defeat exact pole
    detection.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse the wire form ``"p/q"`` or ``"p"``."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        if sep:
            q = Fraction(int(num), int(den))
        else:
            q = Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational of the form p/q: {text!r}") from exc
    return q


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def is_nonpositive_integer(q: Fraction) -> bool:
    q = as_rational(q)
    return q.denominator == 1 and q.numerator <= 0


class SignedLogGamma(NamedTuple):
    """``ln|Γ(x)|`` together with the sign of ``Γ(x)``."""

    log_abs: float
    sign: int

    @property
    def value(self) -> float:
        try:
            return self.sign * math.exp(self.log_abs)
        except OverflowError:
            return self.sign * math.inf


def signed_log_gamma(x: float) -> SignedLogGamma:
    """Return ``(ln|Γ(x)|, sign Γ(x))`` for real ``x`` off the poles.

    For negative non-integer ``x`` the sign is ``(-1)**ceil(-x)``.
    """
    x = float(x)
    if x <= 0.0 and abs(x - round(x)) <= _POLE_TOL:
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x > 0.0:
        sign = 1
    else:
        sign = -1 if math.ceil(-x) % 2 else 1
    return SignedLogGamma(math.lgamma(x), sign)


def _int_ratio(t: Fraction, v: int) -> Fraction:
    """Exact ``Γ(t+1)/Γ(t+1-v)`` for integer ``v``, as a rational function of t."""
    if v >= 0:
        out = Fraction(1)
        for j in range(v):
            out *= t - j
        return out
    den = Fraction(1)
    for j in range(1, -v + 1):
        den *= t + j
    if den == 0:
        raise PoleError(f"{t}^({v}) has a pole in the numerator Gamma")
    return 1 / den


def falling_factorial(t: RationalLike, v: RationalLike) -> float:
    """Generalized falling factorial ``t^(v) = Γ(t+1)/Γ(t+1-v)``.

    Conventions:

    * integer ``v`` uses the exact (reciprocal) product, which also covers
      the case where both Gamma arguments are poles; ``t^(0) = 1``;
    * if ``t+1-v`` is a pole and ``t+1`` is not, the value is 0;
    * if ``t+1`` is a pole and ``t+1-v`` is not, :class:`PoleError`.
    """
    t = as_rational(t)
    v = as_rational(v)
    if v.denominator == 1:
        return float(_int_ratio(t, v.numerator))
    top = t + 1
    bottom = t + 1 - v
    # v is not an integer, so at most one of top/bottom is an integer
    if is_nonpositive_integer(bottom):
        return 0.0
    if is_nonpositive_integer(top):
        raise PoleError(f"{t}^({v}): Gamma({top}) is a pole")
    num = signed_log_gamma(float(top))
    den = signed_log_gamma(float(bottom))
    return num.sign * den.sign * math.exp(num.log_abs - den.log_abs)


@dataclass(frozen=True)
class Grid:
    """The finite arithmetic grid ``{base, base+1, ..., base+length-1}``."""

    base: Fraction
    length: int

    def __post_init__(self):
        object.__setattr__(self, "base", as_rational(self.base))
        if int(self.length) != self.length or self.length < 1:
            raise InsufficientGrid(f"grid length must be a positive integer, got {self.length}")
        object.__setattr__(self, "length", int(self.length))

    def point(self, k: int) -> Fraction:
        if not 0 <= k < self.length:
            raise IndexError(k)
        return self.base + k

    @property
    def points(self) -> list[Fraction]:
        return [self.base + k for k in range(self.length)]

    @property
    def last(self) -> Fraction:
        return self.base + self.length - 1

    def index(self, t: RationalLike) -> int:
        """Index of the exact point ``t``; ``ValueError`` if ``t`` is off-grid."""
        k = as_rational(t) - self.base
        if k.denominator != 1 or not 0 <= k < self.length:
            raise ValueError(f"{t} is not a point of {self}")
        return int(k)

    def __str__(self) -> str:
        return f"[{format_rational(self.base)}, {format_rational(self.last)}]"


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Finite real values attached to the points of a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if vals.shape[0] != self.grid.length:
            raise DomainError(
                f"{vals.shape[0]} values for a grid of length {self.grid.length}"
            )
        if not np.all(np.isfinite(vals)):
            raise DomainError("grid function values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def sample(cls, func, base: RationalLike, length: int) -> "GridFunction":
        """Evaluate ``func`` at the exact points of a grid."""
        grid = Grid(as_rational(base), length)
        return cls(grid, [func(t) for t in grid.points])

    @classmethod
    def constant(cls, c: float, base: RationalLike, length: int) -> "GridFunction":
        return cls(Grid(as_rational(base), length), np.full(length, float(c)))

    def __call__(self, t: RationalLike) -> float:
        return float(self.values[self.grid.index(t)])

    def __len__(self) -> int:
        return self.grid.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridFunction):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    def __mul__(self, c: float) -> "GridFunction":
        return GridFunction(self.grid, self.values * float(c))

    __rmul__ = __mul__
