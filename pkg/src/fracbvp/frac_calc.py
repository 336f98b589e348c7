"""Delta forward differences, fractional sums and fractional differences.

Every operator maps a :class:`GridFunction` on ``N_a`` to a new
:class:`GridFunction` whose base is shifted exactly (in rational arithmetic):

* ``forward_difference`` keeps the base and drops ``order`` points;
* ``fractional_sum`` of order ``v`` moves the base to ``a + v``;
* ``fractional_difference`` of order ``v`` moves it to ``a + N - v``
  with ``N = ceil(v)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, InsufficientGrid
from .exact_grid import Grid, GridFunction, RationalLike, as_rational, falling_factorial


@dataclass(frozen=True)
class FracOrder:
    """A positive order ``v`` with its integer ceiling ``N`` (``N-1 < v <= N``)."""

    v: Fraction
    N: int

    @classmethod
    def of(cls, v: RationalLike) -> "FracOrder":
        v = as_rational(v)
        if v <= 0:
            raise DomainError(f"order must be positive, got {v}")
        return cls(v, math.ceil(v))

    def __post_init__(self):
        if not (0 <= self.N - 1 < self.v <= self.N):
            raise DomainError(f"inconsistent order: v={self.v}, N={self.N}")


def forward_difference(f: GridFunction, order: int = 1) -> GridFunction:
    """Iterated forward difference ``Δ^order f``; same base, ``order`` fewer points."""
    if order < 0:
        raise DomainError(f"difference order must be nonnegative, got {order}")
    if f.grid.length <= order:
        raise InsufficientGrid(
            f"need more than {order} points for Δ^{order}, grid has {f.grid.length}"
        )
    vals = np.diff(f.values, n=order) if order else f.values
    return GridFunction(Grid(f.grid.base, f.grid.length - order), vals)


@lru_cache(maxsize=256)
def sum_kernel(v: Fraction, length: int) -> np.ndarray:
    """Lower-triangular matrix of the order-``v`` fractional sum.

    Row ``k`` holds the weights of ``f(a), ..., f(a+k)`` in the sum at
    ``t = a + v + k``; the weight of ``f(a+j)`` is
    ``(t - s - 1)^(v-1) / Γ(v)`` with ``t - s - 1 = v + k - j - 1``,
    independent of the base ``a``.
    """
    inv_gamma = 1.0 / math.gamma(float(v))
    diag = [falling_factorial(v - 1 + m, v - 1) * inv_gamma for m in range(length)]
    mat = np.zeros((length, length))
    for k in range(length):
        for j in range(k + 1):
            mat[k, j] = diag[k - j]
    mat.flags.writeable = False
    return mat


def fractional_sum(f: GridFunction, v: RationalLike) -> GridFunction:
    """The ``v``-th fractional sum, defined on ``N_{a+v}`` with the same length.

    The value at ``t = a + v + k`` is
    ``(1/Γ(v)) Σ_{s=a}^{t-v} (t-s-1)^(v-1) f(s)``.
    """
    v = as_rational(v)
    if v <= 0:
        raise DomainError(f"fractional sum order must be positive, got {v}")
    n = f.grid.length
    vals = sum_kernel(v, n) @ f.values
    return GridFunction(Grid(f.grid.base + v, n), vals)


def fractional_difference(f: GridFunction, v: RationalLike) -> GridFunction:
    """``Δ^v_a f = Δ^N Δ_a^{-(N-v)} f``, defined on ``N_{a+N-v}``.

    At integer ``v`` the inner sum is the identity and this is the plain
    ``N``-th forward difference.
    """
    order = FracOrder.of(v)
    if f.grid.length <= order.N:
        raise InsufficientGrid(
            f"Δ^{order.v} needs more than {order.N} points, grid has {f.grid.length}"
        )
    inner = f if order.v == order.N else fractional_sum(f, order.N - order.v)
    return forward_difference(inner, order.N)
