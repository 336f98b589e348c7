"""Green's function of the two-point problem and its derived constants.

For ``1 < v < 2`` and a horizon ``b`` the kernel ``G(t, s)`` lives on
``t ∈ [v-2, v+b]`` (``b+3`` points) and ``s ∈ [0, b]``::

    G(t, s) = t^(v-1) (v+b-s-2)^(v-2) / den + [s <= t-v] (t-s-1)^(v-1)
    den     = Γ(v-1) - (v+b-1)^(v-2)

The seam ``s = t - v`` belongs to the first branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DegenerateProblem, DomainError
from .exact_grid import (
    GridFunction,
    RationalLike,
    as_rational,
    falling_factorial,
    format_rational,
)

DEGENERACY_TOL = 1e-9
BOUNDS_TOL = 1e-10


@dataclass(frozen=True)
class BvpShape:
    """Order ``v`` in ``(1, 2]`` and integer horizon ``b >= 1``.

    ``v = 2`` is accepted so that :func:`constant_D` can be evaluated there,
    but every Green's-function operation rejects it as degenerate.
    """

    v: Fraction
    b: int

    def __post_init__(self):
        object.__setattr__(self, "v", as_rational(self.v))
        if not 1 < self.v <= 2:
            raise DomainError(f"order v must lie in (1, 2), got {self.v}")
        if int(self.b) != self.b or self.b < 1:
            raise DomainError(f"horizon b must be a positive integer, got {self.b}")
        object.__setattr__(self, "b", int(self.b))

    @property
    def denominator(self) -> float:
        """``Γ(v-1) - (v+b-1)^(v-2)``; zero at ``v = 2``."""
        v = self.v
        return math.gamma(float(v - 1)) - falling_factorial(v + self.b - 1, v - 2)

    def require_nondegenerate(self) -> float:
        den = self.denominator
        if abs(den) <= DEGENERACY_TOL:
            raise DegenerateProblem(
                f"Green's function denominator {den:.3e} vanishes for v={self.v}, b={self.b}"
            )
        return den

    @property
    def t_points(self) -> list[Fraction]:
        """Solution grid ``[v-2, v+b]``."""
        return [self.v - 2 + k for k in range(self.b + 3)]

    def __str__(self) -> str:
        return f"v={format_rational(self.v)}, b={self.b}"


def green_value(shape: BvpShape, t: RationalLike, s: int) -> float:
    """``G(t, s)`` for ``t`` on ``[v-2, v+b]`` and integer ``0 <= s <= b``."""
    v, b = shape.v, shape.b
    t = as_rational(t)
    k = t - (v - 2)
    if k.denominator != 1 or not 0 <= k <= b + 2:
        raise DomainError(f"t={t} is not on the grid [v-2, v+b]")
    if int(s) != s or not 0 <= s <= b:
        raise DomainError(f"s={s} is not in [0, {b}]")
    den = shape.require_nondegenerate()
    out = falling_factorial(t, v - 1) * falling_factorial(v + b - s - 2, v - 2) / den
    if s <= t - v:
        out += falling_factorial(t - s - 1, v - 1)
    return out


@lru_cache(maxsize=128)
def _green_matrix(shape: BvpShape) -> np.ndarray:
    mat = np.array(
        [[green_value(shape, t, s) for s in range(shape.b + 1)] for t in shape.t_points]
    )
    mat.flags.writeable = False
    return mat


def green_matrix(shape: BvpShape) -> np.ndarray:
    """The ``(b+3) x (b+1)`` table of ``G``; row ``k`` is ``t = v-2+k``."""
    shape.require_nondegenerate()
    return _green_matrix(shape)


def _d_terms(shape: BvpShape) -> np.ndarray:
    v, b = shape.v, shape.b
    den = shape.denominator
    return np.array(
        [1.0 + den / falling_factorial(v + b - s - 2, v - 2) for s in range(b + 1)]
    )


def constant_D_scan(shape: BvpShape) -> float:
    """Brute-force maximum over ``s`` of ``1 + den / (v+b-s-2)^(v-2)``."""
    return float(_d_terms(shape).max())


def constant_D_closed(shape: BvpShape) -> float:
    """The ``s = 0`` instance ``1 + den / (v+b-2)^(v-2)``."""
    v, b = shape.v, shape.b
    return 1.0 + shape.denominator / falling_factorial(v + b - 2, v - 2)


def constant_D(shape: BvpShape) -> float:
    """The constant ``D``; the scan maximum must coincide with the closed form."""
    scan = constant_D_scan(shape)
    closed = constant_D_closed(shape)
    if abs(scan - closed) > 1e-12 * max(1.0, abs(closed)):
        raise ArithmeticError(f"D scan {scan!r} disagrees with closed form {closed!r}")
    return closed


def cone_coefficient(shape: BvpShape) -> float:
    """``Γ(v) / (D (v+b)^(v-1))``, the interior lower-bound factor of the cone."""
    v = shape.v
    return math.gamma(float(v)) / (constant_D(shape) * falling_factorial(v + shape.b, v - 1))


def _h_interior(shape: BvpShape, h: GridFunction) -> np.ndarray:
    """``h(s+v-1)`` for ``s = 0..b`` from ``h`` on ``[v-1, v+b]``."""
    if h.grid.base != shape.v - 1 or h.grid.length < shape.b + 1:
        raise DomainError(f"h must be defined on [v-1, v+b] = {h.grid}")
    return np.asarray(h.values[: shape.b + 1])


def green_sums(shape: BvpShape, h: GridFunction) -> np.ndarray:
    """``(1/Γ(v)) Σ_s G(t,s) h(s+v-1)`` for every ``t`` in ``[v-2, v+b]``."""
    g = green_matrix(shape)
    return g @ _h_interior(shape, h) / math.gamma(float(shape.v))


def sigma(shape: BvpShape, h: GridFunction) -> float:
    """Maximum of the weighted Green sums over ``t ∈ [v-1, v+b]``."""
    return float(green_sums(shape, h)[1:].max())


def tau(shape: BvpShape, h: GridFunction) -> float:
    """Minimum of the weighted Green sums over ``t ∈ [v-1, v+b]``."""
    return float(green_sums(shape, h)[1:].min())


@dataclass(frozen=True, eq=False)
class GreenTable:
    shape: BvpShape
    values: np.ndarray
    D: float
    cone_coeff: float
    sigma_h: Optional[float] = None
    tau_h: Optional[float] = None

    @property
    def t_points(self) -> list[Fraction]:
        return self.shape.t_points

    def to_csv(self) -> str:
        """CSV with header ``t,s0,...,sb``; ``t`` exact, entries to 17 digits."""
        b = self.shape.b
        lines = ["t," + ",".join(f"s{s}" for s in range(b + 1))]
        for t, row in zip(self.t_points, self.values):
            lines.append(
                format_rational(t) + "," + ",".join(format(float(x), ".17g") for x in row)
            )
        return "\n".join(lines) + "\n"


def green_table(shape: BvpShape, h: Optional[GridFunction] = None) -> GreenTable:
    values = green_matrix(shape)
    sig = ta = None
    if h is not None:
        sig, ta = sigma(shape, h), tau(shape, h)
    return GreenTable(
        shape=shape,
        values=values,
        D=constant_D(shape),
        cone_coeff=cone_coefficient(shape),
        sigma_h=sig,
        tau_h=ta,
    )


@dataclass(frozen=True, eq=False)
class GreenBoundsReport:
    """Slacks of the two kernel bounds; ``passed`` iff all are >= -1e-10.

    ``upper_slack[k, s]`` is ``bound - G(t_k, s)`` for the upper bound and
    ``nonneg_slack`` is ``G`` itself. ``lower_slack[s]`` is
    ``min_t G(t, s) - Γ(v) G(s+v-1, s) / (s+v-1)^(v-1)``.
    """

    shape: BvpShape
    nonneg_slack: np.ndarray
    upper_slack: np.ndarray
    lower_slack: np.ndarray
    diagonal: np.ndarray = field(repr=False)

    @property
    def passed(self) -> bool:
        return bool(
            self.nonneg_slack.min() >= -BOUNDS_TOL
            and self.upper_slack.min() >= -BOUNDS_TOL
            and self.lower_slack.min() >= -BOUNDS_TOL
            and self.diagonal.min() > 0
        )

    def min_slack(self) -> float:
        return float(
            min(self.nonneg_slack.min(), self.upper_slack.min(), self.lower_slack.min())
        )


def check_green_bounds(shape: BvpShape) -> GreenBoundsReport:
    """Check ``0 <= G(t,s) <= D (v+b)^(v-1) G(s+v-1,s) / (s+v-1)^(v-1)`` and
    ``min_{t >= v-1} G(t,s) >= Γ(v) G(s+v-1,s) / (s+v-1)^(v-1) > 0``."""
    v, b = shape.v, shape.b
    g = green_matrix(shape)
    D = constant_D(shape)
    top = falling_factorial(v + b, v - 1)
    # row of t = s+v-1 is k = s+1
    diag = np.array([g[s + 1, s] for s in range(b + 1)])
    scale = np.array([falling_factorial(s + v - 1, v - 1) for s in range(b + 1)])
    upper = D * top * diag / scale
    lower = math.gamma(float(v)) * diag / scale
    return GreenBoundsReport(
        shape=shape,
        nonneg_slack=g.copy(),
        upper_slack=upper[None, :] - g,
        lower_slack=g[1:].min(axis=0) - lower,
        diagonal=diag,
    )
