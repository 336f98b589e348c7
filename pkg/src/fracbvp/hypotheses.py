"""Growth hypotheses on ``f(y)/y`` and the admissible ``λ`` intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError, UnstableLimit
from .nonlinearity import NonlinearitySpec

ZERO_TOL = 1e-6
INFINITE_THRESHOLD = 1e6
STABLE_RTOL = 1e-4
_KS = range(2, 9)

Target = Union[str, float]


@dataclass(frozen=True)
class LimitEstimate:
    """Classified limit of ``f(y)/y``; ``kind`` is zero, finite or infinite."""

    kind: str
    estimate: float
    ratios: tuple[float, ...]

    @property
    def value(self) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "infinite":
            return math.copysign(math.inf, self.estimate)
        return self.estimate

    def describe(self) -> str:
        if self.kind == "finite":
            return f"finite({self.estimate:.10g})"
        return self.kind


def _sample_points(at: Target) -> np.ndarray:
    k = np.array(list(_KS), dtype=float)
    if at == "zero":
        return 10.0 ** (-k)
    if at == "infinity":
        return 10.0**k
    p = float(at)
    return p - 10.0 ** (-k)


def estimate_limit_ratio(f: NonlinearitySpec, at: Target) -> LimitEstimate:
    """Classify ``lim f(y)/y`` as ``y -> 0+``, ``y -> p-`` or ``y -> ∞``.

    Samples ``y_k`` for ``k = 2..8`` (``10^-k``, ``p - 10^-k`` or ``10^k``).

    * zero: ``|r|`` below 1e-6 at the last two samples;
    * finite: ``|r_8 - r_7| <= 1e-4 (1 + |r_8|)``;
    * infinite: ``|r_k|`` strictly increasing and either past 1e6 or still
      moving by non-shrinking increments (logarithmic divergence never
      reaches 1e6 in double precision).

    :class:`UnstableLimit` is raised when no class or more than one applies.
    """
    ys = _sample_points(at)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        r = f.raw(ys) / ys
    if np.any(np.isnan(r)):
        raise UnstableLimit(f"f(y)/y is undefined near {at}")
    mag = np.abs(r)
    last, prev = r[-1], r[-2]

    is_zero = bool(mag[-1] < ZERO_TOL and mag[-2] < ZERO_TOL)
    stable = bool(math.isfinite(last) and abs(last - prev) <= STABLE_RTOL * (1 + abs(last)))
    # overflow to inf counts as continued growth
    growing = all(b > a or (math.isinf(a) and math.isinf(b)) for a, b in zip(mag, mag[1:]))
    if growing and not np.isfinite(mag[-1]):
        is_infinite = True
    elif growing:
        steps = np.diff(mag)
        still_climbing = steps[-1] >= 0.5 * steps[-2] and not stable
        is_infinite = bool(mag[-1] > INFINITE_THRESHOLD or still_climbing)
    else:
        is_infinite = False
    is_finite = stable and not is_zero

    flags = (("zero", is_zero), ("finite", is_finite), ("infinite", is_infinite))
    hits = [name for name, ok in flags if ok]
    if len(hits) != 1:
        raise UnstableLimit(
            f"cannot classify f(y)/y near {at}: ratios {np.array2string(r, precision=6)}"
        )
    kind = hits[0]
    estimate = float(last) if math.isfinite(last) else math.copysign(math.inf, prev)
    return LimitEstimate(kind, estimate, tuple(float(x) for x in r))


def _reciprocal(x: float) -> float:
    if x == 0:
        return math.inf
    if math.isinf(x):
        return 0.0
    return 1.0 / x


@dataclass(frozen=True)
class LambdaIntervals:
    """The two candidate ``λ`` intervals.

    ``superlinear_interval = (1/(τL), 1/(σl))`` is the one that can be
    nonempty when ``f(y)/y`` grows from ``l`` at 0 to ``L`` at infinity;
    ``sublinear_interval = (1/(τl), 1/(σL))`` is its mirror image.
    """

    l: float
    L: float
    superlinear_interval: tuple[float, float]
    sublinear_interval: tuple[float, float]

    @property
    def nonempty_superlinear(self) -> bool:
        return self.superlinear_interval[0] < self.superlinear_interval[1]

    @property
    def nonempty_sublinear(self) -> bool:
        return self.sublinear_interval[0] < self.sublinear_interval[1]

    def sublinear_midpoint(self) -> Optional[float]:
        if not self.nonempty_sublinear or math.isinf(self.sublinear_interval[1]):
            return None
        return 0.5 * (self.sublinear_interval[0] + self.sublinear_interval[1])

    def to_text(self) -> str:
        def fmt(x):
            return format(x, ".17g")

        sup_lo, sup_hi = self.superlinear_interval
        sub_lo, sub_hi = self.sublinear_interval
        lines = [
            f"intervals.l={fmt(self.l)}",
            f"intervals.L={fmt(self.L)}",
            f"intervals.superlinear=({fmt(sup_lo)}, {fmt(sup_hi)})",
            f"intervals.superlinear_nonempty={str(self.nonempty_superlinear).lower()}",
            f"intervals.sublinear=({fmt(sub_lo)}, {fmt(sub_hi)})",
            f"intervals.sublinear_nonempty={str(self.nonempty_sublinear).lower()}",
        ]
        return "\n".join(lines) + "\n"


def lambda_intervals(sigma: float, tau: float, l: float, L: float) -> LambdaIntervals:
    """Endpoints with the conventions ``1/∞ = 0`` and ``1/0 = ∞``."""
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    if sigma < tau:
        raise DomainError(f"sigma ({sigma}) must be at least tau ({tau})")
    if l < 0 or L < 0:
        raise DomainError("limits l and L must be nonnegative")
    superlinear = (_reciprocal(tau * L), _reciprocal(sigma * l))
    sublinear = (_reciprocal(tau * l), _reciprocal(sigma * L))
    return LambdaIntervals(float(l), float(L), superlinear, sublinear)


@dataclass(frozen=True)
class HypothesisReport:
    """Limits of ``f(y)/y`` at 0, at ``b`` (from below) and at infinity."""

    at_zero: LimitEstimate
    at_b: LimitEstimate
    at_infinity: LimitEstimate

    @property
    def h1(self) -> bool:
        return self.at_zero.kind == "infinite" and self.at_zero.estimate > 0

    @property
    def h2(self) -> bool:
        return self.at_b.kind == "zero"

    @property
    def h3(self) -> bool:
        return self.at_zero.kind == "finite" and 0 < self.at_zero.estimate < math.inf

    @property
    def h4(self) -> bool:
        return self.at_infinity.kind == "finite" and 0 < self.at_infinity.estimate < math.inf

    @property
    def existence_h1h2(self) -> bool:
        return self.h1 and self.h2

    @property
    def existence_h3h4(self) -> bool:
        return self.h3 and self.h4


def classify_hypotheses(f: NonlinearitySpec, b: int) -> HypothesisReport:
    return HypothesisReport(
        at_zero=estimate_limit_ratio(f, "zero"),
        at_b=estimate_limit_ratio(f, float(b)),
        at_infinity=estimate_limit_ratio(f, "infinity"),
    )
