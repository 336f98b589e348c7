"""Numerical checks of the calculus identities and kernel bounds for one shape."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bvp_solver import GREEN_SIGN, Problem, solve_linear_direct, solve_linear_green
from .errors import PoleError
from .exact_grid import Grid, GridFunction, falling_factorial
from .frac_calc import forward_difference, fractional_difference, fractional_sum
from .green_kernel import BvpShape, constant_D_closed, constant_D_scan, check_green_bounds
from .nonlinearity import NonlinearitySpec


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: worst={self.worst:.3e} tol={self.tol:.0e}"


def power_rule_error(v: Fraction, base: Fraction, length: int) -> float:
    """Worst relative error of ``Δ t^(v) = v t^(v-1)`` on a grid.

    Points where either side hits a Gamma pole are skipped.
    """
    worst = 0.0
    for k in range(length - 1):
        t = base + k
        try:
            lhs = falling_factorial(t + 1, v) - falling_factorial(t, v)
            rhs = float(v) * falling_factorial(t, v - 1)
        except PoleError:
            continue
        err = abs(lhs - rhs)
        worst = max(worst, err / abs(rhs) if rhs else err)
    return worst


def power_rule_check(shape: BvpShape, tol: float = 1e-10) -> CheckResult:
    v = shape.v
    n = shape.b + 3
    worst = 0.0
    for order in (v, v - 1, v + 1):
        for base in (v - 2, v - 1, Fraction(0), Fraction(1, 3)):
            worst = max(worst, power_rule_error(order, base, n))
    return CheckResult("power rule", worst <= tol, worst, tol)


def span_residual(y: GridFunction, v: Fraction) -> float:
    """Max residual of ``Δ^{-v} Δ^v y - y`` after projecting out
    ``(t-a')^(v-1)`` and ``(t-a')^(v-2)``, ``a'`` the base of ``Δ^v y``."""
    g = fractional_difference(y, v)
    back = fractional_sum(g, v)
    start = y.grid.index(back.grid.base)
    diff = back.values - y.values[start : start + back.grid.length]
    a = g.grid.base
    basis = np.array(
        [[falling_factorial(t - a, v - 1), falling_factorial(t - a, v - 2)] for t in back.grid.points]
    )
    coef, *_ = np.linalg.lstsq(basis, diff, rcond=None)
    return float(np.max(np.abs(basis @ coef - diff)))


def span_check(shape: BvpShape, n_random: int = 20, seed: int = 0, tol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(seed)
    grid = Grid(shape.v - 2, shape.b + 3)
    worst = max(
        span_residual(GridFunction(grid, rng.uniform(-1, 1, grid.length)), shape.v)
        for _ in range(n_random)
    )
    return CheckResult("sum of difference span", worst <= tol, worst, tol)


def green_bounds_check(shape: BvpShape) -> CheckResult:
    report = check_green_bounds(shape)
    return CheckResult("green bounds", report.passed, -report.min_slack(), 1e-10)


def constant_d_check(shape: BvpShape, tol: float = 1e-12) -> CheckResult:
    err = abs(constant_D_scan(shape) - constant_D_closed(shape))
    return CheckResult("D closed form", err <= tol, err, tol)


def oracle_check(shape: BvpShape, n_random: int = 5, seed: int = 0, tol: float = 1e-9) -> CheckResult:
    """Green representation against the direct solve, relative to ``1 + max|y|``."""
    rng = np.random.default_rng(seed)
    grid = Grid(shape.v - 1, shape.b + 2)
    worst = 0.0
    for _ in range(n_random):
        h = GridFunction(grid, rng.uniform(0, 1, grid.length))
        direct = solve_linear_direct(shape, 1.0, h).y.values
        green = solve_linear_green(Problem(shape, 1.0, h, NonlinearitySpec.const(1.0))).y.values
        worst = max(worst, float(np.max(np.abs(green - direct)) / (1 + np.max(np.abs(direct)))))
    return CheckResult(f"oracle equivalence (sign {GREEN_SIGN:+d})", worst <= tol, worst, tol)


def difference_collapse_check(shape: BvpShape, seed: int = 0, tol: float = 1e-12) -> CheckResult:
    """At integer order the fractional difference is the plain difference."""
    rng = np.random.default_rng(seed)
    f = GridFunction(Grid(shape.v - 2, shape.b + 3), rng.uniform(-1, 1, shape.b + 3))
    worst = 0.0
    for n in (1, 2):
        d = fractional_difference(f, n).values - forward_difference(f, n).values
        worst = max(worst, float(np.max(np.abs(d))))
    return CheckResult("integer-order collapse", worst <= tol, worst, tol)


def run_all(shape: BvpShape) -> list[CheckResult]:
    shape.require_nondegenerate()
    return [
        power_rule_check(shape),
        span_check(shape),
        green_bounds_check(shape),
        constant_d_check(shape),
        oracle_check(shape),
        difference_collapse_check(shape),
    ]
