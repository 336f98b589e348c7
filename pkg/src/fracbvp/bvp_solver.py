"""Linear and nonlinear solvers for the fractional boundary value problem

    -Δ^v y(t) = λ h(t+v-1) f(y(t+v-1)),   t = 0, ..., b
    y(v-2) = 0,   Δy(v-2) = Δy(v+b-1)

where ``Δ^v`` is based at ``v-2`` and ``y`` lives on ``[v-2, v+b]``.

Two independent routes to the linear solution are provided: the Green
representation and a direct linear system built from closed-form Gamma
ratios. They agree up to the global sign :data:`GREEN_SIGN`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import DomainError, NonConvergence, SingularSystem
from .exact_grid import Grid, GridFunction, format_rational
from .frac_calc import fractional_difference
from .green_kernel import BvpShape, cone_coefficient, green_matrix
from .nonlinearity import NonlinearitySpec

#: Sign ``s*`` with ``y = s* (λ/Γ(v)) Σ_s G(t,s) h(s+v-1)`` solving the
#: linear problem ``-Δ^v y = λ h``. Fixed by the direct-solve oracle test.
GREEN_SIGN = -1

#: Sign of the sum defining the operator ``F`` whose fixed points are sought.
OPERATOR_SIGN = +1

PIVOT_TOL = 1e-12
CONE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Problem:
    shape: BvpShape
    lam: float
    h: GridFunction
    f: NonlinearitySpec

    def __post_init__(self):
        shape = self.shape
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise DomainError(f"lambda must be a nonnegative finite number, got {self.lam}")
        if self.h.grid != Grid(shape.v - 1, shape.b + 2):
            raise DomainError(
                f"h must have {shape.b + 2} values on [v-1, v+b], got grid {self.h.grid}"
            )
        if np.any(self.h.values < 0):
            raise DomainError("h must be nonnegative")

    @property
    def h_interior(self) -> np.ndarray:
        """``h(s+v-1)`` for ``s = 0..b``."""
        return np.asarray(self.h.values[: self.shape.b + 1])

    def with_lambda(self, lam: float) -> "Problem":
        return Problem(self.shape, lam, self.h, self.f)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Problem):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.lam == other.lam
            and self.h == other.h
            and self.f == other.f
        )


def _kv_block(prefix: str, items: list[tuple[str, object]]) -> str:
    def fmt(x):
        if isinstance(x, (float, np.floating)):
            return format(float(x), ".17g")
        return str(x)

    return "\n".join(f"{prefix}.{k}={fmt(x)}" for k, x in items) + "\n"


@dataclass(frozen=True, eq=False)
class ResidualReport:
    equation_residuals: np.ndarray
    bc1: float
    bc2: float
    equation_sign: int = 1
    max_abs: float = field(init=False)

    def __post_init__(self):
        m = max(float(np.max(self.equation_residuals, initial=0.0)), self.bc1, self.bc2)
        object.__setattr__(self, "max_abs", m)

    @property
    def equation_max(self) -> float:
        return float(np.max(self.equation_residuals, initial=0.0))

    def to_text(self) -> str:
        items: list[tuple[str, object]] = [
            ("equation_sign", self.equation_sign),
            ("max_abs", self.max_abs),
            ("equation_max", self.equation_max),
            ("bc1", self.bc1),
            ("bc2", self.bc2),
        ]
        items += [(f"equation_{k}", r) for k, r in enumerate(self.equation_residuals)]
        return _kv_block("residual", items)


@dataclass(frozen=True)
class ConeReport:
    norm: float
    min_interior: float
    cone_coeff: float
    margin: float

    @property
    def member(self) -> bool:
        return self.margin >= -CONE_TOL

    def to_text(self) -> str:
        return _kv_block(
            "cone",
            [
                ("norm", self.norm),
                ("min_interior", self.min_interior),
                ("cone_coeff", self.cone_coeff),
                ("margin", self.margin),
                ("member", str(self.member).lower()),
            ],
        )


@dataclass(frozen=True, eq=False)
class Solution:
    y: GridFunction
    method: str
    residual: ResidualReport
    cone: ConeReport
    iterations: int = 0
    sign: Optional[int] = None
    clamped: int = 0
    extrapolated: bool = False

    def to_csv(self) -> str:
        lines = ["t,y"]
        for t, val in zip(self.y.grid.points, self.y.values):
            lines.append(f"{format_rational(t)},{format(float(val), '.17g')}")
        return "\n".join(lines) + "\n"

    def report(self) -> str:
        head = _kv_block(
            "solution",
            [
                ("method", self.method),
                ("sign", self.sign if self.sign is not None else "none"),
                ("iterations", self.iterations),
                ("clamped", self.clamped),
                ("extrapolated", str(self.extrapolated).lower()),
            ],
        )
        return head + self.residual.to_text() + self.cone.to_text()


def solution_grid(shape: BvpShape) -> Grid:
    return Grid(shape.v - 2, shape.b + 3)


def _check_y(y: GridFunction, shape: BvpShape) -> None:
    if y.grid != solution_grid(shape):
        raise DomainError(f"y must live on [v-2, v+b], got {y.grid}")


def residual_check(y: GridFunction, problem: Problem, sign: int = 1) -> ResidualReport:
    """Residuals of ``-Δ^v y = sign·λ h f(y)`` and of both boundary conditions.

    ``Δ^v`` is evaluated through :func:`fractional_difference`, a code path
    independent of the direct solver's matrix. ``sign = +1`` is the equation
    as stated; the fixed points of ``F`` satisfy it with ``sign = GREEN_SIGN``.
    """
    shape = problem.shape
    _check_y(y, shape)
    b = shape.b
    dv = fractional_difference(y, shape.v)
    assert dv.grid == Grid(0, b + 1)
    arg = y.values[1 : b + 2]
    forcing = problem.lam * problem.h_interior * problem.f(arg)
    res = np.abs(-dv.values - sign * forcing)
    vals = y.values
    bc2 = abs((vals[1] - vals[0]) - (vals[b + 2] - vals[b + 1]))
    return ResidualReport(res, abs(float(vals[0])), float(bc2), sign)


def cone_membership(y: GridFunction, shape: BvpShape) -> ConeReport:
    """Position of ``y`` relative to the cone ``min_{t>=v-1} y >= c ||y||``."""
    _check_y(y, shape)
    c = cone_coefficient(shape)
    norm = float(np.max(np.abs(y.values)))
    lo = float(np.min(y.values[1:]))
    return ConeReport(norm, lo, c, lo - c * norm)


def _direct_matrix(shape: BvpShape) -> np.ndarray:
    """Rows ``0..b``: ``-Δ^v y(t)`` in the unknowns ``y(v-2+j)``; then the BCs.

    ``Δ^v y(k) = W(k+2) - 2 W(k+1) + W(k)`` where ``W(m)`` is the order
    ``2-v`` sum based at ``v-2``, with weight
    ``Γ(m-j+2-v) / (Γ(2-v) Γ(m-j+1))`` on ``y(v-2+j)`` for ``j <= m``.
    """
    v, b = float(shape.v), shape.b
    n = b + 3
    if shape.v == 2:
        w = np.eye(n)
    else:
        g0 = math.gamma(2.0 - v)
        w = np.zeros((n, n))
        for m in range(n):
            for j in range(m + 1):
                w[m, j] = math.gamma(m - j + 2.0 - v) / (g0 * math.gamma(m - j + 1.0))
    a = np.zeros((n, n))
    for k in range(b + 1):
        a[k] = -(w[k + 2] - 2.0 * w[k + 1] + w[k])
    a[b + 1, 0] = 1.0
    a[b + 2, [0, 1, b + 1, b + 2]] = [-1.0, 1.0, 1.0, -1.0]
    return a


def solve_linear_direct(shape: BvpShape, lam: float, rhs: GridFunction) -> Solution:
    """Solve ``-Δ^v y = λ rhs`` with both boundary conditions as one linear system.

    ``rhs`` carries ``h(t+v-1)`` on ``[v-1, v+b]`` (its last value is unused).
    """
    if rhs.grid.base != shape.v - 1 or rhs.grid.length < shape.b + 1:
        raise DomainError(f"rhs must be defined on [v-1, v+b-1], got {rhs.grid}")
    a = _direct_matrix(shape)
    lu, piv = lu_factor(a)
    pivot = float(np.min(np.abs(np.diag(lu))))
    if pivot < PIVOT_TOL:
        raise SingularSystem(f"pivot {pivot:.3e} below {PIVOT_TOL} for {shape}")
    n = shape.b + 3
    f_vals = np.zeros(n)
    f_vals[: shape.b + 1] = lam * np.asarray(rhs.values[: shape.b + 1])
    y = GridFunction(solution_grid(shape), lu_solve((lu, piv), f_vals))
    h = rhs if rhs.grid.length == shape.b + 2 else _pad_h(shape, rhs)
    problem = Problem(shape, lam, h, NonlinearitySpec.const(1.0))
    return Solution(
        y=y,
        method="direct",
        residual=residual_check(y, problem),
        cone=cone_membership(y, shape),
    )


def _pad_h(shape: BvpShape, rhs: GridFunction) -> GridFunction:
    vals = np.zeros(shape.b + 2)
    vals[: shape.b + 1] = rhs.values[: shape.b + 1]
    return GridFunction(Grid(shape.v - 1, shape.b + 2), vals)


def solve_linear_green(problem: Problem) -> Solution:
    """``y(t) = GREEN_SIGN (λ/Γ(v)) Σ_s G(t,s) c h(s+v-1)`` for constant ``f ≡ c``."""
    if not problem.f.is_constant():
        raise DomainError("the Green representation needs a constant nonlinearity")
    shape = problem.shape
    g = green_matrix(shape)
    c = problem.f.constant
    vals = GREEN_SIGN * problem.lam / math.gamma(float(shape.v)) * (g @ (c * problem.h_interior))
    y = GridFunction(solution_grid(shape), vals)
    return Solution(
        y=y,
        method="green",
        residual=residual_check(y, problem),
        cone=cone_membership(y, shape),
        sign=GREEN_SIGN,
    )


def apply_operator_F(y: GridFunction, problem: Problem) -> GridFunction:
    """``(Fy)(t) = (λ/Γ(v)) Σ_s G(t,s) h(s+v-1) f(y(s+v-1))``."""
    shape = problem.shape
    _check_y(y, shape)
    g = green_matrix(shape)
    fy = problem.f(y.values[1 : shape.b + 2])
    vals = OPERATOR_SIGN * problem.lam / math.gamma(float(shape.v)) * (g @ (problem.h_interior * fy))
    return GridFunction(y.grid, vals)


def solve_nonlinear_fixed_point(
    problem: Problem,
    tol: float = 1e-12,
    max_iter: int = 1000,
    damping: float = 1.0,
) -> Solution:
    """Damped Picard iteration ``y <- (1-θ) y + θ F(y)``.

    Starts from ``F(0)``, or from ``1`` on ``[v-1, v+b]`` when ``f(0)`` is zero
    or undefined. ``θ`` is halved after two consecutive increases of the
    step. Stops at the first iterate with
    ``||F(y) - y|| <= tol (1 + ||y||)``, which is returned together with its
    index. The result satisfies ``-Δ^v y = GREEN_SIGN λ h f(y)``.
    """
    if not 0 < damping <= 1:
        raise DomainError(f"damping must lie in (0, 1], got {damping}")
    if max_iter < 0:
        raise DomainError("max_iter must be nonnegative")
    shape = problem.shape
    grid = solution_grid(shape)
    f0 = float(problem.f.raw(0.0))
    if math.isfinite(f0) and f0 != 0.0:
        y = apply_operator_F(GridFunction(grid, np.zeros(grid.length)), problem)
    else:
        start = np.ones(grid.length)
        start[0] = 0.0
        y = GridFunction(grid, start)

    theta = damping
    prev = None
    rises = 0
    clamped = 0
    extrapolated = False
    delta = math.inf
    for k in range(max_iter + 1):
        interior = y.values[1 : shape.b + 2]
        clamped += problem.f.clamp_count(interior)
        extrapolated |= problem.f.extrapolates(interior)
        fy = apply_operator_F(y, problem)
        step = fy.values - y.values
        delta = float(np.max(np.abs(step)))
        if delta <= tol * (1.0 + float(np.max(np.abs(y.values)))):
            return Solution(
                y=y,
                method="fixed_point",
                residual=residual_check(y, problem, sign=GREEN_SIGN * OPERATOR_SIGN),
                cone=cone_membership(y, shape),
                iterations=k,
                sign=OPERATOR_SIGN,
                clamped=clamped,
                extrapolated=extrapolated,
            )
        if k == max_iter:
            break
        if prev is not None and delta > prev:
            rises += 1
            if rises >= 2:
                theta /= 2.0
                rises = 0
        else:
            rises = 0
        prev = delta
        y = GridFunction(grid, y.values + theta * step)
    raise NonConvergence(max_iter, delta)


def solve(problem: Problem, method: str, tol: float = 1e-12, max_iter: int = 1000) -> Solution:
    """Dispatch on ``method`` in ``{"green", "direct", "fixedpoint"}``."""
    if method == "green":
        return solve_linear_green(problem)
    if method == "direct":
        if not problem.f.is_constant():
            raise DomainError("the direct solver needs a constant nonlinearity")
        shape = problem.shape
        shape.require_nondegenerate()
        rhs = problem.h * problem.f.constant
        sol = solve_linear_direct(shape, problem.lam, rhs)
        return Solution(
            y=sol.y,
            method="direct",
            residual=residual_check(sol.y, problem),
            cone=sol.cone,
        )
    if method in ("fixedpoint", "fixed_point"):
        return solve_nonlinear_fixed_point(problem, tol=tol, max_iter=max_iter)
    raise DomainError(f"unknown method {method!r}")


__all__ = [
    "GREEN_SIGN",
    "OPERATOR_SIGN",
    "ConeReport",
    "Problem",
    "ResidualReport",
    "Solution",
    "apply_operator_F",
    "cone_membership",
    "residual_check",
    "solution_grid",
    "solve",
    "solve_linear_direct",
    "solve_linear_green",
    "solve_nonlinear_fixed_point",
]
