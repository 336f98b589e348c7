"""Discrete fractional calculus and a fractional-difference boundary value problem.

The main entry points are re-exported here; see the submodules for details.
"""

from .bvp_solver import (
    GREEN_SIGN,
    Problem,
    Solution,
    apply_operator_F,
    cone_membership,
    residual_check,
    solve,
    solve_linear_direct,
    solve_linear_green,
    solve_nonlinear_fixed_point,
)
from .config import format_problem_config, parse_problem_config
from .errors import (
    DegenerateProblem,
    DomainError,
    FracBvpError,
    InsufficientGrid,
    NonConvergence,
    NonfiniteValue,
    ParseError,
    PoleError,
    SingularSystem,
    UnstableLimit,
    ValidationError,
)
from .exact_grid import (
    Grid,
    GridFunction,
    SignedLogGamma,
    falling_factorial,
    format_rational,
    is_nonpositive_integer,
    parse_rational,
    signed_log_gamma,
)
from .frac_calc import FracOrder, forward_difference, fractional_difference, fractional_sum
from .green_kernel import (
    BvpShape,
    GreenTable,
    cone_coefficient,
    constant_D,
    green_table,
    green_value,
    sigma,
    tau,
    check_green_bounds,
)
from .hypotheses import LambdaIntervals, estimate_limit_ratio, lambda_intervals
from .nonlinearity import NonlinearitySpec

__version__ = "0.1.0"
