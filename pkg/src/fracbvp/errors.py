"""Exception hierarchy shared by every module of the package."""


class FracBvpError(Exception):
    """Base class for all errors raised by fracbvp."""


class PoleError(FracBvpError, ValueError):
    """A Gamma function argument sits on a pole and no convention applies."""


class DomainError(FracBvpError, ValueError):
    """An order, parameter or grid lies outside the admissible range."""


class InsufficientGrid(FracBvpError, ValueError):
    """The grid has too few points for the requested operation."""


class DegenerateProblem(FracBvpError):
    """The Green's function denominator vanishes for this shape (e.g. v = 2)."""


class SingularSystem(FracBvpError):
    """The direct linear system has a pivot below the singularity threshold."""


class NonfiniteValue(FracBvpError, ArithmeticError):
    """A nonlinearity or operator evaluation produced inf or nan."""


class NonConvergence(FracBvpError):
    """Fixed-point iteration hit its iteration cap."""

    def __init__(self, max_iter: int, last_delta: float):
        self.max_iter = max_iter
        self.last_delta = last_delta
        super().__init__(
            f"no convergence after {max_iter} iterations (last delta {last_delta:.3e})"
        )


class UnstableLimit(FracBvpError):
    """Numerical limit classification was inconsistent."""


class ParseError(FracBvpError, ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class ValidationError(FracBvpError, ValueError):
    def __init__(self, field: str, reason: str, line: int | None = None):
        self.field = field
        self.reason = reason
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{field}{where}: {reason}")
