"""Flat ``key = value`` problem configs.

Example::

    # Example 2
    v = 3/2
    b = 10
    lambda = 0.1
    h = constant 1.0
    f = builtin example2

``h`` is ``constant c`` or ``values x0, x1, ..., x_{b+1}``; ``f`` is
``constant c``, ``builtin NAME`` or ``table y0:f0, y1:f1, ...``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, ParseError, ValidationError
from .exact_grid import Grid, GridFunction, format_rational, parse_rational
from .green_kernel import BvpShape
from .bvp_solver import Problem
from .nonlinearity import NonlinearitySpec

KEYS = ("v", "b", "lambda", "h", "f")

EXAMPLES = {
    1: "# Example 1: f(y) = (y^2 - 5y) log y\n"
    "v = 13/10\nb = 5\nlambda = 0.05\nh = constant 1.0\nf = builtin example1\n",
    2: "# Example 2: f(y) = y (1 + exp(-y))\n"
    "v = 3/2\nb = 10\nlambda = 0.1\nh = constant 1.0\nf = builtin example2\n",
    3: "# Example 3: f(y) = (7 - y) exp(1/y)\n"
    "v = 5/3\nb = 7\nlambda = 0.05\nh = constant 1.0\nf = builtin example3\n",
}


def _float(text: str, field: str, line: int) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ValidationError(field, f"not a number: {text!r}", line) from None
    if not math.isfinite(x):
        raise ValidationError(field, f"must be finite, got {text!r}", line)
    return x


def _split_kind(text: str, field: str, line: int) -> tuple[str, str]:
    kind, _, rest = text.strip().partition(" ")
    if not rest.strip():
        raise ValidationError(field, f"expected '<kind> <value>', got {text!r}", line)
    return kind, rest.strip()


def parse_problem_config(text: str) -> Problem:
    """Parse and validate a config; every failure names its line."""
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ParseError(lineno, f"expected 'key = value', got {raw.strip()!r}")
        if key not in KEYS:
            raise ParseError(lineno, f"unknown key {key!r}")
        if key in entries:
            raise ParseError(lineno, f"duplicate key {key!r}")
        if not value:
            raise ParseError(lineno, f"empty value for {key!r}")
        entries[key] = (value, lineno)
    for key in KEYS:
        if key not in entries:
            raise ValidationError(key, "missing")

    text_v, line_v = entries["v"]
    try:
        v = parse_rational(text_v)
    except ValueError as exc:
        raise ValidationError("v", str(exc), line_v) from None
    if not 1 < v <= 2:
        raise ValidationError("v", f"must lie in (1, 2], got {text_v}", line_v)

    text_b, line_b = entries["b"]
    try:
        b = int(text_b)
    except ValueError:
        raise ValidationError("b", f"not an integer: {text_b!r}", line_b) from None
    if b < 1:
        raise ValidationError("b", f"must be >= 1, got {b}", line_b)
    # v = 2 is kept so that the degenerate shape surfaces as DegenerateProblem
    shape = BvpShape(v, b)

    text_l, line_l = entries["lambda"]
    lam = _float(text_l, "lambda", line_l)
    if lam <= 0:
        raise ValidationError("lambda", f"must be positive, got {text_l}", line_l)

    text_h, line_h = entries["h"]
    kind, rest = _split_kind(text_h, "h", line_h)
    if kind == "constant":
        hv = np.full(b + 2, _float(rest, "h", line_h))
    elif kind == "values":
        hv = np.array([_float(x, "h", line_h) for x in rest.split(",")])
        if hv.size != b + 2:
            raise ValidationError("h", f"expected {b + 2} values, got {hv.size}", line_h)
    else:
        raise ValidationError("h", f"unknown kind {kind!r}", line_h)
    if np.any(hv < 0):
        raise ValidationError("h", "values must be nonnegative", line_h)
    h = GridFunction(Grid(v - 1, b + 2), hv)

    text_f, line_f = entries["f"]
    kind, rest = _split_kind(text_f, "f", line_f)
    try:
        if kind == "constant":
            f = NonlinearitySpec.const(_float(rest, "f", line_f))
        elif kind == "builtin":
            f = NonlinearitySpec.builtin(rest)
        elif kind == "table":
            pairs = []
            for item in rest.split(","):
                y, sep, fy = item.partition(":")
                if not sep:
                    raise ValidationError("f", f"table entry {item.strip()!r} is not y:f", line_f)
                pairs.append((_float(y, "f", line_f), _float(fy, "f", line_f)))
            f = NonlinearitySpec.from_table(pairs)
        else:
            raise ValidationError("f", f"unknown kind {kind!r}", line_f)
    except DomainError as exc:
        raise ValidationError("f", str(exc), line_f) from None

    return Problem(shape, lam, h, f)


def format_problem_config(problem: Problem) -> str:
    """Inverse of :func:`parse_problem_config` (up to comments and spacing)."""
    hv = problem.h.values
    if np.all(hv == hv[0]):
        h = f"constant {float(hv[0])!r}"
    else:
        h = "values " + ", ".join(repr(float(x)) for x in hv)
    return (
        f"v = {format_rational(problem.shape.v)}\n"
        f"b = {problem.shape.b}\n"
        f"lambda = {float(problem.lam)!r}\n"
        f"h = {h}\n"
        f"f = {problem.f.describe()}\n"
    )
