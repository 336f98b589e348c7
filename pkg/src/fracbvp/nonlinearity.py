"""Nonlinearities ``f(y)`` for the boundary value problem."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, NonfiniteValue

CLAMP_FLOOR = 1e-12

BUILTINS = ("example1", "example2", "example3")
# builtins with log y or exp(1/y) need y > 0
_CLAMPED = {"example1", "example3"}


def _example1(y):
    return (y * y - 5.0 * y) * np.log(y)


def _example2(y):
    return y * (1.0 + np.exp(-y))


def _example3(y):
    return (7.0 - y) * np.exp(1.0 / y)


_FORMULAS = {"example1": _example1, "example2": _example2, "example3": _example3}


@dataclass(frozen=True)
class NonlinearitySpec:
    """One of: a constant, a named built-in, or a piecewise-linear table.

    Built-ins::

        example1  (y**2 - 5y) log y
        example2  y (1 + exp(-y))
        example3  (7 - y) exp(1/y)

    Tables interpolate linearly inside their ``y`` range and extrapolate by
    the end values outside it (see :meth:`extrapolates`).
    """

    kind: str
    constant: float = 0.0
    name: Optional[str] = None
    table: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind == "constant":
            if not np.isfinite(self.constant):
                raise DomainError("constant nonlinearity must be finite")
        elif self.kind == "builtin":
            if self.name not in BUILTINS:
                raise DomainError(f"unknown builtin {self.name!r}; choose from {BUILTINS}")
        elif self.kind == "table":
            pts = tuple(sorted((float(a), float(b)) for a, b in self.table))
            if len(pts) < 2:
                raise DomainError("a table nonlinearity needs at least two points")
            ys = [p[0] for p in pts]
            if len(set(ys)) != len(ys):
                raise DomainError("table y values must be distinct")
            if not np.all(np.isfinite(pts)):
                raise DomainError("table entries must be finite")
            object.__setattr__(self, "table", pts)
        else:
            raise DomainError(f"unknown nonlinearity kind {self.kind!r}")

    @classmethod
    def const(cls, c: float) -> "NonlinearitySpec":
        return cls("constant", constant=float(c))

    @classmethod
    def builtin(cls, name: str) -> "NonlinearitySpec":
        return cls("builtin", name=name)

    @classmethod
    def from_table(cls, pairs) -> "NonlinearitySpec":
        return cls("table", table=tuple(pairs))

    def raw(self, y) -> np.ndarray:
        """Evaluate without the finiteness check; overflow yields ``inf``."""
        y = np.asarray(y, dtype=float)
        if self.kind == "constant":
            return np.full(y.shape, self.constant)
        if self.kind == "table":
            xs, fs = zip(*self.table)
            return np.interp(y, xs, fs)
        if self.name in _CLAMPED:
            y = np.maximum(y, CLAMP_FLOOR)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return _FORMULAS[self.name](y)

    def __call__(self, y) -> np.ndarray:
        out = self.raw(y)
        if not np.all(np.isfinite(out)):
            raise NonfiniteValue(f"f = {self.describe()} is not finite at some argument")
        return out

    def clamp_count(self, y) -> int:
        """How many arguments the guarded built-ins would clamp to 1e-12."""
        if self.kind == "builtin" and self.name in _CLAMPED:
            return int(np.count_nonzero(np.asarray(y, dtype=float) < CLAMP_FLOOR))
        return 0

    def extrapolates(self, y) -> bool:
        """True when a table would be evaluated outside its ``y`` range."""
        if self.kind != "table":
            return False
        y = np.asarray(y, dtype=float)
        lo, hi = self.table[0][0], self.table[-1][0]
        return bool(np.any((y < lo) | (y > hi)))

    def is_constant(self) -> bool:
        return self.kind == "constant"

    def describe(self) -> str:
        """Config-file form of this nonlinearity."""
        if self.kind == "constant":
            return f"constant {self.constant!r}"
        if self.kind == "builtin":
            return f"builtin {self.name}"
        return "table " + ", ".join(f"{a!r}:{b!r}" for a, b in self.table)
