import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from fracbvp.errors import DomainError, PoleError
from fracbvp.exact_grid import (
    Grid,
    GridFunction,
    as_rational,
    falling_factorial,
    format_rational,
    is_nonpositive_integer,
    parse_rational,
    signed_log_gamma,
)

import oracles

SHAPE_ORDERS = [Fraction(11, 10), Fraction(13, 10), Fraction(3, 2), Fraction(5, 3), Fraction(19, 10)]


@pytest.mark.parametrize(
    "q, expected",
    [(Fraction(0), True), (Fraction(-3), True), (Fraction(1, 2), False), (Fraction(2), False), (Fraction(-1, 2), False)],
)
def test_is_nonpositive_integer(q, expected):
    assert is_nonpositive_integer(q) is expected


@pytest.mark.parametrize("text, q", [("13/10", Fraction(13, 10)), ("5", Fraction(5)), ("-7/10", Fraction(-7, 10)), (" 4/6 ", Fraction(2, 3))])
def test_parse_and_format_round_trip(text, q):
    assert parse_rational(text) == q
    assert parse_rational(format_rational(q)) == q


@pytest.mark.parametrize("bad", ["1.5", "a/b", "1/0", ""])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_as_rational_rejects_float():
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_signed_log_gamma_examples():
    assert signed_log_gamma(1.0) == (0.0, 1)
    lg = signed_log_gamma(0.5)
    assert lg.sign == 1 and lg.log_abs == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-15)
    # Γ(-1/2) = -2√π; ln(2√π) from a 50-digit evaluation
    lg = signed_log_gamma(-0.5)
    assert lg.sign == -1
    assert lg.log_abs == pytest.approx(1.265512123484645396488946, rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -3.0, -1.0 + 1e-13])
def test_signed_log_gamma_poles(x):
    with pytest.raises(PoleError):
        signed_log_gamma(x)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-30, max_value=30, allow_nan=False))
def test_signed_log_gamma_matches_mpmath(x):
    if round(x) <= 0 and abs(x - round(x)) < 1e-6:
        return
    ref = mp.gamma(mp.mpf(x))
    got = signed_log_gamma(x).value
    assert abs(got - float(ref)) <= 1e-13 * abs(float(ref))


def test_falling_factorial_examples():
    assert falling_factorial(5, 2) == 20.0
    assert falling_factorial(Fraction(-1, 2), Fraction(1, 2)) == 0.0
    assert falling_factorial(Fraction(-1, 2), Fraction(-1, 2)) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    for t in [Fraction(7, 3), Fraction(-5, 2), Fraction(0), Fraction(-4)]:
        assert falling_factorial(t, 0) == 1.0


def test_falling_factorial_numerator_pole_raises():
    # t+1 = -1 is a pole while t+1-v = -3/2 is not
    with pytest.raises(PoleError):
        falling_factorial(Fraction(-2), Fraction(1, 2))


def test_falling_factorial_negative_integer_order():
    # Γ(t+1)/Γ(t+3) = 1/((t+1)(t+2))
    assert falling_factorial(Fraction(1, 2), -2) == pytest.approx(1 / (1.5 * 2.5), rel=1e-15)
    with pytest.raises(PoleError):
        falling_factorial(Fraction(-1), -1)


@pytest.mark.parametrize("t", range(0, 25))
@pytest.mark.parametrize("v", range(0, 8))
def test_falling_factorial_integer_exact(t, v):
    if v > t:
        return
    assert falling_factorial(t, v) == math.perm(t, v)


@pytest.mark.parametrize("v", SHAPE_ORDERS)
def test_pole_convention_and_gamma_shift(v):
    assert falling_factorial(v - 2, v - 1) == 0.0
    g = math.gamma(float(v - 1))
    assert abs(falling_factorial(v - 2, v - 2) - g) <= 1e-12 * g


def test_pole_convention_all_small_denominators():
    for den in range(2, 11):
        for num in range(den + 1, 2 * den):
            v = Fraction(num, den)
            assert falling_factorial(v - 2, v - 1) == 0.0


rationals = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 10))


@settings(max_examples=300, deadline=None)
@given(t=rationals, v=rationals)
def test_recurrence(t, v):
    try:
        a = falling_factorial(t, v)
        b = falling_factorial(t, v - 1)
    except PoleError:
        return
    if a == 0 or b == 0 or not (math.isfinite(a) and math.isfinite(b)):
        return
    assert abs(a - (float(t - v + 1)) * b) <= 1e-12 * abs(a)


@settings(max_examples=150, deadline=None)
@given(t=rationals, v=rationals)
def test_falling_factorial_matches_oracle(t, v):
    try:
        got = falling_factorial(t, v)
    except PoleError:
        return
    if v.denominator == 1 and v < 0:
        return
    ref = float(oracles.falling(t, v))
    assert abs(got - ref) <= 1e-12 * abs(ref) + 1e-300


def test_grid_points_exact():
    g = Grid(Fraction(-7, 10), 4)
    assert g.points == [Fraction(-7, 10), Fraction(3, 10), Fraction(13, 10), Fraction(23, 10)]
    assert g.index(Fraction(13, 10)) == 2
    with pytest.raises(ValueError):
        g.index(Fraction(1, 2))


def test_grid_function_validation_and_immutability():
    grid = Grid(Fraction(1, 2), 3)
    with pytest.raises(DomainError):
        GridFunction(grid, [1.0, 2.0])
    with pytest.raises(DomainError):
        GridFunction(grid, [1.0, np.inf, 2.0])
    f = GridFunction(grid, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        f.values[0] = 5.0
    assert f(Fraction(3, 2)) == 2.0
    assert GridFunction.sample(lambda t: float(t), Fraction(1, 2), 3) == GridFunction(grid, [0.5, 1.5, 2.5])
