import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracbvp.errors import DomainError, InsufficientGrid
from fracbvp.exact_grid import Grid, GridFunction, falling_factorial
from fracbvp.frac_calc import (
    FracOrder,
    forward_difference,
    fractional_difference,
    fractional_sum,
)
from fracbvp.verify import power_rule_error, span_residual

import oracles


def test_frac_order():
    assert FracOrder.of("3/2") == FracOrder(Fraction(3, 2), 2)
    assert FracOrder.of(2) == FracOrder(Fraction(2), 2)
    assert FracOrder.of("1/3").N == 1
    with pytest.raises(DomainError):
        FracOrder.of(0)
    with pytest.raises(DomainError):
        FracOrder(Fraction(3, 2), 3)


def test_forward_difference_square():
    f = GridFunction.sample(lambda t: float(t) ** 2, 0, 6)
    d = forward_difference(f, 1)
    assert d.grid == Grid(0, 5)
    np.testing.assert_array_equal(d.values, [2 * k + 1 for k in range(5)])


@pytest.mark.parametrize("order", [1, 2, 3])
def test_forward_difference_constant(order):
    f = GridFunction.constant(3.7, Fraction(1, 3), 6)
    assert np.all(forward_difference(f, order).values == 0)


def test_forward_difference_insufficient():
    with pytest.raises(InsufficientGrid):
        forward_difference(GridFunction.constant(1, 0, 2), 2)


@pytest.mark.parametrize("v", [Fraction(1, 2), Fraction(3, 2), Fraction(13, 10), Fraction(5, 2)])
def test_difference_of_falling_power(v):
    base = v - 1
    f = GridFunction.sample(lambda t: falling_factorial(t, v), base, 12)
    d = forward_difference(f, 1)
    for t, got in zip(d.grid.points, d.values):
        want = float(v) * falling_factorial(t, v - 1)
        assert abs(got - want) <= 1e-10 * abs(want)


def test_fractional_sum_order_one_is_running_sum():
    rng = np.random.default_rng(3)
    f = GridFunction(Grid(Fraction(-1, 3), 8), rng.normal(size=8))
    s = fractional_sum(f, 1)
    assert s.grid.base == Fraction(2, 3)
    np.testing.assert_allclose(s.values, np.cumsum(f.values), rtol=1e-14, atol=1e-14)


@pytest.mark.parametrize("v", [Fraction(1, 2), Fraction(13, 10), Fraction(3, 2), Fraction(7, 3)])
def test_fractional_sum_matches_term_by_term(v):
    rng = np.random.default_rng(11)
    base = Fraction(-2, 5)
    vals = rng.uniform(-1, 1, 9)
    s = fractional_sum(GridFunction(Grid(base, 9), vals), v)
    assert s.grid.base == base + v
    for k in range(9):
        ref = float(oracles.frac_sum_term_by_term(vals, base, v, k))
        assert abs(s.values[k] - ref) <= 1e-12 * (1 + abs(ref))


def test_fractional_sum_first_value_is_f_at_base():
    rng = np.random.default_rng(5)
    for v in [Fraction(1, 2), Fraction(3, 2), Fraction(9, 4)]:
        f = GridFunction(Grid(Fraction(1, 7), 4), rng.normal(size=4))
        assert fractional_sum(f, v).values[0] == pytest.approx(f.values[0], rel=1e-14)


def test_discrete_power_rule_half():
    v = Fraction(1, 2)
    s = fractional_sum(GridFunction.constant(1.0, 0, 10), v)
    for t, got in zip(s.grid.points, s.values):
        want = falling_factorial(t, v) / math.gamma(1.5)
        assert abs(got - want) <= 1e-10 * abs(want)


@pytest.mark.parametrize("v", [0, Fraction(-1, 2)])
def test_fractional_sum_rejects_nonpositive(v):
    with pytest.raises(DomainError):
        fractional_sum(GridFunction.constant(1, 0, 3), v)


def test_fractional_difference_integer_order_collapse():
    rng = np.random.default_rng(7)
    f = GridFunction(Grid(Fraction(-1, 2), 10), rng.normal(size=10))
    for n in (1, 2):
        a = fractional_difference(f, n)
        b = forward_difference(f, n)
        assert a.grid == b.grid
        np.testing.assert_allclose(a.values, b.values, rtol=0, atol=1e-12)


@pytest.mark.parametrize("v", [Fraction(11, 10), Fraction(3, 2), Fraction(19, 10)])
def test_fractional_difference_domain_shift(v):
    f = GridFunction.constant(1.0, v - 2, 8)
    d = fractional_difference(f, v)
    assert d.grid == Grid(Fraction(0), 6)


@pytest.mark.parametrize("v", [Fraction(11, 10), Fraction(13, 10), Fraction(3, 2), Fraction(5, 3), Fraction(19, 10)])
def test_falling_power_v_minus_one_is_annihilated(v):
    f = GridFunction.sample(lambda t: falling_factorial(t, v - 1), v - 2, 12)
    d = fractional_difference(f, v)
    assert np.max(np.abs(d.values)) <= 1e-10


def test_fractional_difference_insufficient():
    with pytest.raises(InsufficientGrid):
        fractional_difference(GridFunction.constant(1.0, Fraction(-1, 2), 2), Fraction(3, 2))


@pytest.mark.parametrize("base_shift", [0, 1, Fraction(1, 3)])
@pytest.mark.parametrize("v", [Fraction(13, 10), Fraction(3, 2), Fraction(5, 3)])
def test_composition_span(v, base_shift):
    rng = np.random.default_rng(17)
    base = v - 2 + base_shift
    for _ in range(5):
        y = GridFunction(Grid(base, 13), rng.uniform(-1, 1, 13))
        assert span_residual(y, v) <= 1e-9


def test_composition_is_not_trivially_small():
    # without projecting out the two power functions the difference is O(1)
    v = Fraction(3, 2)
    rng = np.random.default_rng(0)
    y = GridFunction(Grid(v - 2, 13), rng.uniform(-1, 1, 13))
    back = fractional_sum(fractional_difference(y, v), v)
    assert np.max(np.abs(back.values - y.values[2:])) > 1e-3


small_rationals = st.builds(Fraction, st.integers(1, 29), st.integers(1, 10)).filter(lambda q: 0 < q < 3)


@settings(max_examples=80, deadline=None)
@given(v=small_rationals, base=st.builds(Fraction, st.integers(-25, 25), st.integers(1, 10)))
def test_power_rule_property(v, base):
    assert power_rule_error(v, base, 10) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(
    vals=st.lists(st.floats(-10, 10), min_size=4, max_size=10),
    v=st.builds(Fraction, st.integers(1, 30), st.integers(1, 10)),
    c=st.floats(-5, 5),
)
def test_fractional_sum_is_linear(vals, v, c):
    grid = Grid(Fraction(1, 2), len(vals))
    f = GridFunction(grid, vals)
    a = fractional_sum(f * c, v).values
    b = c * fractional_sum(f, v).values
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-9)
