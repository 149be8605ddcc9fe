"""
Tests for the perturbation schedule parser
"""
import math

import pytest
from hypothesis import given, strategies as st

from src.schedule_parser import BinaryOp, Negate, StepVariable, evaluate_schedule, parse_schedule


def test_default_schedule():
    """2^-k halves every step"""
    assert evaluate_schedule("2^-k", 0) == 1.0
    assert evaluate_schedule("2^-k", 3) == 0.125
    assert evaluate_schedule("2^-k", 10) == 2.0 ** -10


def test_numbers_and_arithmetic():
    assert evaluate_schedule("1e-3*0.5^k", 2) == pytest.approx(2.5e-4)
    assert evaluate_schedule("(1+k)*2", 1) == 4.0
    assert evaluate_schedule("1/(k+1)", 3) == 0.25
    assert evaluate_schedule("3 - 1 - 1", 0) == 1.0
    assert evaluate_schedule(".5", 0) == 0.5


@given(st.integers(0, 1000), st.integers(0, 1000), st.integers(1, 1000), st.integers(0, 40))
def test_precedence_matches_arithmetic(a, b, c, k):
    assert evaluate_schedule(f"{a} + {b} * {c} / (k + 1)", k) == pytest.approx(a + b * c / (k + 1))
    assert evaluate_schedule(f"({a} + {b}) * {c}", k) == (a + b) * c
    assert evaluate_schedule(f"{c} * 2^-k", k) == pytest.approx(c * 2.0 ** -k)


@given(st.floats(min_value=0.0, max_value=1e3, allow_nan=False, allow_infinity=False), st.integers(0, 60))
def test_number_literals_round_trip(value, k):
    """Any repr of a non-negative float is a valid constant schedule"""
    assert evaluate_schedule(repr(value), k) == value
    assert evaluate_schedule(f"{value!r} * 0.5^k", k) == pytest.approx(value * 0.5 ** k)


def test_power_is_right_associative():
    assert evaluate_schedule("2^3^2", 0) == 512.0
    tree = parse_schedule("2^k^2")
    assert isinstance(tree, BinaryOp)
    assert tree.op == "^"
    assert isinstance(tree.right, BinaryOp)


def test_unary_minus_binds_tightest():
    """-2^2 is (-2)^2"""
    assert evaluate_schedule("-2^2", 0) == 4.0
    assert isinstance(parse_schedule("-k"), Negate)
    assert isinstance(parse_schedule("k"), StepVariable)


def test_functions():
    assert evaluate_schedule("exp(-k)", 2) == pytest.approx(math.exp(-2))
    assert evaluate_schedule("sqrt(4)*2^-k", 1) == 1.0
    assert evaluate_schedule("exp(0)", 5) == 1.0


def test_empty_schedule_is_zero():
    assert evaluate_schedule("", 4) == 0.0
    assert evaluate_schedule("   ", 4) == 0.0


def test_invalid_expressions():
    """Syntax errors and negative, infinite or undefined values raise ValueError"""
    for expression in ("2^", "k k", "log(k)", "2 +", "(1"):
        with pytest.raises(ValueError):
            parse_schedule(expression)

    with pytest.raises(ValueError):
        evaluate_schedule("1-k", 2)
    with pytest.raises(ValueError):
        evaluate_schedule("1/k", 0)
    with pytest.raises(ValueError):
        evaluate_schedule("sqrt(0-1)", 0)
    with pytest.raises(ValueError):
        evaluate_schedule("exp(10000)", 0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
