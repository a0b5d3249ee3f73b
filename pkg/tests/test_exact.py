from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zoll_ech.errors import DomainError, UnitError
from zoll_ech.exact import PI, ExactQuantity, as_quantity, exact_sqrt, mixed_cmp

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)
powers = st.integers(min_value=0, max_value=3)


@pytest.mark.parametrize(
    "text, coeff, power",
    [("0", 0, 0), ("7", 7, 0), ("3/2", Fraction(3, 2), 0), ("4pi", 4, 1), ("201/100pi", Fraction(201, 100), 1), ("pi", 1, 1), ("2pi^2", 2, 2), ("-1/2pi", Fraction(-1, 2), 1)],
)
def test_parse(text, coeff, power):
    q = ExactQuantity.parse(text)
    assert q.coeff == coeff and q.pi_power == power


@pytest.mark.parametrize("bad", ["", "abc", "/3", "1/0", "4 pi x", "pi^"])
def test_parse_rejects(bad):
    with pytest.raises(DomainError):
        ExactQuantity.parse(bad)


def test_canonical_strings():
    assert [str(ExactQuantity.parse(s)) for s in ["0pi", "8/2pi", "2/4", "6/3pi^2"]] == ["0", "4pi", "1/2", "2pi^2"]


def test_zero_is_unitless():
    assert ExactQuantity(0, 1) == ExactQuantity(0)
    assert ExactQuantity(0, 1) <= 4 * PI
    assert 0 + 4 * PI == 4 * PI


def test_mixed_units_rejected():
    with pytest.raises(UnitError):
        _ = ExactQuantity(1) < PI
    with pytest.raises(UnitError):
        _ = ExactQuantity(1) + PI


def test_negative_pi_power_rejected():
    with pytest.raises(UnitError):
        _ = ExactQuantity(1) / PI
    with pytest.raises(DomainError):
        ExactQuantity(1, -1)


def test_mixed_cmp_examples():
    assert mixed_cmp(14, 4 * PI) == 1
    assert mixed_cmp(12, 4 * PI) == -1
    assert mixed_cmp(ExactQuantity(Fraction(355, 113)), PI) == 1
    assert mixed_cmp(ExactQuantity(Fraction(333, 106)), PI) == -1


def test_exact_sqrt():
    assert exact_sqrt(ExactQuantity(4, 2)) == 2 * PI
    assert exact_sqrt(ExactQuantity(8, 2)) is None
    assert exact_sqrt(ExactQuantity(4, 1)) is None


@given(fractions, powers)
def test_string_round_trip(c, p):
    q = ExactQuantity(c, p)
    assert ExactQuantity.parse(str(q)) == q


@given(fractions, powers)
def test_json_round_trip(c, p):
    q = ExactQuantity(c, p)
    assert ExactQuantity.from_json(q.to_json()) == q


@given(fractions, fractions, powers)
def test_order_matches_float(a, b, p):
    qa, qb = ExactQuantity(a, p), ExactQuantity(b, p)
    if a != b:
        assert (qa < qb) == (float(qa) < float(qb))


@given(fractions, fractions, powers, powers)
def test_mixed_cmp_matches_float_when_separated(a, b, p, q):
    x, y = ExactQuantity(a, p), ExactQuantity(b, q)
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9 * (1 + abs(fx) + abs(fy)):
        assert mixed_cmp(x, y) == (fx > fy) - (fx < fy)


@given(fractions, fractions, powers)
def test_arithmetic_is_rational(a, b, p):
    qa, qb = ExactQuantity(a, p), ExactQuantity(b, p)
    assert (qa + qb).coeff == a + b
    assert (qa * qb).pi_power == (0 if a * b == 0 else 2 * p)
    assert math.isclose(float(qa - qb), float(qa) - float(qb), rel_tol=1e-12, abs_tol=1e-9)


def test_as_quantity():
    assert as_quantity("4pi") == 4 * PI
    assert as_quantity(3) == ExactQuantity(3)
    with pytest.raises(DomainError):
        as_quantity(1.5)
