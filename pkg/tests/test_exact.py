import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import positive_rationals, rationals
from gonlab.exact import LogReal, as_fraction, format_logreal, format_rational, log_of, parse_logreal, parse_rational

logreals = st.builds(LogReal, positive_rationals(), st.integers(1, 6), rationals())


def test_normal_form_drops_divisor_of_zero_log():
    x = LogReal(1, 7, Fraction(2, 3))
    assert (x.r, x.n, x.q) == (1, 1, Fraction(2, 3))
    assert x.is_rational()


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        LogReal(0)
    with pytest.raises(ValueError):
        LogReal(2, 0)


def test_float_value():
    assert float(LogReal(8, 3, Fraction(1, 2))) == pytest.approx(math.log(2) + 0.5)


def test_log_identities_are_exact():
    assert log_of(6) == log_of(2) + log_of(3)
    assert log_of(8) / 3 == log_of(2)
    assert log_of(Fraction(1, 5)) == -log_of(5)
    assert log_of(2) * Fraction(3, 2) == LogReal(8, 2)


def test_sign_separates_close_values():
    # log(2) and 0.6931471805599453 (the nearest double) differ below float resolution
    near = Fraction(6931471805599453, 10**16)
    assert log_of(2) > near
    assert log_of(2) < near + Fraction(1, 10**15)


def test_interval_encloses_value():
    x = LogReal(Fraction(7, 3), 2, Fraction(-1, 9))
    iv = x.interval(200)
    with mpmath.workprec(400):
        ref = mpmath.log(mpmath.mpf(7) / 3) / 2 - mpmath.mpf(1) / 9
        assert iv.a <= ref <= iv.b
    assert x.width(200) < 1e-55


@given(logreals, logreals)
def test_addition_commutes_and_cancels(a, b):
    assert a + b == b + a
    assert (a + b) - b == a
    assert (a - a).sign() == 0


@given(logreals, logreals)
def test_order_matches_float_when_separated(a, b):
    fa, fb = float(a), float(b)
    if abs(fa - fb) > 1e-9:
        assert (a < b) == (fa < fb)


@given(logreals)
def test_text_round_trip(x):
    y = parse_logreal(format_logreal(x))
    assert (y.r, y.n, y.q) == (x.r, x.n, x.q)


@given(rationals(1000, 97))
def test_rational_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_format_examples():
    assert format_logreal(LogReal(5, 2, Fraction(-3, 7))) == "log(5)/2-3/7"
    assert format_logreal(LogReal.rational(Fraction(-1, 2))) == "-1/2"
    assert format_logreal(LogReal(7, 1, 3)) == "log(7)+3"


def test_as_fraction_accepts_strings_and_ints():
    assert as_fraction("3/6") == Fraction(1, 2)
    assert as_fraction(4) == 4
