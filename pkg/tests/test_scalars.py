import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qcross.scalars import (GAMMA, LAM, ONE, ZERO, NumericParams, PoleError, QScalar, canonicalize, evaluate,
                            special)

P = NumericParams(0.5)


def test_canonicalize_lambda():
    assert canonicalize({2: 1, -2: -1}, {0: 1}) == LAM


def test_canonicalize_zero():
    assert canonicalize({}, {0: 7}) == ZERO
    assert canonicalize({0: 0}, {0: 7}).is_zero()


def test_canonicalize_cancels_common_factor():
    assert canonicalize({4: 1, 0: -1}, {2: 1, 0: -1}) == canonicalize({2: 1, 0: 1}, {0: 1})


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        canonicalize({0: 1}, {})


def test_evaluate_examples():
    assert evaluate(LAM, P) == pytest.approx(-1.5)
    assert evaluate(GAMMA, P) == pytest.approx(4 / 3)
    assert evaluate(ONE, NumericParams(0.3)) == 1.0


def test_pole():
    x = ONE / canonicalize({0: 1, 2: -1}, {0: 1})    # 1/(1 - s^2) has a pole at q = 1 only
    assert evaluate(x, P) == pytest.approx(2.0)
    y = canonicalize({0: 1}, {0: 1, 2: -4})            # pole at q = 1/4
    with pytest.raises(PoleError, match="pole at chosen q"):
        evaluate(y, NumericParams(0.25))


def test_special_values():
    assert special("lambda_n", 0, None, P) == 0.0
    assert special("alpha_k", 0, 1.0, NumericParams(0.7)) == pytest.approx(math.sqrt(2))
    assert special("lambda_n", 1, None, P) == pytest.approx(0.8660254037844386)
    with pytest.raises(ValueError):
        special("lambda_n", -1, None, P)
    with pytest.raises(ValueError):
        special("beta_k", 1, 0.0, P)


def test_lambda_inverse_is_one():
    assert LAM * LAM.inverse() == ONE


def test_bad_q():
    with pytest.raises(ValueError):
        NumericParams(1.0)


laurent = st.dictionaries(st.integers(-4, 4), st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5)),
                          min_size=1, max_size=3)


def scalar(num, den):
    try:
        return canonicalize(num, den)
    except ZeroDivisionError:
        return ONE


@given(laurent, laurent, laurent, laurent, laurent, laurent)
def test_field_axioms(n1, d1, n2, d2, n3, d3):
    a, b, c = scalar(n1, d1), scalar(n2, d2), scalar(n3, d3)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if not a.is_zero():
        assert a * a.inverse() == ONE


@given(laurent, laurent, laurent, laurent)
def test_evaluate_is_homomorphism(n1, d1, n2, d2):
    a, b = scalar(n1, d1), scalar(n2, d2)
    try:
        va, vb, vab = evaluate(a, P), evaluate(b, P), evaluate(a * b, P)
    except PoleError:
        return
    assert vab == pytest.approx(va * vb, rel=1e-12, abs=1e-12)
    assert evaluate(a + b, P) == pytest.approx(va + vb, rel=1e-12, abs=1e-12)


def test_exact_coefficients():
    x = QScalar.const(Fraction(1, 3))
    assert x * 3 == ONE
