import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import binom

from robustcp.target import (
    TargetPolynomial,
    deficit,
    derivatives_at_one,
    eval_pq,
    eval_q_m,
    flatness_order,
    half_binomials,
    q_m_coefficients,
)

ORDERS = (3, 5, 7, 9)


def test_low_order_coefficients_exact():
    assert q_m_coefficients(3).exact == (Fraction(1), Fraction(3, 2))
    assert q_m_coefficients(5).exact == (Fraction(1), Fraction(5, 2), Fraction(15, 8))


@pytest.mark.parametrize("m", [3, 5, 7, 9, 21, 201])
def test_coefficients_match_generalised_binomial(m):
    poly = q_m_coefficients(m)
    expected = binom(m / 2, np.arange((m + 1) // 2))
    assert np.all(np.isfinite(poly.coeffs))
    assert np.allclose(poly.coeffs, expected, rtol=1e-12, atol=0)
    assert [float(c) for c in half_binomials(m)] == pytest.approx(list(expected), rel=1e-12)


@pytest.mark.parametrize("m", ORDERS)
def test_value_at_one(m):
    assert eval_q_m(q_m_coefficients(m), 1.0) == 1.0


@pytest.mark.parametrize("m", ORDERS)
def test_vanishing_derivatives_exact(m):
    poly = q_m_coefficients(m)
    d = derivatives_at_one(poly, (m + 1) // 2)
    assert all(x == 0 for x in d[: (m - 1) // 2])
    assert d[(m - 1) // 2] != 0


@pytest.mark.parametrize("m", ORDERS)
def test_derivatives_against_high_precision(m):
    mpmath.mp.dps = 50
    coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in q_m_coefficients(m).exact]

    def q(p):
        return sum(c * (1 - p * p) ** k * p ** (m - 2 * k) for k, c in enumerate(coeffs))

    exact = derivatives_at_one(q_m_coefficients(m), (m + 1) // 2)
    for j, value in enumerate(exact, start=1):
        assert float(mpmath.diff(q, 1, j)) == pytest.approx(float(value), abs=1e-20 + 1e-12 * abs(float(value)))


@pytest.mark.parametrize("m", ORDERS)
def test_deficit_without_cancellation(m):
    mpmath.mp.dps = 50
    poly = q_m_coefficients(m)
    coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in poly.exact]
    for t in (1e-2, 1e-4, 1e-6):
        p = mpmath.mpf(1) - mpmath.mpf(t)
        ref = 1 - sum(c * (1 - p * p) ** k * p ** (m - 2 * k) for k, c in enumerate(coeffs))
        assert float(deficit(poly, 1 - t)) == pytest.approx(float(ref), rel=1e-6)


@pytest.mark.parametrize("m", ORDERS)
def test_flatness_order(m):
    assert abs(flatness_order(q_m_coefficients(m)) - (m + 1) / 2) <= 0.1


@pytest.mark.parametrize("m", (3, 5, 7, 9, 201))
def test_bounded_on_unit_interval(m):
    p = np.linspace(0, 1, 10_000)
    v = eval_q_m(q_m_coefficients(m), p)
    assert np.all(v >= -1e-12) and np.all(v <= 1 + 1e-9)


@pytest.mark.parametrize("m", ORDERS)
def test_monotone_increasing(m):
    v = eval_q_m(q_m_coefficients(m), np.linspace(0, 1, 2001))
    assert np.all(np.diff(v) >= -1e-14)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(ORDERS), st.floats(0, 1))
def test_unit_circle_matches_free_form(m, p):
    poly = q_m_coefficients(m)
    assert eval_q_m(poly, p) == pytest.approx(float(eval_pq(poly, p, math.sqrt(1 - p * p))), abs=1e-12)


def test_rejects_out_of_range_p():
    with pytest.raises(ValueError):
        eval_q_m(q_m_coefficients(3), 1.5)
    with pytest.raises(ValueError):
        eval_q_m(q_m_coefficients(3), -0.1)


def test_custom_target_validation():
    t = TargetPolynomial.custom([1.0, 2.0, 0.5])
    assert t.order == 5
    with pytest.raises(ValueError):
        TargetPolynomial.custom([0.9, 1.0])
    with pytest.raises(ValueError):
        TargetPolynomial(5, (1.0, 2.0))
    with pytest.raises(ValueError):
        q_m_coefficients(4)
