import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qhodge.series import QSeries, rat_from_str, rat_to_str

from conftest import random_series


def q(j=1, num_vars=1, order=6):
    return QSeries.variable(num_vars, order, j)


def const(c, num_vars=1, order=6):
    return QSeries.constant(num_vars, order, c)


class TestArithmetic:
    def test_difference_of_squares(self):
        q1 = q(order=2)
        assert (1 + q1) * (1 - q1) == 1 - q1 * q1

    def test_annihilation(self):
        q1 = q(order=4)
        assert (q1 * 0).is_zero()
        assert (q1 * QSeries.zero(1, 4)).is_zero()

    def test_binomial_expansion(self):
        q1, q2 = q(1, 2, 2), q(2, 2, 2)
        square = (q1 + q2) ** 2
        assert square.coefficient((2, 0)) == 1
        assert square.coefficient((1, 1)) == 2
        assert square.coefficient((0, 2)) == 1

    def test_min_order_truncation(self):
        a = QSeries.variable(1, 6, 1)
        b = QSeries.variable(1, 3, 1)
        assert (a * b).order == 3
        assert (a + b).order == 3

    def test_var_count_mismatch(self):
        with pytest.raises(ValueError):
            QSeries.variable(1, 3, 1) * QSeries.variable(2, 3, 1)


class TestExpLog:
    def test_exp_zero(self):
        assert QSeries.zero(2, 5).exp() == const(1, 2, 5)

    def test_exp_taylor(self):
        e = QSeries.variable(1, 3, 1).exp()
        assert e.coefficient((0,)) == 1
        assert e.coefficient((1,)) == 1
        assert e.coefficient((2,)) == Fraction(1, 2)
        assert e.coefficient((3,)) == Fraction(1, 6)

    def test_log_mercator(self):
        l = (1 + QSeries.variable(1, 3, 1)).log()
        assert l.coefficient((1,)) == 1
        assert l.coefficient((2,)) == Fraction(-1, 2)
        assert l.coefficient((3,)) == Fraction(1, 3)

    def test_constant_term_violations(self):
        with pytest.raises(ValueError):
            (1 + q()).exp()
        with pytest.raises(ValueError):
            q().log()

    def test_roundtrip_random(self):
        rng = random.Random(7)
        for _ in range(25):
            a = random_series(rng, 2, 5, zero_constant=True)
            assert a.exp().log() == a


class TestTheta:
    def test_monomial_eigenvalue(self):
        m = QSeries.monomial(2, 4, (2, 1))
        assert m.theta(1) == m * 2

    def test_independent_variable(self):
        assert q(1, 2, 3).theta(2).is_zero()

    def test_theta_of_exp(self):
        e = QSeries.variable(1, 3, 1).exp()
        expected = {(1,): Fraction(1), (2,): Fraction(1), (3,): Fraction(1, 2)}
        assert e.theta(1) == QSeries(1, 3, expected)

    def test_derivation_random(self):
        rng = random.Random(11)
        for _ in range(25):
            a = random_series(rng, 2, 5)
            b = random_series(rng, 2, 5)
            lhs = (a * b).theta(1)
            rhs = a.theta(1) * b + a * b.theta(1)
            assert lhs == rhs


class TestComposeInverse:
    def test_compose_linear(self):
        f = q(1, 1, 4) + q(1, 1, 4) ** 2
        sub = QSeries.variable(2, 4, 2)
        g = f.compose([sub])
        assert g == sub + sub * sub

    def test_inverse(self):
        f = 1 + q(order=5)
        assert f * f.inverse() == const(1, 1, 5)

    def test_compose_requires_zero_constant(self):
        with pytest.raises(ValueError):
            q(1, 1, 3).compose([const(1, 1, 3)])


class TestSerialization:
    def test_rational_strings(self):
        assert rat_from_str("3/4") == Fraction(3, 4)
        assert rat_from_str("-7") == Fraction(-7)
        assert rat_to_str(Fraction(-3, 4)) == "-3/4"
        with pytest.raises(ValueError):
            rat_from_str("1/0")

    def test_payload_roundtrip(self):
        rng = random.Random(3)
        a = random_series(rng, 3, 4)
        assert QSeries.from_payload(3, 4, a.to_payload()) == a


# hypothesis property suite: ring axioms at fixed truncation

coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=6)


@st.composite
def small_series(draw, num_vars=2, order=4, zero_constant=False):
    n_terms = draw(st.integers(min_value=0, max_value=5))
    terms = {}
    for _ in range(n_terms):
        alpha = tuple(draw(st.integers(min_value=0, max_value=order))
                      for _ in range(num_vars))
        if sum(alpha) > order or (zero_constant and sum(alpha) == 0):
            continue
        terms[alpha] = draw(coeffs)
    return QSeries(num_vars, order, terms)


@settings(max_examples=60, derandomize=True)
@given(small_series(), small_series(), small_series())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a + (b + c) == (a + b) + c


@settings(max_examples=60, derandomize=True)
@given(small_series(zero_constant=True))
def test_log_exp_identity(a):
    assert a.exp().log() == a


@settings(max_examples=60, derandomize=True)
@given(small_series(), small_series())
def test_theta_is_derivation(a, b):
    for j in (1, 2):
        assert (a * b).theta(j) == a.theta(j) * b + a * b.theta(j)
