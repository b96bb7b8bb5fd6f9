from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mockdim.qseries import (APPROX, EXACT, LaurentData, QSeries, RingMismatchError,
                             TruncationError, principal_part, series_compose_laurent)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def series(draw, lo=-2, hi=10):
    start = draw(st.integers(lo, 2))
    prec = draw(st.integers(start + 3, hi))
    return QSeries(draw(st.lists(fractions, min_size=prec - start, max_size=prec - start)), start, prec)


def unit_series(prec=12):
    return st.lists(fractions, min_size=prec - 1, max_size=prec - 1).map(
        lambda cs: QSeries([1] + cs, 0, prec))


def test_coefficient_past_window_raises():
    f = QSeries([1, 2, 3], 0, 3)
    assert f[2] == 3
    with pytest.raises(TruncationError):
        f[3]


def test_precision_of_product_is_valuation_shifted():
    f = QSeries.from_dict({-1: 1, 2: 5}, 4)
    g = QSeries.from_dict({1: 1}, 3)
    h = f * g
    assert h.precision == 2  # min(4 + 1, 3 - 1)
    assert h.terms() == {0: 1}


def test_fractional_grid_alignment():
    f = QSeries.from_dict({Fraction(1, 2): 1}, 3, h=2)
    g = QSeries.from_dict({Fraction(1, 3): 1}, 3, h=3)
    s = f * g
    assert s.h == 6
    assert s[Fraction(5, 6)] == 1


def test_mixing_rings_is_an_error():
    a = QSeries([1, 1], 0, 2)
    b = QSeries([1, 1], 0, 2, ring=APPROX)
    with pytest.raises(RingMismatchError):
        a + b


def test_inverse_of_one_minus_q():
    f = QSeries([1, -1], 0, 10)
    assert f.inverse() == QSeries([1] * 10, 0, 10)


def test_truncate_cannot_extend():
    with pytest.raises(TruncationError):
        QSeries([1], 0, 2).truncate(5)


def test_map_exponents_and_theta():
    f = QSeries.from_dict({1: 2, 2: 3}, 4)
    assert f.map_exponents(3).terms() == {3: 2, 6: 3}
    assert f.theta().terms() == {1: 2, 2: 6}


def test_compose_reciprocal_of_q():
    # 1/z at z = q - q^2 is q^-1 (1 + q + q^2 + ...)
    s = QSeries([0, 1, -1], 0, 8)
    r = series_compose_laurent(LaurentData({-1: 1}), s)
    assert r.precision == 6
    assert all(r[n] == 1 for n in range(-1, 6))


def test_compose_requires_positive_valuation():
    with pytest.raises(ValueError):
        series_compose_laurent(LaurentData({1: 1}), QSeries([1, 1], 0, 4))


def test_principal_part():
    pp = principal_part(QSeries.from_dict({-2: 3, 0: 7, 1: 1}, 5))
    assert pp.polar == {-2: 3}
    assert pp.constant == 7


@given(series(), series(), series())
@settings(max_examples=40, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(unit_series())
@settings(max_examples=40, deadline=None)
def test_inverse_property(u):
    one = u * u.inverse()
    assert one[0] == 1
    assert all(one[n] == 0 for n in range(1, int(one.precision)))


@given(st.lists(fractions, min_size=6, max_size=6))
@settings(max_examples=30, deadline=None)
def test_compose_linear_term_is_identity(cs):
    s = QSeries([0, 1] + cs, 0, 8)
    assert series_compose_laurent(LaurentData({1: 1}), s) == s


def test_approx_ring_tolerance():
    a = QSeries([1.0, 2.0], 0, 2, ring=APPROX)
    b = QSeries([1.0 + 1e-14, 2.0], 0, 2, ring=APPROX)
    assert a == b
    assert EXACT.convert(0.5) == Fraction(1, 2)
