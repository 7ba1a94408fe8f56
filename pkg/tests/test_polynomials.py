import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.errors import InexactDivisionError, InterpolationError
from modules.polynomials import IntPolyQ, LaurentPolyV, interpolate_exact

coeff_lists = st.lists(st.integers(-5, 5), max_size=5)


def test_trimming_and_degree():
    assert IntPolyQ((1, 2, 0, 0)).coeffs == (1, 2)
    assert IntPolyQ().degree == -1
    assert IntPolyQ.monomial(3).degree == 3


def test_arithmetic():
    q_minus_1 = IntPolyQ((-1, 1))
    assert q_minus_1 * q_minus_1 == IntPolyQ((1, -2, 1))
    assert (q_minus_1 ** 2)(3) == 4
    assert IntPolyQ((1, -2, 1)).exact_div(q_minus_1) == q_minus_1
    with pytest.raises(InexactDivisionError):
        IntPolyQ((1, 0, 1)).exact_div(q_minus_1)


def test_str():
    assert str(IntPolyQ((-1, 1))) == "q - 1"
    assert str(IntPolyQ((0, 0, 2))) == "2*q^2"
    assert str(IntPolyQ()) == "0"


@settings(max_examples=50, deadline=None)
@given(coeff_lists, coeff_lists, st.integers(2, 13))
def test_multiplication_agrees_with_evaluation(a, b, x):
    pa, pb = IntPolyQ(a), IntPolyQ(b)
    assert (pa * pb)(x) == pa(x) * pb(x)


def test_laurent_normalization_and_bar():
    x = LaurentPolyV(-2, (0, 1, 0, -1, 0))
    assert (x.low, x.coeffs) == (-1, (1, 0, -1))
    assert x.bar() == LaurentPolyV(-1, (-1, 0, 1))
    assert x.bar().bar() == x
    assert LaurentPolyV(5, (0, 0)) == LaurentPolyV()


def test_substitution():
    lp = IntPolyQ((-1, 1)).to_laurent()
    assert lp == LaurentPolyV(0, (-1, 0, 1))
    assert lp.to_int_poly_q() == IntPolyQ((-1, 1))
    with pytest.raises(ValueError):
        LaurentPolyV.monomial(-2).to_int_poly_q()
    with pytest.raises(ValueError):
        LaurentPolyV.monomial(1).to_int_poly_q()


def test_laurent_product_and_shift():
    v_plus_inv = LaurentPolyV.monomial(1) + LaurentPolyV.monomial(-1)
    assert v_plus_inv * v_plus_inv == LaurentPolyV(-2, (1, 0, 2, 0, 1))
    assert LaurentPolyV.one().shift(-3) == LaurentPolyV.monomial(-3)
    assert str(LaurentPolyV.monomial(-1) - LaurentPolyV.monomial(1)) == "-v + v^-1"


@pytest.mark.parametrize("points,expected", [
    ([(2, 3), (3, 4)], IntPolyQ((1, 1))),
    ([(2, 1)], IntPolyQ((1,))),
    ([(2, 1), (3, 2), (5, 4)], IntPolyQ((-1, 1))),
    ([(2, 3), (3, 8), (5, 24)], IntPolyQ((-1, 0, 1))),
])
def test_interpolate_exact(points, expected):
    assert interpolate_exact(points) == expected


def test_interpolate_rejects_fractions():
    with pytest.raises(InterpolationError):
        interpolate_exact([(2, 0), (3, 1), (5, 0)])
