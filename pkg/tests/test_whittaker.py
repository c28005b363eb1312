from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from hermlab.errors import InputError
from hermlab.field_data import local_model
from hermlab.hermitian import almost_self_dual_gram, diagonal, self_dual_gram, standard_hyperbolic
from hermlab.values import LogLinear, PowerProduct
from hermlab.weil_index import ONE
from hermlab.whittaker import (
    ALMOST_SELF_DUAL_TARGET,
    SELF_DUAL_TARGET,
    functional_equation_probe,
    is_self_dual,
    normalize,
    poly_divide,
    raw_whittaker_constant,
    rank1_closed_form,
    whittaker_derivative,
)

HALF = F(1, 2)


@pytest.fixture(scope="module")
def i3():
    return local_model(3, "inert")


@pytest.fixture(scope="module")
def r7():
    return local_model(7, "ramified")


def test_closed_form_values():
    f = rank1_closed_form(5, 5)
    assert f(HALF) == 6
    assert f(F(-1, 2)) == 6
    assert rank1_closed_form(7, 5)(F(3, 2)) == 1
    g = rank1_closed_form(9, 3)
    for s in [F(0), HALF, F(1), F(3, 2)]:
        assert g(s) == g(-s)
    assert abs(g(0.3) - g(-0.3)) < 1e-12


def test_inert_centre_value_and_derivative(i3):
    W = normalize(self_dual_gram(i3, 2), diagonal(i3, [3]))
    assert W.denominator_kind == SELF_DUAL_TARGET
    assert W.evaluate(HALF) == 4
    assert whittaker_derivative(W, HALF) == LogLinear.make({3: 2})


@pytest.mark.parametrize("key", [("inert", 3), ("inert", 5), ("split", 2), ("split", 3)])
def test_derivative_at_centre_for_valuation_one(key):
    ext = local_model(key[1], key[0])
    p = ext.p
    W = normalize(self_dual_gram(ext, 2), diagonal(ext, [p]))
    assert whittaker_derivative(W, HALF) == LogLinear.make({p: p - 1})


def test_self_dual_target_is_identically_one(i3):
    W = normalize(self_dual_gram(i3, 3), self_dual_gram(i3, 2))
    assert W.is_identically_one()
    assert whittaker_derivative(W, HALF).is_zero()
    assert all(r == 1 for r in functional_equation_probe(W, [F(1, 4), HALF, 1]))


def test_ramified_almost_self_dual(r7):
    W = normalize(standard_hyperbolic(r7), diagonal(r7, [1]))
    assert W.denominator_kind == ALMOST_SELF_DUAL_TARGET
    assert W.evaluate(HALF) == 1
    assert almost_self_dual_gram(r7, 3).n == 3


def test_probe_is_constant_for_rank_one(i3):
    W = normalize(self_dual_gram(i3, 2), diagonal(i3, [9]))
    ratios = functional_equation_probe(W, [F(1, 4), HALF, F(1)])
    assert all(abs(float(r) - 1) < 1e-12 for r in ratios)


def test_rejects_non_self_dual_source(i3):
    with pytest.raises(InputError):
        normalize(diagonal(i3, [1, 3]), diagonal(i3, [1]))
    with pytest.raises(InputError):
        normalize(diagonal(i3, [1]), diagonal(i3, [1, 1]))


def test_self_dual_predicate(i3, r7):
    assert is_self_dual(self_dual_gram(i3, 3))
    assert is_self_dual(standard_hyperbolic(r7))
    assert not is_self_dual(diagonal(r7, [1, 1]))
    assert not is_self_dual(diagonal(i3, [3]))


def test_derivative_needs_half_integer(i3):
    W = normalize(self_dual_gram(i3, 2), diagonal(i3, [3]))
    with pytest.raises(InputError):
        whittaker_derivative(W, F(1, 3))


def test_raw_constant(i3, r7):
    assert raw_whittaker_constant(self_dual_gram(i3, 2), 2) == (ONE, PowerProduct.make(1))
    assert raw_whittaker_constant(self_dual_gram(i3, 2), 0)[1] == PowerProduct.make(1)
    gamma, value = raw_whittaker_constant(standard_hyperbolic(r7), 1)
    assert gamma == ONE
    assert value == 1


fr = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(st.lists(fr, min_size=1, max_size=4), st.lists(fr, min_size=1, max_size=4).filter(lambda d: d[-1] != 0))
def test_poly_divide_exact(q, d):
    num = [F(0)] * (len(q) + len(d) - 1)
    for i, a in enumerate(q):
        for j, b in enumerate(d):
            num[i + j] += a * b
    out = poly_divide(num, d)
    assert out is not None
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    qq = list(q)
    while len(qq) > 1 and qq[-1] == 0:
        qq.pop()
    assert out == qq


def test_poly_divide_inexact():
    assert poly_divide([F(1), F(0), F(1)], [F(1), F(1)]) is None
