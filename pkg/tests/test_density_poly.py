from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from hermlab.density import local_density
from hermlab.density_poly import (
    augment_hyperbolic,
    augment_unit,
    interpolate,
    newton_coefficients,
    unit_augment_check,
    unit_augment_value,
)
from hermlab.errors import DegreeCapExceeded, RamifiedUnsupported
from hermlab.field_data import local_model
from hermlab.hermitian import diagonal, standard_hyperbolic


@pytest.fixture(scope="module")
def i3():
    return local_model(3, "inert")


@pytest.fixture(scope="module")
def s2():
    return local_model(2, "split")


@pytest.fixture(scope="module")
def r7():
    return local_model(7, "ramified")


def test_augment_hyperbolic_shapes(i3):
    S = diagonal(i3, [1])
    assert augment_hyperbolic(S, 0) == S
    A = augment_hyperbolic(S, 1)
    assert A.n == 3
    assert A.entries[1][2] == standard_hyperbolic(i3).entries[0][1]
    assert A.entries[0][1].is_zero()
    assert augment_hyperbolic(S, 3).n == 7


def test_augment_unit(i3, r7):
    S = diagonal(i3, [1])
    assert augment_unit(S, 2) == diagonal(i3, [1, 1, 1])
    assert augment_unit(S, 0) == S
    with pytest.raises(RamifiedUnsupported):
        augment_unit(standard_hyperbolic(r7), 1)


@pytest.mark.parametrize(
    "key, t, coeffs",
    [
        (("inert", 3), 1, ["1", "1/3"]),
        (("inert", 3), 3, ["1", "-2/3", "-1/3"]),
        (("inert", 3), 9, ["1", "-2/3", "2/3", "1/3"]),
        (("split", 2), 1, ["1", "-1/2"]),
        (("split", 2), 2, ["1", "1/2", "-1/2"]),
        (("split", 2), 4, ["1", "1/2", "1/2", "-1/2"]),
    ],
)
def test_frozen_rank_one_polynomials(key, t, coeffs):
    ext = local_model(key[1], key[0])
    P = interpolate(diagonal(ext, [1]), diagonal(ext, [t]))
    assert P.to_json() == coeffs


@pytest.mark.parametrize("t, coeffs", [(1, ["1", "-1/49"]), (7, ["1", "6/49", "-1/343"])])
def test_frozen_ramified_polynomials(r7, t, coeffs):
    P = interpolate(standard_hyperbolic(r7), diagonal(r7, [t]))
    assert P.to_json() == coeffs


def test_polynomial_reproduces_nodes(i3):
    S, T = diagonal(i3, [1]), diagonal(i3, [3])
    P = interpolate(S, T)
    assert P(F(1)) == 0
    assert P(F(1, 9)) == local_density(augment_hyperbolic(S, 1), T).value > 0
    for r, v in P.nodes:
        assert P(F(1, 9**r)) == v
    assert P.degree_certified_to == 2
    assert len(P.nodes) >= P.degree + 3


def test_base_value(i3):
    assert interpolate(diagonal(i3, [1]), diagonal(i3, [1]))(F(1)) == F(4, 3)


def test_non_integral_target_gives_zero_polynomial(i3):
    P = interpolate(diagonal(i3, [1]), diagonal(i3, [F(1, 3)]))
    assert P.is_zero()


def test_degree_cap(i3):
    with pytest.raises(DegreeCapExceeded):
        interpolate(diagonal(i3, [1]), diagonal(i3, [9]), max_degree=1)


def test_derivative(i3):
    P = interpolate(diagonal(i3, [1]), diagonal(i3, [9]))
    assert P.derivative().to_json() == ["-2/3", "4/3", "1"]


@pytest.mark.parametrize("key", [("inert", 3), ("split", 2)])
def test_unit_augmentation_rule(key):
    ext = local_model(key[1], key[0])
    S, T = diagonal(ext, [1]), diagonal(ext, [1])
    P = interpolate(S, T)
    detail = []
    assert unit_augment_check(S, T, P, r_max=3, detail=detail)
    assert [r for r, _, _ in detail] == [0, 1, 2, 3]
    q = ext.q
    expected = F(1, -q) if key[0] == "inert" else F(1, q)
    assert unit_augment_value(P, 1) == P(expected)


def test_unit_rule_refuses_ramified(r7):
    P = interpolate(standard_hyperbolic(r7), diagonal(r7, [1]))
    with pytest.raises(RamifiedUnsupported):
        unit_augment_value(P, 1)


fracs = st.fractions(min_value=-20, max_value=20, max_denominator=30)


@given(st.lists(fracs, min_size=1, max_size=6))
def test_newton_recovers_polynomial(coeffs):
    xs = [F(1, 3 ** (2 * r)) for r in range(len(coeffs))]

    def ev(x):
        acc = F(0)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    assert newton_coefficients(xs, [ev(x) for x in xs]) == coeffs
