from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from hermlab.analytic import dirichlet_L
from hermlab.errors import InputError, RamifiedTwo
from hermlab.field_data import (
    Discriminant,
    LocalQuadExt,
    class_number,
    classify_prime,
    factorize,
    is_fundamental,
    is_prime,
    kronecker,
    local_model,
    ramified_prime_count,
    ramified_primes,
    smallest_nonresidue,
    unit_count,
    valuation,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23]


def test_primes_and_factorization():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(-15) == {3: 1, 5: 1}


@given(st.integers(1, 10**6))
def test_factorization_multiplies_back(n):
    out = 1
    for p, e in factorize(n).items():
        assert is_prime(p)
        out *= p**e
    assert out == n


def test_valuation():
    assert valuation(Fraction(18, 5), 3) == 2
    assert valuation(Fraction(2, 27), 3) == -3
    with pytest.raises(ValueError):
        valuation(0, 3)


def test_kronecker_known_values():
    assert [kronecker(-4, n) for n in range(1, 9)] == [1, 0, -1, 0, 1, 0, -1, 0]
    assert [kronecker(-7, n) for n in range(1, 8)] == [1, 1, -1, 1, -1, -1, 0]
    assert kronecker(-3, 2) == -1 and kronecker(5, 2) == -1 and kronecker(-7, 2) == 1


@given(st.sampled_from([-3, -4, -7, -8, -15, -20, -23, -24]), st.integers(1, 200), st.integers(1, 200))
def test_kronecker_is_multiplicative(d, a, b):
    assert kronecker(d, a * b) == kronecker(d, a) * kronecker(d, b)


def test_smallest_nonresidue():
    assert smallest_nonresidue(3) == 2
    assert smallest_nonresidue(7) == 3
    assert smallest_nonresidue(23) == 5


def test_discriminants():
    for d in (-3, -4, -7, -8, -15, -23, -24, -20):
        assert is_fundamental(d)
    # only imaginary quadratic fields are in scope
    for d in (-12, -16, 0, 1, 2, -1, 5, 12):
        assert not is_fundamental(d)
    with pytest.raises(InputError):
        Discriminant(-12)


def test_class_numbers_and_units():
    table = {-3: 1, -4: 1, -7: 1, -8: 1, -15: 2, -20: 2, -23: 3, -47: 5, -71: 7, -84: 4}
    for d, h in table.items():
        assert class_number(d) == h
    assert unit_count(-3) == 6 and unit_count(-4) == 4 and unit_count(-7) == 2


@pytest.mark.parametrize("d", [-3, -4, -7, -8, -15, -23, -47])
def test_class_number_formula(d):
    rhs = dirichlet_L(1, d).re
    with mpmath.workdps(30):
        lhs = 2 * mpmath.pi * class_number(d) / (unit_count(d) * mpmath.sqrt(abs(d)))
        assert abs(lhs - rhs) < 1e-8


def test_ramified_primes():
    assert ramified_primes(-15) == [3, 5]
    assert ramified_prime_count(-24) == 2
    assert ramified_primes(-4) == [2]


def test_classify_prime():
    assert classify_prime(-7, 2).splitting == "split"
    assert classify_prime(-7, 3).splitting == "inert"
    assert classify_prime(-7, 7).splitting == "ramified"
    assert classify_prime(-3, 2).splitting == "inert"
    with pytest.raises(RamifiedTwo):
        classify_prime(-4, 2)
    with pytest.raises(InputError):
        classify_prime(-7, 9)


@pytest.mark.parametrize("p", SMALL_PRIMES)
@pytest.mark.parametrize("splitting", ["inert", "split", "ramified"])
def test_local_models(p, splitting):
    if p == 2 and splitting == "ramified":
        with pytest.raises(RamifiedTwo):
            local_model(p, splitting)
        return
    ext = local_model(p, splitting)
    D = ext.delta_sq
    chi = kronecker(int(D * (4 if p == 2 else 1)), p) if D.denominator == 1 else None
    if splitting == "ramified":
        assert valuation(D, p) == 1
        assert ext.different_exponent == 1
    elif splitting == "split":
        assert D == 1
    else:
        assert chi == -1 if p != 2 else D == -3
    tr, nm = ext.theta()
    # theta^2 = tr theta - nm, checked through delta coordinates
    a, b = ext.from_theta(0, 1)
    sq = (a * a + b * b * D, 2 * a * b)
    rhs = (tr * a - nm, tr * b)
    assert sq == rhs


@given(st.sampled_from([(3, "inert"), (2, "inert"), (2, "split"), (7, "ramified")]), st.fractions(), st.fractions())
def test_theta_coordinates_round_trip(model, a, b):
    ext = local_model(*model)
    assert ext.from_theta(*ext.to_theta(a, b)) == (a, b)


def test_bad_model():
    with pytest.raises(InputError):
        LocalQuadExt(4, "inert", -1)
    with pytest.raises(InputError):
        LocalQuadExt(3, "wild", -1)
