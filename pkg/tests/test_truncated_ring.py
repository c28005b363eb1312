from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hermlab.errors import BudgetExceeded, NotIntegral
from hermlab.field_data import local_model
from hermlab.hermitian import element
from hermlab.truncated_ring import TruncatedRing, reduce_rational

RINGS = [(3, "inert", 2), (2, "inert", 3), (2, "split", 2), (5, "split", 1), (7, "ramified", 1), (3, "ramified", 2)]


def test_reduce_rational():
    assert reduce_rational(Fraction(1, 2), 9, 3) == 5
    with pytest.raises(NotIntegral):
        reduce_rational(Fraction(1, 3), 9, 3)


def test_level_limits():
    with pytest.raises(BudgetExceeded):
        TruncatedRing(local_model(3, "inert"), 40)
    with pytest.raises(ValueError):
        TruncatedRing(local_model(3, "inert"), 0)


@pytest.mark.parametrize("spec", RINGS)
def test_vector_ops_match_scalar_ops(spec):
    p, sp, k = spec
    R = TruncatedRing(local_model(p, sp), k)
    x, y = R.all_elements()
    assert len(x) == R.size
    rng = np.random.default_rng(0)
    idx = rng.integers(0, R.size, size=40)
    jdx = rng.integers(0, R.size, size=40)
    mx, my = R.vmul(x[idx], y[idx], x[jdx], y[jdx])
    cx, cy = R.vconj(x[idx], y[idx])
    nm = R.vnorm(x[idx], y[idx])
    tr = R.vtrace(x[idx], y[idx])
    for t, (i, j) in enumerate(zip(idx, jdx)):
        u, v = (int(x[i]), int(y[i])), (int(x[j]), int(y[j]))
        assert R.mul(u, v) == (mx[t], my[t])
        assert R.conj(u) == (cx[t], cy[t])
        assert R.norm(u) == nm[t]
        assert R.trace(u) == tr[t]


@given(st.sampled_from(RINGS), st.data())
def test_ring_identities(spec, data):
    p, sp, k = spec
    R = TruncatedRing(local_model(p, sp), k)
    M = R.modulus
    el = st.tuples(st.integers(0, M - 1), st.integers(0, M - 1))
    u, v, w = data.draw(el), data.draw(el), data.draw(el)
    assert R.mul(R.mul(u, v), w) == R.mul(u, R.mul(v, w))
    assert R.mul(u, v) == R.mul(v, u)
    assert R.conj(R.conj(u)) == u
    assert R.conj(R.mul(u, v)) == R.mul(R.conj(u), R.conj(v))
    assert R.norm(R.mul(u, v)) == R.norm(u) * R.norm(v) % M
    assert R.mul(u, R.conj(u)) == R.embed(R.norm(u))
    assert R.add(R.sub(u, v), v) == u


def test_field_embedding_is_a_homomorphism():
    ext = local_model(2, "inert")
    R = TruncatedRing(ext, 3)
    a = element(ext, Fraction(1, 2), Fraction(1, 2))
    b = element(ext, 3, -1)
    assert R.from_field(a * b) == R.mul(R.from_field(a), R.from_field(b))
    assert R.from_field(a.conj()) == R.conj(R.from_field(a))
    assert R.norm(R.from_field(a)) == reduce_rational(a.norm(), R.modulus, 2)


def test_units_and_enumeration():
    R = TruncatedRing(local_model(3, "inert"), 1)
    units = [u for u in R.enumerate() if R.is_unit(u)]
    assert len(units) == 8  # F_9^x
    Rr = TruncatedRing(local_model(7, "ramified"), 1)
    assert sum(1 for u in Rr.enumerate() if Rr.is_unit(u)) == 42
    assert R.reduce_to((10, 11), 1) == (1, 2)
