from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hermlab.density import (
    count_by_enumeration,
    count_solutions,
    local_density,
    normalizer_exponent,
    split_blocks,
)
from hermlab.errors import BudgetExceeded, ContextMismatch, NotIntegral, NotStabilized
from hermlab.field_data import LocalQuadExt, classify_prime, local_model
from hermlab.hermitian import diagonal, direct_sum, element, empty, gram, standard_hyperbolic
from hermlab.truncated_ring import TruncatedRing

i3 = local_model(3, "inert")
r7 = local_model(7, "ramified")
i2 = local_model(2, "inert")


def test_base_values():
    one = diagonal(i3, [1])
    res = local_density(one, one)
    assert res.value == Fraction(4, 3)
    assert res.raw_counts == [(1, 4), (2, 12)]
    zero = local_density(one, diagonal(i3, [3]))
    assert zero.value == 0 and zero.stabilized_at <= 3


def test_ramified_values():
    H = standard_hyperbolic(r7)
    assert local_density(H, diagonal(r7, [1])).value == Fraction(48, 49)
    assert local_density(H, diagonal(r7, [7])).value == Fraction(384, 343)
    assert local_density(direct_sum(H, H), diagonal(r7, [1])).value == Fraction(2400, 2401)


def test_dyadic_values():
    H = standard_hyperbolic(i2)
    assert local_density(H, diagonal(i2, [1])).value == Fraction(3, 4)
    S = direct_sum(H, diagonal(i2, [1]))
    assert local_density(S, diagonal(i2, [1])).value == Fraction(9, 8)


def test_uniformizer_choice_does_not_matter():
    # the global model at 7 uses delta^2 = -7, the canonical one a different multiple of 7
    g = classify_prime(-7, 7)
    assert g.delta_sq != r7.delta_sq
    for ext in (g, r7):
        H = standard_hyperbolic(ext)
        assert local_density(H, diagonal(ext, [1])).value == Fraction(48, 49)
        assert local_density(H, diagonal(ext, [7])).value == Fraction(384, 343)


def test_short_circuits():
    assert local_density(diagonal(i3, [1]), empty(i3)).value == 1
    assert local_density(diagonal(i3, [1]), diagonal(i3, [1, 1])).value == 0
    assert local_density(diagonal(i3, [1]), diagonal(i3, [Fraction(1, 3)])).value == 0
    with pytest.raises(NotIntegral):
        local_density(diagonal(i3, [Fraction(1, 3)]), diagonal(i3, [1]))
    with pytest.raises(ContextMismatch):
        local_density(diagonal(i3, [1]), diagonal(local_model(5, "inert"), [1]))


def test_limits():
    with pytest.raises(BudgetExceeded):
        local_density(diagonal(i3, [1, 1]), diagonal(i3, [1]), budget=10, method="enumerate")
    with pytest.raises(NotStabilized) as info:
        local_density(diagonal(i3, [1]), diagonal(i3, [9]), k_max=3)
    assert info.value.values


def test_normalizer():
    assert normalizer_exponent(1, 1) == 1
    assert normalizer_exponent(3, 2) == 8


def test_block_splitting_preserves_determinant():
    S = gram(i3, [[1, (1, 1)], [(1, -1), 3]])
    blocks = split_blocks(S)
    d = Fraction(1)
    for b in blocks:
        d *= b.det()
    assert d == S.det()
    S2 = gram(i2, [[0, (Fraction(1, 2), Fraction(1, 2))], [(Fraction(1, 2), Fraction(-1, 2)), 0]])
    d2 = Fraction(1)
    for b in split_blocks(S2):
        d2 *= b.det()
    assert d2 == S2.det()


SMALL_CASES = [
    (i3, 1),
    (i3, 2),
    (i2, 2),
    (local_model(2, "split"), 2),
    (local_model(3, "split"), 1),
    (r7, 1),
    (local_model(3, "ramified"), 1),
]


@given(
    st.sampled_from(SMALL_CASES),
    st.lists(st.integers(0, 8), min_size=1, max_size=2),
    st.integers(0, 8),
    st.booleans(),
)
def test_fourier_count_matches_enumeration(case, diag, t, with_plane):
    ext, k = case
    ring = TruncatedRing(ext, k)
    if ext.ramified:
        S = standard_hyperbolic(ext) if with_plane or not diag else direct_sum(standard_hyperbolic(ext), diagonal(ext, diag[:1]))
    else:
        S = diagonal(ext, diag) if not with_plane else direct_sum(diagonal(ext, diag[:1]), standard_hyperbolic(ext))
    if S.n > 3:
        return
    T = diagonal(ext, [t])
    a = count_solutions(S, T, k)
    b = count_by_enumeration(S, T, ring)
    assert a == b


def test_forced_fourier_refuses_non_integral_gauss_sums():
    S = direct_sum(standard_hyperbolic(r7), diagonal(r7, [1]))
    with pytest.raises(ArithmeticError):
        count_solutions(S, diagonal(r7, [1]), 1, method="fourier")
    assert count_solutions(S, diagonal(r7, [1]), 1) == count_by_enumeration(S, diagonal(r7, [1]), TruncatedRing(r7, 1))


def test_fourier_matches_enumeration_rank_two_target():
    for ext in (i3, local_model(3, "split")):
        S = diagonal(ext, [1, 1, 1])
        T = gram(ext, [[1, (1, 0)], [(1, 0), 2]])
        ring = TruncatedRing(ext, 1)
        assert count_solutions(S, T, 1, method="fourier") == count_by_enumeration(S, T, ring)


UNIMODULAR = [
    lambda e: [[element(e, 1), element(e, 1)], [element(e, 0), element(e, 1)]],
    lambda e: [[element(e, 1), element(e, 0, 1)], [element(e, 0), element(e, 1)]],
    lambda e: [[element(e, 0), element(e, 1)], [element(e, 1), element(e, 0)]],
]


@pytest.mark.parametrize("ext", [i3, local_model(5, "split"), r7])
@pytest.mark.parametrize("g", UNIMODULAR)
def test_density_is_invariant_under_change_of_basis_of_s(ext, g):
    S = standard_hyperbolic(ext) if ext.ramified else diagonal(ext, [1, 1])
    T = diagonal(ext, [ext.p])
    assert local_density(S.transform(g(ext)), T).value == local_density(S, T).value


@pytest.mark.parametrize("ext", [i3, local_model(5, "split")])
@pytest.mark.parametrize("g", UNIMODULAR)
def test_density_is_invariant_under_change_of_basis_of_t(ext, g):
    S = diagonal(ext, [1, 1, 1, 1])
    T = diagonal(ext, [1, 1])
    assert local_density(S, T.transform(g(ext))).value == local_density(S, T).value


@pytest.mark.parametrize("unit", [(1, 1), (2, 1), (3, 0)])
def test_ramified_density_is_invariant_under_unit_scaling_of_t(unit):
    S = direct_sum(standard_hyperbolic(r7), standard_hyperbolic(r7))
    T = diagonal(r7, [7])
    u = element(r7, *unit)
    assert local_density(S, T.transform([[u]])).value == local_density(S, T).value


def test_local_model_equality_matters():
    e1 = LocalQuadExt(3, "inert", Fraction(-1))
    assert e1 != i3
