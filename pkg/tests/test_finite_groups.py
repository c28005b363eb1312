from fractions import Fraction as F

import pytest

from hermlab.errors import BudgetExceeded, InputError
from hermlab.field_data import local_model
from hermlab.finite_groups import (
    enumerate_group_order,
    group_order_report,
    o_split_order,
    parabolic_o_order,
    parabolic_sp_order,
    sp_order,
    stabilizer_index_check,
    stabilizer_ratio,
    witt_orbit_check,
)


def test_small_orders():
    assert sp_order(1, 3) == 24
    assert sp_order(1, 5) == 120
    assert o_split_order(1, 3) == 4
    assert sp_order(2, 3) == 51840


@pytest.mark.parametrize(
    "kind, d, q",
    [("sp", 1, 3), ("sp", 1, 5), ("o_split", 1, 3), ("o_split", 1, 5), ("parabolic_sp", 1, 3), ("parabolic_o", 1, 3), ("o_split", 2, 3)],
)
def test_enumeration_matches_formula(kind, d, q):
    rep = group_order_report(kind, d, q)
    assert rep.matches, rep.to_json()


def test_enumeration_errors():
    with pytest.raises(InputError):
        enumerate_group_order("gl", 1, 3)
    with pytest.raises(InputError):
        enumerate_group_order("sp", 1, 4)
    with pytest.raises(BudgetExceeded):
        enumerate_group_order("sp", 2, 3, budget=100)


@pytest.mark.parametrize("d, q", [(1, 3), (2, 3), (1, 5), (3, 7), (2, 11)])
def test_stabilizer_ratio(d, q):
    assert stabilizer_ratio(d, q) == F(1 + q**d, 2)


def test_parabolic_orders_divide():
    for d in (1, 2, 3):
        for q in (3, 5):
            assert sp_order(d, q) % parabolic_sp_order(d, q) == 0
            assert o_split_order(d, q) % parabolic_o_order(d, q) == 0


@pytest.mark.parametrize("c", [1, 2])
def test_witt_inert_units(c):
    rep = witt_orbit_check(local_model(3, "inert"), c)
    assert rep.orbit_count == 1
    assert rep.group_order == 96
    assert rep.lagrange_ok


def test_witt_inert_non_unit_level_two():
    rep = witt_orbit_check(local_model(3, "inert"), 3, k=2)
    assert rep.orbit_count == 1
    assert rep.vector_count > 0


@pytest.mark.parametrize("c", range(1, 7))
def test_witt_ramified(c):
    assert witt_orbit_check(local_model(7, "ramified"), c).orbit_count == 1


def test_witt_rejects_bad_c():
    with pytest.raises(InputError):
        witt_orbit_check(local_model(3, "inert"), 3, k=1)
    with pytest.raises(InputError):
        witt_orbit_check(local_model(7, "ramified"), 7, k=2)
    with pytest.raises(InputError):
        witt_orbit_check(local_model(3, "inert"), 1, k=3)


def test_stabilizer_indices():
    assert stabilizer_index_check(local_model(3, "inert"), 1, 1) == 1
    assert stabilizer_index_check(local_model(7, "ramified"), 1, 1) == 2
    assert stabilizer_index_check(local_model(3, "inert"), 3, 2) == 4
    assert stabilizer_index_check(local_model(5, "inert"), 5, 2) == 6
