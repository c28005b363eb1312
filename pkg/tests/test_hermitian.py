from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hermlab.errors import ContextMismatch, InputError, RamifiedUnsupported
from hermlab.field_data import local_model, valuation
from hermlab.hermitian import (
    FieldElement,
    almost_self_dual_gram,
    det_valuation,
    diagonal,
    different,
    direct_sum,
    element,
    gram,
    in_dual_star,
    is_integral,
    parse_gram,
    self_dual_gram,
    standard_hyperbolic,
)

MODELS = [(3, "inert"), (5, "split"), (2, "inert"), (2, "split"), (7, "ramified"), (5, "ramified")]
small = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def elements(d):
    return st.builds(lambda a, b: FieldElement(a, b, Fraction(d)), small, small)


@given(st.data(), st.sampled_from([-1, 2, -3, 7, 1]))
def test_field_axioms(data, d):
    x, y, z = (data.draw(elements(d)) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x * y).norm() == x.norm() * y.norm()
    assert x.conj().conj() == x
    assert x.trace() == (x + x.conj()).a
    if d != 1 and not x.is_zero():
        assert x * x.inverse() == FieldElement(Fraction(1), Fraction(0), Fraction(d))


def test_integrality_and_different():
    ext = local_model(7, "ramified")
    dl = different(ext)
    assert dl.norm() == -ext.delta_sq
    assert is_integral(ext, element(ext, 3, 1))
    assert not is_integral(ext, element(ext, Fraction(1, 7)))
    e2 = local_model(2, "inert")
    # (1 + delta)/2 is integral over Z_2 when delta^2 = -3
    assert is_integral(e2, element(e2, Fraction(1, 2), Fraction(1, 2)))
    assert not is_integral(e2, element(e2, Fraction(1, 2)))


def test_gram_validation():
    ext = local_model(3, "inert")
    with pytest.raises(InputError):
        gram(ext, [[1, (0, 1)], [(0, 1), 1]])  # not conjugate-symmetric
    with pytest.raises(InputError):
        gram(ext, [[1, 0]])
    other = local_model(5, "inert")
    with pytest.raises(ContextMismatch):
        parse_gram({"p": 5, "splitting": "inert", "entries": [[1]]}, ext)
    g = gram(ext, [[1, (1, 1)], [(1, -1), 2]])
    assert g.det() == 2 - (1 - 2)  # 2 - N(1 + delta), N = 1 - 2
    assert not g.is_diagonal()
    assert other != ext


@pytest.mark.parametrize("model", MODELS)
def test_self_dual_grams(model):
    ext = local_model(*model)
    if ext.ramified:
        with pytest.raises(RamifiedUnsupported):
            self_dual_gram(ext, 1)
        S = self_dual_gram(ext, 4)
        assert det_valuation(S) == -2
        A = almost_self_dual_gram(ext, 3)
        assert A.n == 3 and det_valuation(A) == -1
    else:
        S = self_dual_gram(ext, 3)
        assert det_valuation(S) == 0
    assert in_dual_star(S)
    H = standard_hyperbolic(ext)
    assert in_dual_star(H) and H.n == 2


@given(st.sampled_from(MODELS), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_det_transforms_by_norm(model, a, b, c, d):
    ext = local_model(*model)
    S = direct_sum(diagonal(ext, [1]), standard_hyperbolic(ext)) if not ext.ramified else direct_sum(
        standard_hyperbolic(ext), standard_hyperbolic(ext)
    )
    n = S.n
    g = [[element(ext, 1 if i == j else 0) for j in range(n)] for i in range(n)]
    g[0][1] = element(ext, a, b)
    g[1][0] = element(ext, c, d)
    detg = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    T = S.transform(g)
    assert T.det() == S.det() * detg.norm()


def test_parse_gram_formats():
    ext = local_model(3, "inert")
    a = parse_gram("[[1, [\"1/2\", 1]], [[\"1/2\", -1], 2]]", ext)
    b = parse_gram('{"p": 3, "splitting": "inert", "entries": [[1, [1/2, 1]], [[1/2, -1], 2]]}')
    assert a == b
    assert parse_gram("[[1/3]]", ext)[0, 0] == element(ext, Fraction(1, 3))
    for bad in ("[[1,", '{"p": 3}', "[1, 2]", '[["x"]]'):
        with pytest.raises(InputError):
            parse_gram(bad, ext)
    with pytest.raises(InputError):
        parse_gram("[[1]]")


def test_round_trip_json():
    ext = local_model(7, "ramified")
    S = direct_sum(standard_hyperbolic(ext), diagonal(ext, [7]))
    assert parse_gram(S.to_json()) == S


def test_dual_star_membership():
    ext = local_model(7, "ramified")
    # off-diagonal entries may lie in the inverse different, diagonal entries must be integral
    assert in_dual_star(standard_hyperbolic(ext))
    assert not in_dual_star(diagonal(ext, [Fraction(1, 7)]))
    e3 = local_model(3, "inert")
    assert not in_dual_star(gram(e3, [[1, Fraction(1, 3)], [Fraction(1, 3), 1]]))
    assert valuation(standard_hyperbolic(ext).det(), 7) == -1
