"""Global assembly: finite parts of Eisenstein Fourier coefficients as products of local
normalized Whittaker functions, the corank-1 unfolding combinator, and the Hecke degree
and height-excess identities for rank-1 coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mpc, mpf

from .analytic import ComplexValue, _ctx, _real, lambda_factor
from .density import DEFAULT_BUDGET
from .errors import InputError
from .field_data import Discriminant, classify_prime, factorize
from .hermitian import FieldElement, GramMatrix, gram, self_dual_gram
from .values import LogLinear, PowerProduct
from .whittaker import NormalizedWhittaker, _as_fraction, normalize

UNIT = "unit"


def sigma(k: int, j: int) -> Fraction:
    """sum_{d | j} d^k."""
    if j < 1:
        raise InputError("sigma needs j >= 1")
    return sum((Fraction(d) ** k for d in divisors(j)), Fraction(0))


def divisors(j: int) -> list[int]:
    out = [1]
    for p, e in factorize(j).items():
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def rank1_global(j: int):
    """s -> j^{s+1/2} sigma_{-2s}(j); exact PowerProduct at half-integral s."""

    def f(s):
        fs = _as_fraction(s)
        if fs is not None and (2 * fs).denominator == 1:
            tot = sum((Fraction(d) ** int(-2 * fs) for d in divisors(j)), Fraction(0))
            out = PowerProduct.make(tot)
            for p, e in factorize(j).items():
                out = out * PowerProduct.prime_power(p, e * (fs + Fraction(1, 2)))
            return out
        s = float(s)
        return j ** (s + 0.5) * sum(d ** (-2 * s) for d in divisors(j))

    return f


def _global_rows(T) -> list[list]:
    if isinstance(T, GramMatrix):
        return [[x.components() for x in row] for row in T.entries]
    return [list(r) for r in T]


def _det_rational(rows, delta: int) -> Fraction:
    ents = [
        [e if isinstance(e, FieldElement) else _elem(e, delta) for e in row] for row in rows
    ]

    def det(mat):
        if len(mat) == 1:
            return mat[0][0]
        acc = None
        for c in range(len(mat)):
            minor = [r[:c] + r[c + 1 :] for r in mat[1:]]
            term = mat[0][c] * det(minor)
            term = term if c % 2 == 0 else -term
            acc = term if acc is None else acc + term
        return acc

    d = det(ents)
    if d.b != 0:
        raise InputError("determinant of a Hermitian matrix must be rational")
    return d.a


def _elem(e, delta: int) -> FieldElement:
    if isinstance(e, FieldElement):
        return e
    if isinstance(e, (tuple, list)):
        return FieldElement(Fraction(e[0]), Fraction(e[1]), Fraction(delta))
    return FieldElement(Fraction(e), Fraction(0), Fraction(delta))


@dataclass
class CoefficientSeries:
    """Finite part of a normalized Fourier coefficient: a product of local factors,
    every prime outside ``finite_local_data`` contributing the constant 1."""

    finite_local_data: dict[int, NormalizedWhittaker | str]
    delta: int
    n: int
    m: int
    det: Fraction = field(default=Fraction(1))

    def evaluate(self, s):
        fs = _as_fraction(s)
        exact = fs is not None and (2 * fs).denominator == 1
        acc = PowerProduct.make(1) if exact else 1.0
        for p in sorted(self.finite_local_data):
            W = self.finite_local_data[p]
            if W == UNIT:
                continue
            v = W.evaluate(fs if exact else s)
            acc = acc * v if exact else acc * float(v)
        return acc

    def __call__(self, s):
        return self.evaluate(s)

    def is_identically_one(self) -> bool:
        return all(W == UNIT or W.is_identically_one() for W in self.finite_local_data.values())

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "n": self.n,
            "m": self.m,
            "det": str(self.det),
            "local": {
                str(p): (W if W == UNIT else W.to_json()) for p, W in sorted(self.finite_local_data.items())
            },
        }


def finite_coefficient(
    T,
    delta,
    n: int,
    k_max: int = 4,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> CoefficientSeries:
    """Local factors of the T-th coefficient at every prime dividing 2 delta num(det) den(det).

    ``T`` is a GramMatrix or rows whose entries are rationals or pairs (a, b) meaning
    a + b sqrt(delta).
    """
    d = delta.delta if isinstance(delta, Discriminant) else Discriminant(int(delta)).delta
    rows = _global_rows(T)
    m = len(rows)
    if m == 0 or m > n:
        raise InputError("need 1 <= rank(T) <= n")
    det = _det_rational(rows, d)
    if det == 0:
        raise InputError("T must be nonsingular")
    primes = set(factorize(2 * d)) | set(factorize(det.numerator)) | set(factorize(det.denominator))
    local: dict[int, NormalizedWhittaker | str] = {}
    for p in sorted(primes):
        ext = classify_prime(d, p)
        Tp = gram(ext, rows)
        S = self_dual_gram(ext, n)
        W = normalize(S, Tp, k_max=k_max, budget=budget, threads=threads)
        local[p] = UNIT if W.is_identically_one() else W
    return CoefficientSeries(local, d, n, m, det)


def _to_mpc(v) -> mpc:
    if isinstance(v, ComplexValue):
        return v.value
    if isinstance(v, PowerProduct):
        return mpc(v.mpf())
    if isinstance(v, Fraction):
        return mpc(mpf(v.numerator) / v.denominator)
    return mpc(v)


def unfold_sign_exponent(n: int, m: int) -> int:
    mf = m - 1
    return m * (m - 1) * (n - m - 1) // 2 - mf * (mf - 1) * (n - mf - 1) // 2


def corank1_unfold(
    n: int,
    m: int,
    delta,
    a_sharp_norm,
    flat_series: Callable,
    s,
) -> ComplexValue:
    """Corank-1 coefficient from a rank m-1 series shifted by +-1/2:

        |a|^{s-s0} L_m(s)/L_{m-1}(s+1/2) flat(s+1/2)
          + (-1)^e |a|^{-s-s0} L_m(-s)/L_{m-1}(-s+1/2) flat(s-1/2)
    """
    if m < 1 or m > n:
        raise InputError("need 1 <= m <= n")
    with _ctx():
        s = _real(s)
        a = _real(a_sharp_norm)
        if a <= 0:
            raise InputError("a_sharp_norm must be positive")
        s0 = mpf(n - m) / 2
        half = mpf(1) / 2
        sign = -1 if unfold_sign_exponent(n, m) % 2 else 1
        first = lambda_factor(m, n, s, delta) / lambda_factor(m - 1, n, s + half, delta)
        second = lambda_factor(m, n, -s, delta) / lambda_factor(m - 1, n, -s + half, delta)
        up = _to_mpc(flat_series(s + half))
        down = _to_mpc(flat_series(s - half))
        return first * (a ** (s - s0) * up) + second * (sign * a ** (-s - s0) * down)


def hecke_faltings(j: int) -> tuple[int, LogLinear]:
    """(deg T_j, height excess) = (sigma_1(j), 1/2 sum_{d|j} (j/d) log(j/d^2))."""
    if j < 1:
        raise InputError("j must be positive")
    h = LogLinear.make()
    for d in divisors(j):
        h = h + LogLinear.log(Fraction(j, d * d)).scale(Fraction(j, d))
    return int(sigma(1, j)), h.scale(Fraction(1, 2))


def hecke_numeric_derivative(j: int, step: str = "1e-6") -> mpf:
    """1/2 d/ds (j^{s+1/2} sigma_{-2s}(j)) at s = 1/2 by a central difference."""
    with _ctx():
        h = mpf(step)
        ds = divisors(j)

        def f(s):
            return mpf(j) ** (s + mpf(1) / 2) * mpmath.fsum(mpf(d) ** (-2 * s) for d in ds)

        half = mpf(1) / 2
        return (f(half + h) - f(half - h)) / (4 * h)
