"""Normalized local Whittaker functions W*(s) built from density polynomials.

Convention (absolute variable s, centre s0 = (n-m)/2, X = q^{-2(s-s0)}):

    W*(s) = |det T / det T_ref|_p^{-(s+1/2)} * Den(S, T, X) / Den(S, T_ref, X)

where T_ref is the self-dual lattice of rank m, or <1> + M2^{(m-1)/2} when the
extension is ramified and m is odd.  The determinant twist makes the rank-1 case agree
with p^{v(s+1/2)} sigma_{-2s}(p^v) and is invisible whenever T and T_ref have the same
determinant valuation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .density import DEFAULT_BUDGET
from .density_poly import DensityPolynomial, interpolate
from .errors import DenominatorVanishes, InputError
from .field_data import LocalQuadExt, valuation
from .hermitian import GramMatrix, almost_self_dual_gram, self_dual_gram
from .values import LogLinear, PowerProduct
from .weil_index import FourthRoot, hermitian_space_blocks, weil_index

SELF_DUAL_TARGET = "self_dual_target"
ALMOST_SELF_DUAL_TARGET = "almost_self_dual_target"


def _as_fraction(s):
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    return None


@dataclass
class NormalizedWhittaker:
    numerator: DensityPolynomial
    denominator: DensityPolynomial
    denominator_kind: str
    ext: LocalQuadExt
    n: int
    m: int
    det_shift: int  # v_p(det T) - v_p(det T_ref)

    @property
    def s0(self) -> Fraction:
        return Fraction(self.n - self.m, 2)

    @property
    def q(self) -> int:
        return self.ext.q

    def x_at(self, s):
        """X = q^{-2(s - s0)}; exact for rational s with 2s integral."""
        fs = _as_fraction(s)
        if fs is not None and (2 * fs).denominator == 1:
            e = int(-2 * (fs - self.s0))
            return Fraction(self.q) ** e
        return float(self.q) ** (-2 * (float(s) - float(self.s0)))

    def quotient(self) -> list[Fraction] | None:
        """Coefficients of numerator/denominator when the division is exact."""
        if not hasattr(self, "_quot"):
            self._quot = poly_divide(self.numerator.coeffs, self.denominator.coeffs)
        return self._quot

    def ratio(self, x):
        q = self.quotient()
        if q is not None:
            return _peval(q, x)
        d = self.denominator(x)
        if d == 0:
            raise DenominatorVanishes(f"reference density vanishes at X={x}")
        return self.numerator(x) / d

    def twist(self, s):
        """|det T/det T_ref|^{-(s+1/2)} = p^{det_shift (s+1/2)}."""
        fs = _as_fraction(s)
        if fs is not None:
            return PowerProduct.prime_power(self.ext.p, self.det_shift * (fs + Fraction(1, 2)))
        return float(self.ext.p) ** (self.det_shift * (float(s) + 0.5))

    def evaluate(self, s):
        """W*(s); a PowerProduct for half-integral s, a float otherwise."""
        x = self.x_at(s)
        r = self.ratio(x)
        t = self.twist(s)
        if isinstance(x, Fraction) and isinstance(t, PowerProduct):
            return t * r
        return float(t) * float(r)

    def is_identically_one(self) -> bool:
        return self.det_shift == 0 and self.numerator.same_polynomial(self.denominator)

    def to_json(self) -> dict:
        return {
            "kind": self.denominator_kind,
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
            "p": self.ext.p,
            "splitting": self.ext.splitting,
            "n": self.n,
            "m": self.m,
            "s0": str(self.s0),
            "det_shift": self.det_shift,
        }


def _peval(coeffs, x):
    acc = Fraction(0) if isinstance(x, Fraction) else 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_divide(num: list[Fraction], den: list[Fraction]) -> list[Fraction] | None:
    """Exact quotient num/den in Q[X], or None when the remainder is nonzero."""
    num = list(num)
    den = list(den)
    while len(den) > 1 and den[-1] == 0:
        den.pop()
    if not den or den[-1] == 0:
        return None
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    if len(num) < len(den):
        return [Fraction(0)] if all(c == 0 for c in num) else None
    quot = [Fraction(0)] * (len(num) - len(den) + 1)
    rem = list(num)
    for i in range(len(quot) - 1, -1, -1):
        c = rem[i + len(den) - 1] / den[-1]
        quot[i] = c
        for j, d in enumerate(den):
            rem[i + j] -= c * d
    if any(rem):
        return None
    return quot


def reference_gram(ext: LocalQuadExt, m: int) -> tuple[GramMatrix, str]:
    if ext.ramified and m % 2:
        return almost_self_dual_gram(ext, m), ALMOST_SELF_DUAL_TARGET
    return self_dual_gram(ext, m), SELF_DUAL_TARGET


def is_self_dual(S: GramMatrix) -> bool:
    from .hermitian import in_dual_star

    if not in_dual_star(S):
        return False
    if S.n == 0:
        return True
    # self-dual for the trace pairing: |det S| = |d|^{-n}
    return valuation(S.det(), S.ext.p) == -S.ext.different_exponent * S.n // 2 and (
        not S.ext.ramified or S.n % 2 == 0
    )


def normalize(
    S: GramMatrix,
    T: GramMatrix,
    k_max: int = 4,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> NormalizedWhittaker:
    if not is_self_dual(S):
        raise InputError("normalization needs a self-dual S")
    if T.n > S.n:
        raise InputError("rank of T exceeds rank of S")
    ref, kind = reference_gram(S.ext, T.n)
    num = interpolate(S, T, k_max=k_max, budget=budget, threads=threads)
    if T == ref:
        den = num
    else:
        den = interpolate(S, ref, k_max=k_max, budget=budget, threads=threads)
    shift = 0
    if T.n:
        shift = valuation(T.det(), S.ext.p) - valuation(ref.det(), S.ext.p)
    return NormalizedWhittaker(num, den, kind, S.ext, S.n, T.n, shift)


def rank1_closed_form(j: int, p: int):
    """s -> p^{v(s+1/2)} * sum_{i<=v} p^{-2si}, v = v_p(j)."""
    v = valuation(j, p)

    def f(s):
        fs = _as_fraction(s)
        if fs is not None and (2 * fs).denominator == 1:
            tot = sum((Fraction(p) ** int(-2 * fs * i) for i in range(v + 1)), Fraction(0))
            return PowerProduct.prime_power(p, v * (fs + Fraction(1, 2))) * tot
        s = float(s)
        return p ** (v * (s + 0.5)) * sum(p ** (-2 * s * i) for i in range(v + 1))

    return f


def whittaker_derivative(W: NormalizedWhittaker, s_star) -> LogLinear:
    """d/ds W*(s) at s_star as an exact multiple of log p."""
    s_star = _as_fraction(s_star)
    if s_star is None or (2 * s_star).denominator != 1:
        raise InputError("s_star must be a half-integer")
    x = W.x_at(s_star)
    quot = W.quotient()
    if quot is not None:
        r = _peval(quot, x)
        r_x = _peval([i * c for i, c in enumerate(quot)][1:], x)
    else:
        N, D = W.numerator, W.denominator
        dv = D(x)
        if dv == 0:
            raise DenominatorVanishes(f"reference density vanishes at X={x}")
        r = N(x) / dv
        r_x = (N.derivative()(x) * dv - N(x) * D.derivative()(x)) / (dv * dv)
    # d/ds = log q * [det_shift * R - 2 X R_X] * twist
    inner = W.det_shift * r - 2 * x * r_x
    tw = W.twist(s_star)
    if not tw.is_rational():
        raise InputError("the determinant twist is irrational at this point")
    return LogLinear.make({W.ext.p: tw.rational() * inner})


def functional_equation_probe(W: NormalizedWhittaker, s_samples) -> list:
    """Ratios W*(s) / W*(-s)."""
    out = []
    for s in s_samples:
        a, b = W.evaluate(s), W.evaluate(-_as_fraction(s) if _as_fraction(s) is not None else -float(s))
        if isinstance(a, PowerProduct) and isinstance(b, PowerProduct):
            if b.coeff == 0:
                raise DenominatorVanishes(f"W*(-s) vanishes at s={s}")
            out.append(a / b)
        else:
            if float(b) == 0:
                raise DenominatorVanishes(f"W*(-s) vanishes at s={s}")
            out.append(float(a) / float(b))
    return out


def raw_whittaker_constant(S: GramMatrix, m: int) -> tuple[FourthRoot, PowerProduct]:
    """gamma(V)^{-m} |det S|^m |Delta|^e with e = nm/2 + m(m-1)/4."""
    ext = S.ext
    p = ext.p
    if m == 0:
        return FourthRoot(0), PowerProduct.make(1)
    vdet = valuation(S.det(), p)
    hyperbolic = ext.ramified and is_self_dual(S)
    gamma = weil_index(hermitian_space_blocks(ext, S.n, vdet, hyperbolic=hyperbolic))
    e = Fraction(S.n * m, 2) + Fraction(m * (m - 1), 4)
    # |x|_p = p^{-v(x)}; |Delta|_p = p^{-different_exponent}
    value = PowerProduct.prime_power(p, -m * vdet) * PowerProduct.prime_power(p, -ext.different_exponent * e)
    return gamma ** (-m), value
