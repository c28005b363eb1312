"""Gamma, Hurwitz zeta and Dirichlet L-values at high precision, the global normalizing
factor Lambda_m(s) of an n-variable Hermitian Eisenstein series, and the identities that
tie it to closed forms.

Everything runs on mpmath numbers at ``precision`` significant digits (50 by default)
with a running absolute error bound carried by :class:`ComplexValue`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .errors import InputError, PoleAtOne, PoleEncountered
from .field_data import Discriminant, class_number, kronecker, ramified_primes, unit_count

DEFAULT_PRECISION = 50
EM_TERMS = 20
EM_SHIFT = 40

_state = {"digits": DEFAULT_PRECISION}


def set_precision(digits: int) -> None:
    if digits < 30:
        raise InputError("precision must be at least 30 digits")
    _state["digits"] = digits


def _ctx():
    return mp.workdps(_state["digits"] + 10)


def _real(s) -> mpf:
    if isinstance(s, Fraction):
        return mpf(s.numerator) / s.denominator
    if isinstance(s, (int, str)):
        return mpf(s)
    return mpf(repr(float(s))) if isinstance(s, float) else mpf(s)


def _abs_delta(delta) -> int:
    if delta is None:
        return 1
    return abs(_delta_value(delta))


def _delta_value(delta) -> int:
    return delta.delta if isinstance(delta, Discriminant) else Discriminant(int(delta)).delta


@dataclass(frozen=True)
class ComplexValue:
    value: mpc
    err: mpf

    @classmethod
    def exact(cls, z) -> "ComplexValue":
        return cls(mpc(z), mpf(0))

    @property
    def re(self) -> mpf:
        return self.value.real

    @property
    def im(self) -> mpf:
        return self.value.imag

    def __abs__(self):
        return abs(self.value)

    def _lift(self, o) -> "ComplexValue":
        return o if isinstance(o, ComplexValue) else ComplexValue.exact(o)

    def __add__(self, o):
        o = self._lift(o)
        return ComplexValue(self.value + o.value, self.err + o.err)

    __radd__ = __add__

    def __neg__(self):
        return ComplexValue(-self.value, self.err)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        err = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return ComplexValue(self.value * o.value, err)

    __rmul__ = __mul__

    def inverse(self) -> "ComplexValue":
        a = abs(self.value)
        if a <= self.err:
            raise PoleEncountered("division by a value indistinguishable from zero")
        return ComplexValue(1 / self.value, self.err / (a * (a - self.err)))

    def __truediv__(self, o):
        return self * self._lift(o).inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def close_to(self, o, tol) -> bool:
        o = self._lift(o)
        return abs(self.value - o.value) <= tol

    def to_json(self, digits: int = 20) -> dict:
        return {
            "re": mpmath.nstr(self.re, digits),
            "im": mpmath.nstr(self.im, digits),
            "err": mpmath.nstr(self.err, 3),
        }


def i_power(e: int) -> mpc:
    """i^e computed exactly from e mod 4."""
    return [mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1)][e % 4]


def gamma(x) -> ComplexValue:
    with _ctx():
        x = _real(x)
        if x <= 0 and x == mpmath.floor(x):
            raise PoleEncountered(f"Gamma({mpmath.nstr(x, 10)})")
        v = mpmath.gamma(x)
        return ComplexValue(mpc(v), abs(v) * mpf(10) ** (-_state["digits"]))


def hurwitz_zeta(s, x, terms: int = EM_TERMS, shift: int = EM_SHIFT, drop_pole: bool = False):
    """(value, error bound) of zeta(s, x) by Euler-Maclaurin after ``shift`` direct terms.

    With ``drop_pole`` the term a^{1-s}/(s-1) loses its x-independent part 1/(s-1), which
    is -log(a) at s = 1; this is the right continuation inside a character sum whose
    weights add up to zero, and it stays accurate as s approaches 1.
    """
    with _ctx():
        s, x = _real(s), _real(x)
        if x <= 0:
            raise InputError("Hurwitz zeta needs x > 0")
        head = mpmath.fsum((k + x) ** (-s) for k in range(shift))
        a = shift + x
        if drop_pole:
            # (a^{1-s} - 1)/(s - 1) = -log(a) * expm1(t)/t, t = (1-s) log(a)
            t = (1 - s) * mpmath.log(a)
            tail = -mpmath.log(a) * (mpmath.expm1(t) / t if t else 1)
        elif s == 1:
            raise PoleAtOne("zeta(s, x) has a pole at s = 1")
        else:
            tail = a ** (1 - s) / (s - 1)
        tail += a ** (-s) / 2
        rising = s  # s (s+1) ... (s+2k-2)
        term = mpf(0)
        for k in range(1, terms + 2):
            term = mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k) * rising * a ** (-s - 2 * k + 1)
            if k <= terms:
                tail += term
            rising *= (s + 2 * k - 1) * (s + 2 * k)
        err = 2 * abs(term) + mpf(10) ** (-_state["digits"]) * (abs(head) + abs(tail))
        return head + tail, err


def dirichlet_L(s, delta=None) -> ComplexValue:
    """L(s, chi) for chi the Kronecker character of ``delta`` (trivial when None)."""
    with _ctx():
        s = _real(s)
        if delta is None:
            if s == 1:
                raise PoleAtOne("zeta(s) has a pole at s = 1")
            v, e = hurwitz_zeta(s, 1)
            return ComplexValue(mpc(v), e)
        d = _delta_value(delta)
        D = _abs_delta(d)
        total, err = mpf(0), mpf(0)
        for a in range(1, D + 1):
            chi = kronecker(d, a)
            if chi:
                v, e = hurwitz_zeta(s, mpf(a) / D, drop_pole=True)
                total += chi * v
                err += e
        scale = mpf(D) ** (-s)
        return ComplexValue(mpc(total * scale), err * scale)


def _character_L(s, delta, power: int) -> ComplexValue:
    """L(s, eta^power): Riemann zeta for even powers."""
    if power % 2 == 0:
        try:
            return dirichlet_L(s, None)
        except PoleAtOne:
            raise PoleEncountered(f"L({mpmath.nstr(_real(s), 10)}, trivial)") from None
    return dirichlet_L(s, delta)


def lambda_factor(m: int, n: int, s, delta) -> ComplexValue:
    """Lambda_m(s) for an n-variable Eisenstein series over Q(sqrt(delta))."""
    if m < 0 or n < 0:
        raise InputError("m and n must be nonnegative")
    with _ctx():
        s = _real(s)
        D = mpf(_abs_delta(delta))
        s0 = mpf(n - m) / 2
        two_pi = 2 * mpmath.pi
        pre = (
            two_pi ** (mpf(m * (m - 1)) / 2 - n * m)
            * mpmath.pi ** (m * (s0 - s))
            * D ** (mpf(m * (m - 1)) / 4)
            * D ** ((m // 2) * (s + s0))
        )
        out = ComplexValue(i_power(n * m) * pre, mpf(0))
        for j in range(m):
            out = out * gamma(s - s0 + n - j) * _character_L(2 * s + m - j, delta, j + n)
        return out


def closed_form_volume(n: int, s, delta) -> ComplexValue:
    """|D|^{n(s-1)/2} prod_{j=1}^n |D|^{j/2} Gamma(s+j) L(2s+j, eta^j) / (2^j pi^{s+j})."""
    if n < 2 or n % 2:
        raise InputError("closed_form_volume needs an even n >= 2")
    with _ctx():
        s = _real(s)
        D = mpf(_abs_delta(delta))
        out = ComplexValue(mpc(D ** (mpf(n) / 2 * (s - 1))), mpf(0))
        for j in range(1, n + 1):
            c = D ** (mpf(j) / 2) / (mpf(2) ** j * mpmath.pi ** (s + j))
            out = out * gamma(s + j) * _character_L(2 * s + j, delta, j) * c
        return out


def corank1_ratio(n: int, s, delta) -> tuple[ComplexValue, ComplexValue]:
    """Lambda_n(s) / Lambda_{n-1}(s + 1/2) computed directly and by its closed form
    -1/2 L(2s+1, eta) Gamma(s+1) |D|^{s+1/2} pi^{-s-1}."""
    if n % 4 != 2:
        raise InputError("corank1_ratio needs n = 2 mod 4")
    with _ctx():
        s = _real(s)
        direct = lambda_factor(n, n, s, delta) / lambda_factor(n - 1, n, s + mpf(1) / 2, delta)
        D = mpf(_abs_delta(delta))
        c = -D ** (s + mpf(1) / 2) * mpmath.pi ** (-s - 1) / 2
        closed = _character_L(2 * s + 1, delta, 1) * gamma(s + 1) * c
        return direct, closed


def class_number_ratio(delta) -> Fraction:
    d = _delta_value(delta)
    return Fraction(class_number(d), unit_count(d))


def h_cm(delta, n: int = 2, step: str = "1e-6") -> mpf:
    """The constant defined by d/ds ratio(s)|_{s=0} = 2 (h/w) h_cm, the derivative taken
    by a central difference on the closed-form path."""
    with _ctx():
        h = mpf(step)
        plus = corank1_ratio(n, h, delta)[1].re
        minus = corank1_ratio(n, -h, delta)[1].re
        deriv = (plus - minus) / (2 * h)
        r = class_number_ratio(delta)
        return deriv / (2 * mpf(r.numerator) / r.denominator)


def _arch_L(s, j: int) -> ComplexValue:
    """pi^{-(s+d)/2} Gamma((s+d)/2), d = j mod 2."""
    d = j % 2
    return gamma((s + d) / 2) * (mpmath.pi ** (-(s + d) / 2))


def _arch_eps(j: int) -> mpc:
    return mpc(1) if j % 2 == 0 else mpc(0, -1)


def shimura_intertwining_check(m: int, n: int, s) -> tuple[ComplexValue, ComplexValue]:
    """The scalar by which the Archimedean intertwining operator acts on the weight-n
    vector, computed from local L- and epsilon-factors and from the Gamma-quotient form."""
    if m < 1 or n < 1:
        raise InputError("m and n must be positive")
    with _ctx():
        s = _real(s)
        s0 = mpf(n - m) / 2
        first = ComplexValue(i_power(m * (m - 1) // 2) * (-1) ** (n * m) * mpmath.pi ** (2 * m * s), mpf(0))
        for j in range(m):
            num = _arch_L(2 * s + j - m + 1, n + j) * gamma(-s - s0 + n - j)
            den = _arch_L(-2 * s - j + m, n + j) * gamma(s - s0 + n - j) * _arch_eps(n + j)
            first = first * num / den
        second = ComplexValue(
            i_power(-m * n)
            * (2 * mpmath.pi) ** (m * m)
            * mpmath.pi ** (-mpf(m * (m - 1)) / 2)
            / mpf(2) ** (mpf(m * (m - 1)) / 2 + 2 * m * s),
            mpf(0),
        )
        for j in range(m):
            second = second * gamma(2 * s - j) / (gamma(s - s0 + n - j) * gamma(s - s0 - j))
        return first, second


def level_change_factor(n: int, delta) -> Fraction:
    """prod over ramified l of (1 + l^{n/2}) / 2."""
    if n % 2:
        raise InputError("level change needs an even n")
    out = Fraction(1)
    for ell in ramified_primes(_delta_value(delta)):
        out *= Fraction(1 + ell ** (n // 2), 2)
    return out


def shimura_volume(n: int, delta, self_dual_trace_level: bool = True) -> ComplexValue:
    """Volume of the unitary Shimura variety at a lattice self-dual for the Hermitian
    pairing, optionally moved to the level of a lattice self-dual for the trace pairing."""
    if n < 2 or n % 2:
        raise InputError("shimura_volume needs an even n >= 2")
    with _ctx():
        d = _delta_value(delta)
        D = mpf(_abs_delta(d))
        ells = ramified_primes(d)
        bracket = ComplexValue(mpc(mpf(2) ** (1 - len(ells))), mpf(0))
        for ell in ells:
            bracket = bracket * (1 + mpf(ell) ** (-mpf(n) / 2))
        for j in range(1, n + 1):
            c = D ** (mpf(j) / 2) / (mpf(2) ** j * mpmath.pi**j)
            bracket = bracket * gamma(j) * _character_L(j, d, j) * c
        if self_dual_trace_level:
            f = level_change_factor(n, d)
            bracket = bracket / (mpf(f.numerator) / f.denominator)
        return bracket
