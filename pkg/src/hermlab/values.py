"""Exact value types: rational multiples of prime powers, and rational log-linear forms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .field_data import factorize


def _norm_exps(coeff: Fraction, exps: dict[int, Fraction]) -> tuple[Fraction, dict[int, Fraction]]:
    out = {}
    for p, e in exps.items():
        e = Fraction(e)
        whole = math.floor(e)
        coeff *= Fraction(p) ** whole
        if e - whole:
            out[p] = e - whole
    return coeff, out


@dataclass(frozen=True)
class PowerProduct:
    """coeff * prod p^{e_p} with rational exponents reduced into [0, 1)."""

    coeff: Fraction
    exps: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def make(cls, coeff, exps: dict | None = None) -> "PowerProduct":
        coeff = Fraction(coeff)
        if coeff == 0:
            return cls(Fraction(0))
        c, e = _norm_exps(coeff, exps or {})
        return cls(c, tuple(sorted(e.items())))

    @classmethod
    def prime_power(cls, p: int, e) -> "PowerProduct":
        return cls.make(1, {p: Fraction(e)})

    def __mul__(self, o):
        if not isinstance(o, PowerProduct):
            return PowerProduct.make(self.coeff * Fraction(o), dict(self.exps))
        e = dict(self.exps)
        for p, x in o.exps:
            e[p] = e.get(p, 0) + x
        return PowerProduct.make(self.coeff * o.coeff, e)

    __rmul__ = __mul__

    def inverse(self) -> "PowerProduct":
        return PowerProduct.make(1 / self.coeff, {p: -e for p, e in self.exps})

    def __truediv__(self, o):
        if not isinstance(o, PowerProduct):
            o = PowerProduct.make(o)
        return self * o.inverse()

    def __eq__(self, o):
        if not isinstance(o, PowerProduct):
            try:
                o = PowerProduct.make(o)
            except (TypeError, ValueError):
                return NotImplemented
        return self.coeff == o.coeff and (self.coeff == 0 or self.exps == o.exps)

    def __hash__(self):
        return hash((self.coeff, self.exps))

    def is_rational(self) -> bool:
        return not self.exps or self.coeff == 0

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.coeff

    def __float__(self):
        v = float(self.coeff)
        for p, e in self.exps:
            v *= p ** float(e)
        return v

    def mpf(self):
        v = mpmath.mpf(self.coeff.numerator) / self.coeff.denominator
        for p, e in self.exps:
            v *= mpmath.power(p, mpmath.mpf(e.numerator) / e.denominator)
        return v

    def __str__(self):
        s = str(self.coeff)
        for p, e in self.exps:
            s += f"*{p}^({e})"
        return s


@dataclass(frozen=True)
class LogLinear:
    """constant + sum_p c_p log p with rational data."""

    terms: tuple[tuple[int, Fraction], ...] = ()
    constant: Fraction = Fraction(0)

    @classmethod
    def make(cls, terms: dict | None = None, constant=0) -> "LogLinear":
        t = {int(p): Fraction(c) for p, c in (terms or {}).items() if Fraction(c) != 0}
        return cls(tuple(sorted(t.items())), Fraction(constant))

    @classmethod
    def log(cls, x) -> "LogLinear":
        """log of a positive rational, expanded over primes."""
        x = Fraction(x)
        if x <= 0:
            raise ValueError("log of a non-positive number")
        t: dict[int, Fraction] = {}
        for p, e in factorize(x.numerator).items():
            t[p] = t.get(p, 0) + e
        for p, e in factorize(x.denominator).items():
            t[p] = t.get(p, 0) - e
        return cls.make(t)

    @property
    def term_map(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def __add__(self, o: "LogLinear") -> "LogLinear":
        t = self.term_map
        for p, c in o.terms:
            t[p] = t.get(p, 0) + c
        return LogLinear.make(t, self.constant + o.constant)

    def __neg__(self):
        return LogLinear.make({p: -c for p, c in self.terms}, -self.constant)

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c) -> "LogLinear":
        c = Fraction(c)
        return LogLinear.make({p: c * x for p, x in self.terms}, c * self.constant)

    def is_zero(self) -> bool:
        return not self.terms and self.constant == 0

    def mpf(self):
        v = mpmath.mpf(self.constant.numerator) / self.constant.denominator
        for p, c in self.terms:
            v += mpmath.mpf(c.numerator) / c.denominator * mpmath.log(p)
        return v

    def __float__(self):
        return float(self.mpf())

    def to_json(self) -> dict:
        return {"constant": str(self.constant), "terms": {str(p): str(c) for p, c in self.terms}}

    @classmethod
    def from_json(cls, obj) -> "LogLinear":
        return cls.make({int(p): Fraction(c) for p, c in obj["terms"].items()}, Fraction(obj["constant"]))

    def __str__(self):
        parts = [f"{c}*log({p})" for p, c in self.terms]
        if self.constant or not parts:
            parts.insert(0, str(self.constant))
        return " + ".join(parts)
