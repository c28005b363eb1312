"""Imaginary quadratic fields: prime splitting, local models and global constants."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InputError, RamifiedTwo

SPLITTINGS = ("inert", "split", "ramified")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division."""
    n = abs(n)
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(x, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def smallest_nonresidue(p: int) -> int:
    for u in range(2, p):
        if pow(u, (p - 1) // 2, p) == p - 1:
            return u
    raise ValueError(f"no nonresidue mod {p}")


@dataclass(frozen=True)
class Discriminant:
    delta: int

    def __post_init__(self):
        d = self.delta
        if not is_fundamental(d):
            raise InputError(f"{d} is not a negative fundamental discriminant")

    @property
    def abs(self) -> int:
        return -self.delta


def is_fundamental(d: int) -> bool:
    if d >= 0:
        return False
    if d % 4 == 1:
        return all(e == 1 for e in factorize(d).values())
    if d % 16 in (8, 12):
        m = d // 4
        return all(e == 1 for e in factorize(m).values())
    return False


@dataclass(frozen=True)
class LocalQuadExt:
    """Completion of O_F at p, modelled as Z_p[delta] with delta^2 = delta_sq.

    For odd p the ring basis is {1, delta}; for p = 2 it is {1, (1+delta)/2}.
    ``delta_sq`` is a canonical representative unless the model came from a global field,
    in which case it is the discriminant itself.
    """

    p: int
    splitting: str
    delta_sq: Fraction
    global_delta: int | None = None

    def __post_init__(self):
        if self.splitting not in SPLITTINGS:
            raise InputError(f"unknown splitting {self.splitting!r}")
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")
        if self.splitting == "ramified" and self.p == 2:
            raise RamifiedTwo("ramified extensions at p=2 are not supported")
        object.__setattr__(self, "delta_sq", Fraction(self.delta_sq))

    @property
    def q(self) -> int:
        return self.p

    @property
    def different_exponent(self) -> int:
        return 1 if self.splitting == "ramified" else 0

    @property
    def ramified(self) -> bool:
        return self.splitting == "ramified"

    def theta(self) -> tuple[int, Fraction]:
        """(trace, norm) of the ring generator theta."""
        if self.p == 2:
            return 1, (1 - self.delta_sq) / 4
        return 0, -self.delta_sq

    def delta_coords(self) -> tuple[Fraction, Fraction]:
        """delta written as alpha + beta*theta."""
        if self.p == 2:
            return Fraction(-1), Fraction(2)
        return Fraction(0), Fraction(1)

    def to_theta(self, a, b) -> tuple[Fraction, Fraction]:
        al, be = self.delta_coords()
        a, b = Fraction(a), Fraction(b)
        return a + b * al, b * be

    def from_theta(self, x, y) -> tuple[Fraction, Fraction]:
        al, be = self.delta_coords()
        b = Fraction(y) / be
        return Fraction(x) - b * al, b

    def describe(self) -> str:
        return f"{self.splitting} p={self.p}"


def local_model(p: int, splitting: str) -> LocalQuadExt:
    """The canonical local model for a prime and splitting type."""
    if splitting == "ramified":
        if p == 2:
            raise RamifiedTwo("ramified extensions at p=2 are not supported")
        u = smallest_nonresidue(p)
        c = -1 if kronecker(-1, p) == 1 else -u
        # c is a convention (densities were checked against other models); keep it small
        return LocalQuadExt(p, splitting, Fraction(c * p))
    if splitting == "inert":
        return LocalQuadExt(p, splitting, Fraction(-3 if p == 2 else smallest_nonresidue(p)))
    if splitting == "split":
        return LocalQuadExt(p, splitting, Fraction(1))
    raise InputError(f"unknown splitting {splitting!r}")


def classify_prime(delta: int | Discriminant, p: int) -> LocalQuadExt:
    """Localization of Q(sqrt(delta)) at p, with delta itself as the model's delta^2."""
    d = delta.delta if isinstance(delta, Discriminant) else Discriminant(delta).delta
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if p == 2 and d % 2 == 0:
        raise RamifiedTwo(f"2 ramifies in Q(sqrt({d}))")
    chi = kronecker(d, p)
    splitting = {1: "split", -1: "inert", 0: "ramified"}[chi]
    return LocalQuadExt(p, splitting, Fraction(d), global_delta=d)


@lru_cache(maxsize=None)
def class_number(delta: int) -> int:
    """Number of reduced positive definite binary forms of discriminant delta."""
    d = Discriminant(delta).delta
    h = 0
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            h += 1
        a += 1
    return h


def unit_count(delta: int) -> int:
    d = Discriminant(delta).delta
    return {-3: 6, -4: 4}.get(d, 2)


def ramified_prime_count(delta: int) -> int:
    return len(factorize(delta))


def ramified_primes(delta: int) -> list[int]:
    return sorted(factorize(delta))
