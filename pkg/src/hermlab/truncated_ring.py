"""The finite rings O_{F_v}/p^k with their involution.

Elements are pairs (x, y) meaning x + y*theta, where theta^2 = tr*theta - nm (see
``LocalQuadExt.theta``). Split rings use theta = idempotent-like generators, so one code
path serves all splitting types.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import BudgetExceeded, NotIntegral
from .field_data import LocalQuadExt
from .hermitian import FieldElement, different

Elem = tuple[int, int]


def reduce_rational(x: Fraction, modulus: int, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise NotIntegral(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


@dataclass(frozen=True)
class TruncatedRing:
    ext: LocalQuadExt
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("truncation level must be >= 1")
        if self.ext.p ** self.k >= 2**31:
            raise BudgetExceeded("p^k must stay below 2^31")

    @property
    def p(self) -> int:
        return self.ext.p

    @property
    def modulus(self) -> int:
        return self.ext.p ** self.k

    @property
    def size(self) -> int:
        return self.modulus**2

    @property
    def tr(self) -> int:
        return reduce_rational(Fraction(self.ext.theta()[0]), self.modulus, self.p)

    @property
    def nm(self) -> int:
        return reduce_rational(self.ext.theta()[1], self.modulus, self.p)

    # scalar arithmetic
    def add(self, u: Elem, v: Elem) -> Elem:
        M = self.modulus
        return (u[0] + v[0]) % M, (u[1] + v[1]) % M

    def sub(self, u: Elem, v: Elem) -> Elem:
        M = self.modulus
        return (u[0] - v[0]) % M, (u[1] - v[1]) % M

    def mul(self, u: Elem, v: Elem) -> Elem:
        M = self.modulus
        yy = u[1] * v[1]
        return (u[0] * v[0] - self.nm * yy) % M, (u[0] * v[1] + u[1] * v[0] + self.tr * yy) % M

    def conj(self, u: Elem) -> Elem:
        M = self.modulus
        return (u[0] + self.tr * u[1]) % M, (-u[1]) % M

    def norm(self, u: Elem) -> int:
        x, y = u
        return (x * x + self.tr * x * y + self.nm * y * y) % self.modulus

    def trace(self, u: Elem) -> int:
        return (2 * u[0] + self.tr * u[1]) % self.modulus

    def embed(self, a: int) -> Elem:
        return a % self.modulus, 0

    def from_field(self, x: FieldElement) -> Elem:
        u, w = self.ext.to_theta(x.a, x.b)
        return reduce_rational(u, self.modulus, self.p), reduce_rational(w, self.modulus, self.p)

    def reduce_to(self, u: Elem, k: int) -> Elem:
        M = self.p**k
        return u[0] % M, u[1] % M

    def enumerate(self) -> Iterator[Elem]:
        M = self.modulus
        for x in range(M):
            for y in range(M):
                yield x, y

    def is_unit(self, u: Elem) -> bool:
        return self.norm(u) % self.p != 0

    def different_elem(self) -> Elem:
        return self.from_field(different(self.ext))

    def herm_residue_test(self, val) -> bool:
        """val: m x m matrix of ring elements representing conj(x)^t S x - T scaled so that
        off-diagonal entries are multiplied by the different (see ``herm_coords``)."""
        m = len(val)
        for i in range(m):
            for j in range(m):
                e = val[i][j]
                if i == j:
                    if e[0] % self.modulus or e[1] % self.modulus:
                        return False
                else:
                    if any(c % self.modulus for c in self.mul(self.different_elem(), e)):
                        return False
        return True

    # vectorized arithmetic on numpy int64 arrays
    def all_elements(self) -> tuple[np.ndarray, np.ndarray]:
        M = self.modulus
        x, y = np.divmod(np.arange(M * M, dtype=np.int64), M)
        return x, y

    def vmul(self, ux, uy, vx, vy):
        M = self.modulus
        yy = (uy * vy) % M
        rx = (ux * vx - self.nm * yy) % M
        ry = ((ux * vy) % M + (uy * vx) % M + self.tr * yy) % M
        return rx, ry

    def vconj(self, ux, uy):
        M = self.modulus
        return (ux + self.tr * uy) % M, (-uy) % M

    def vnorm(self, ux, uy):
        M = self.modulus
        return ((ux * ux) % M + (self.tr * ((ux * uy) % M)) % M + (self.nm * ((uy * uy) % M)) % M) % M

    def vtrace(self, ux, uy):
        return (2 * ux + self.tr * uy) % self.modulus
