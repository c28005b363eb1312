"""Hermitian Gram matrices over a local quadratic extension, with exact rational entries."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContextMismatch, InputError, RamifiedUnsupported
from .field_data import LocalQuadExt, local_model, valuation


@dataclass(frozen=True)
class FieldElement:
    """a + b*delta with delta^2 = d."""

    a: Fraction
    b: Fraction
    d: Fraction

    @classmethod
    def of(cls, a, b=0, d=1) -> "FieldElement":
        return cls(Fraction(a), Fraction(b), Fraction(d))

    def _same(self, o: "FieldElement"):
        if self.d != o.d:
            raise ContextMismatch("field elements from different models")

    def __add__(self, o):
        o = self._lift(o)
        return FieldElement(self.a + o.a, self.b + o.b, self.d)

    def __sub__(self, o):
        o = self._lift(o)
        return FieldElement(self.a - o.a, self.b - o.b, self.d)

    def __neg__(self):
        return FieldElement(-self.a, -self.b, self.d)

    def __mul__(self, o):
        o = self._lift(o)
        return FieldElement(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __radd__ = __add__
    __rmul__ = __mul__

    def _lift(self, o) -> "FieldElement":
        if isinstance(o, FieldElement):
            self._same(o)
            return o
        return FieldElement(Fraction(o), Fraction(0), self.d)

    def conj(self) -> "FieldElement":
        return FieldElement(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "FieldElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("element is not invertible")
        return FieldElement(self.a / n, -self.b / n, self.d)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def components(self) -> tuple[Fraction, Fraction]:
        """Image in Q x Q for a split model with d = 1."""
        if self.d != 1:
            raise ValueError("components() needs delta^2 = 1")
        return self.a + self.b, self.a - self.b

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*d"


def is_integral(ext: LocalQuadExt, x: FieldElement) -> bool:
    """x lies in O_{F_v}."""
    u, w = ext.to_theta(x.a, x.b)
    p = ext.p
    return u.denominator % p != 0 and w.denominator % p != 0


def different(ext: LocalQuadExt) -> FieldElement:
    """Trace-zero generator of the different: delta when ramified, else 1."""
    if ext.ramified:
        return FieldElement(Fraction(0), Fraction(1), ext.delta_sq)
    return FieldElement(Fraction(1), Fraction(0), ext.delta_sq)


@dataclass(frozen=True)
class GramMatrix:
    ext: LocalQuadExt
    entries: tuple[tuple[FieldElement, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise InputError("Gram matrix must be square")
            for j, x in enumerate(row):
                if x.d != self.ext.delta_sq:
                    raise ContextMismatch("entry model differs from the matrix context")
                if x != self.entries[j][i].conj():
                    raise InputError("Gram matrix is not conjugate-symmetric")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def det(self) -> Fraction:
        """Determinant (a rational for a Hermitian matrix)."""
        if self.n == 0:
            return Fraction(1)
        if self.ext.delta_sq == 1:
            # Q[delta]/(delta^2-1) = Q x Q; det is rational so both components agree
            comp = [[x.components()[0] for x in row] for row in self.entries]
            return _rational_det(comp)
        return _field_det([list(r) for r in self.entries]).a

    def transform(self, g: Sequence[Sequence[FieldElement]]) -> "GramMatrix":
        """conj(g)^t * self * g for an n x k matrix g."""
        n = self.n
        k = len(g[0]) if n else 0
        zero = FieldElement(Fraction(0), Fraction(0), self.ext.delta_sq)
        sg = [[sum((self.entries[i][l] * g[l][j] for l in range(n)), zero) for j in range(k)] for i in range(n)]
        out = [[sum((g[l][i].conj() * sg[l][j] for l in range(n)), zero) for j in range(k)] for i in range(k)]
        return GramMatrix(self.ext, tuple(tuple(r) for r in out))

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(self.n) for j in range(self.n) if i != j)

    def to_json(self) -> dict:
        return {
            "p": self.ext.p,
            "splitting": self.ext.splitting,
            "entries": [[[str(x.a), str(x.b)] for x in row] for row in self.entries],
        }

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries) + "]"


def _rational_det(m: list[list[Fraction]]) -> Fraction:
    m = [list(r) for r in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
    return det


def _field_det(m: list[list[FieldElement]]) -> FieldElement:
    n = len(m)
    d = m[0][0].d
    det = FieldElement(Fraction(1), Fraction(0), d)
    for c in range(n):
        piv = next((r for r in range(c, n) if not m[r][c].is_zero()), None)
        if piv is None:
            return FieldElement(Fraction(0), Fraction(0), d)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if not f.is_zero():
                for j in range(c, n):
                    m[r][j] = m[r][j] - f * m[c][j]
    return det


def element(ext: LocalQuadExt, a, b=0) -> FieldElement:
    return FieldElement(Fraction(a), Fraction(b), ext.delta_sq)


def gram(ext: LocalQuadExt, rows: Iterable[Iterable]) -> GramMatrix:
    """Build a Gram matrix from rationals, (a, b) pairs or FieldElements."""
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, FieldElement):
                r.append(x)
            elif isinstance(x, (tuple, list)):
                r.append(element(ext, Fraction(x[0]), Fraction(x[1])))
            else:
                r.append(element(ext, Fraction(x)))
        out.append(tuple(r))
    return GramMatrix(ext, tuple(out))


def diagonal(ext: LocalQuadExt, values: Iterable) -> GramMatrix:
    vals = list(values)
    n = len(vals)
    return gram(ext, [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)])


def empty(ext: LocalQuadExt) -> GramMatrix:
    return GramMatrix(ext, ())


def standard_hyperbolic(ext: LocalQuadExt) -> GramMatrix:
    """The self-dual plane M2 with d^{-1} off the diagonal."""
    dinv = different(ext).inverse()
    zero = element(ext, 0)
    return GramMatrix(ext, ((zero, dinv), (dinv.conj(), zero)))


def unit_rank_one(ext: LocalQuadExt) -> GramMatrix:
    if ext.ramified:
        raise RamifiedUnsupported("<1> augmentation needs an unramified extension")
    return diagonal(ext, [1])


def direct_sum(*blocks: GramMatrix) -> GramMatrix:
    if not blocks:
        raise InputError("direct_sum needs at least one block")
    ext = blocks[0].ext
    if any(b.ext != ext for b in blocks):
        raise ContextMismatch("direct sum of Gram matrices over different models")
    n = sum(b.n for b in blocks)
    zero = element(ext, 0)
    rows = [[zero] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                rows[off + i][off + j] = b.entries[i][j]
        off += b.n
    return GramMatrix(ext, tuple(tuple(r) for r in rows))


def in_dual_star(b: GramMatrix) -> bool:
    ext = b.ext
    dd = different(ext)
    for i in range(b.n):
        for j in range(b.n):
            x = b.entries[i][j]
            if i == j:
                if x.b != 0 or x.a.denominator % ext.p == 0:
                    return False
            elif not is_integral(ext, dd * x):
                return False
    return True


def self_dual_gram(ext: LocalQuadExt, n: int) -> GramMatrix:
    """Gram matrix of a self-dual lattice of rank n (ramified needs n even)."""
    if n == 0:
        return empty(ext)
    if not ext.ramified:
        return diagonal(ext, [1] * n)
    if n % 2:
        raise RamifiedUnsupported("no self-dual lattice of odd rank over a ramified extension")
    return direct_sum(*[standard_hyperbolic(ext)] * (n // 2))


def almost_self_dual_gram(ext: LocalQuadExt, m: int) -> GramMatrix:
    """<1> + M2^{(m-1)/2}, used as the reference lattice for odd rank when ramified."""
    one = diagonal(ext, [1])
    if m == 1:
        return one
    return direct_sum(one, *[standard_hyperbolic(ext)] * ((m - 1) // 2))


def det_valuation(g: GramMatrix) -> int:
    return valuation(g.det(), g.ext.p)


def _parse_entry(ext: LocalQuadExt, x) -> FieldElement:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise InputError(f"entry {x!r} must be [a, b]")
        return element(ext, Fraction(str(x[0])), Fraction(str(x[1])))
    return element(ext, Fraction(str(x)))


RATIONAL_TOKEN = re.compile(r'(?<!["\w.])(-?\d+/\d+)(?!["\w.])')


def parse_gram(text_or_obj, ext: LocalQuadExt | None = None) -> GramMatrix:
    """Parse the JSON Gram format, or a bare nested list when ``ext`` is given.

    Bare rationals such as 1/3 are accepted in place of JSON numbers.
    """
    try:
        if isinstance(text_or_obj, str):
            obj = json.loads(RATIONAL_TOKEN.sub(r'"\1"', text_or_obj))
        else:
            obj = text_or_obj
        if isinstance(obj, dict):
            model = local_model(int(obj["p"]), obj["splitting"])
            if ext is not None and (ext.p, ext.splitting) != (model.p, model.splitting):
                raise ContextMismatch("Gram matrix context differs from the requested one")
            ext = ext or model
            rows = obj["entries"]
        else:
            rows = obj
        if ext is None:
            raise InputError("no local context for Gram matrix")
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise InputError("entries must be a list of lists")
        return GramMatrix(ext, tuple(tuple(_parse_entry(ext, x) for x in r) for r in rows))
    except (KeyError, ValueError, ZeroDivisionError, TypeError) as e:
        raise InputError(f"malformed Gram matrix: {e}") from e
