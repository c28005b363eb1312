"""Orders of the finite symplectic and split orthogonal groups and their Siegel parabolics,
with enumeration oracles, plus finite-level probes of lattice Witt transitivity and of
norm-one stabilizer indices.

The enumerations are finite-level evidence: they check statements about groups over
O_F at the reduction levels k = 1, 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod

import numpy as np

from .errors import BudgetExceeded, InputError
from .field_data import LocalQuadExt, is_prime
from .truncated_ring import TruncatedRing

GROUP_BUDGET = 10**8


def sp_order(d: int, q: int) -> int:
    return q ** (d * d) * prod(q ** (2 * i) - 1 for i in range(1, d + 1))


def o_split_order(d: int, q: int) -> int:
    num = 2 * q ** (d * (d - 1)) * prod(q ** (2 * i) - 1 for i in range(1, d + 1))
    return num // (q**d + 1)


def _gl_order(d: int, q: int) -> int:
    return prod(q**d - q ** (i - 1) for i in range(1, d + 1))


def parabolic_sp_order(d: int, q: int) -> int:
    return q ** (d * (d + 1) // 2) * _gl_order(d, q)


def parabolic_o_order(d: int, q: int) -> int:
    return q ** (d * (d - 1) // 2) * _gl_order(d, q)


def stabilizer_ratio(d: int, q: int) -> Fraction:
    """[Sp : P_Sp] / [O : P_O], the volume ratio of the two maximal compacts."""
    return Fraction(sp_order(d, q), parabolic_sp_order(d, q)) / Fraction(
        o_split_order(d, q), parabolic_o_order(d, q)
    )


@dataclass
class GroupOrderReport:
    kind: str
    d: int
    q: int
    formula_value: int
    enumerated_value: int | None = None

    @property
    def matches(self) -> bool | None:
        if self.enumerated_value is None:
            return None
        return self.enumerated_value == self.formula_value

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "d": self.d,
            "q": self.q,
            "formula": str(self.formula_value),
            "enumerated": None if self.enumerated_value is None else str(self.enumerated_value),
            "match": self.matches,
        }


_FORMULAS = {
    "sp": sp_order,
    "o_split": o_split_order,
    "parabolic_sp": parabolic_sp_order,
    "parabolic_o": parabolic_o_order,
}


def _gram(kind: str, d: int) -> np.ndarray:
    G = np.zeros((2 * d, 2 * d), dtype=np.int64)
    G[:d, d:] = np.eye(d, dtype=np.int64)
    G[d:, :d] = -np.eye(d, dtype=np.int64) if kind.endswith("sp") else np.eye(d, dtype=np.int64)
    return G


def enumerate_group_order(kind: str, d: int, q: int, budget: int = GROUP_BUDGET) -> int:
    """Count matrices g over F_q with g^t G g = G by a column-by-column search.

    ``kind`` is one of sp, o_split, parabolic_sp, parabolic_o; the parabolic kinds also
    require g to stabilize the span of the first d basis vectors.
    """
    if kind not in _FORMULAS:
        raise InputError(f"unknown group kind {kind!r}")
    if not is_prime(q) or q == 2:
        raise InputError("enumeration runs over F_q for an odd prime q")
    if d < 1:
        raise InputError("d must be positive")
    N = 2 * d
    G = _gram(kind, d)
    vecs = np.array(list(product(range(q), repeat=N)), dtype=np.int64)
    GV = vecs @ G % q  # row i = v_i^t G
    self_ok = np.einsum("ij,ij->i", GV, vecs) % q  # v^t G v
    parabolic = kind.startswith("parabolic")
    in_w = np.all(vecs[:, d:] == 0, axis=1)
    spent = [0]

    def extend(cols: list[int]) -> int:
        i = len(cols)
        mask = self_ok == G[i, i] % q
        if parabolic and i < d:
            mask &= in_w
        for j, c in enumerate(cols):
            # pairing of chosen column j with a candidate column i
            mask &= (GV[c] @ vecs.T) % q == G[j, i] % q
        spent[0] += len(vecs) * (i + 1)
        if spent[0] > budget:
            raise BudgetExceeded(f"group enumeration exceeded {budget} evaluations")
        cand = np.nonzero(mask)[0]
        if i == N - 1:
            return len(cand)
        return sum(extend(cols + [int(c)]) for c in cand)

    return extend([])


def group_order_report(kind: str, d: int, q: int, enumerate_: bool = True, budget: int = GROUP_BUDGET):
    rep = GroupOrderReport(kind, d, q, _FORMULAS[kind](d, q))
    if enumerate_:
        rep.enumerated_value = enumerate_group_order(kind, d, q, budget)
    return rep


# --- unitary probes over O_F / p^k --------------------------------------------------------


class _RingVectors:
    """All vectors of (O/p^k)^2 as numpy coordinate arrays, with the scaled Hermitian form
    f(x, y) = conj(x1) y2 + eps conj(x2) y1 of the hyperbolic plane (eps = -1 when
    ramified), which is the form d * h with h the Gram matrix having d^{-1} off the
    diagonal."""

    def __init__(self, R: TruncatedRing):
        self.R = R
        ex, ey = R.all_elements()
        E = len(ex)
        i1, i2 = np.divmod(np.arange(E * E, dtype=np.int64), E)
        self.E = E
        self.x1 = (ex[i1], ey[i1])
        self.x2 = (ex[i2], ey[i2])
        self.eps = -1 if R.ext.ramified else 1

    def form(self, a1, a2, b1, b2):
        R, M = self.R, self.R.modulus
        u = R.vmul(*R.vconj(*a1), *b2)
        w = R.vmul(*R.vconj(*a2), *b1)
        return (u[0] + self.eps * w[0]) % M, (u[1] + self.eps * w[1]) % M

    def hermitian_norm(self, a1, a2):
        """h(x, x) = Tr(conj(x1) x2 / d) as an integer mod p^k."""
        R, M = self.R, self.R.modulus
        w = R.vmul(*R.vconj(*a1), *a2)
        if R.ext.ramified:
            # d = delta = theta (odd p); w / delta = w_y + w_x / delta has trace 2 w_y
            return (2 * w[1]) % M
        return R.vtrace(*w)


def _unitary_group(V: _RingVectors, budget: int):
    """Columns (g1, g2) of every g preserving f; returned as index arrays into V."""
    idx = np.arange(V.E * V.E)
    fx = V.form(V.x1, V.x2, V.x1, V.x2)
    iso = idx[(fx[0] == 0) & (fx[1] == 0)]
    cols1, cols2 = [], []
    if len(iso) * len(idx) > budget:
        raise BudgetExceeded("unitary group enumeration exceeds the budget")
    for c in iso:
        a1 = (V.x1[0][c], V.x1[1][c])
        a2 = (V.x2[0][c], V.x2[1][c])
        pair = V.form(a1, a2, (V.x1[0][iso], V.x1[1][iso]), (V.x2[0][iso], V.x2[1][iso]))
        ok = iso[(pair[0] == 1 % V.R.modulus) & (pair[1] == 0)]
        cols1.append(np.full(len(ok), c))
        cols2.append(ok)
    return np.concatenate(cols1), np.concatenate(cols2)


@dataclass
class WittReport:
    orbit_count: int
    vector_count: int
    group_order: int
    orbit_sizes: list[int] = field(default_factory=list)

    @property
    def lagrange_ok(self) -> bool:
        return all(self.group_order % s == 0 for s in self.orbit_sizes)

    def to_json(self) -> dict:
        return {
            "orbit_count": self.orbit_count,
            "vector_count": self.vector_count,
            "group_order": self.group_order,
            "orbit_sizes": self.orbit_sizes,
        }


def _check_c(ext: LocalQuadExt, c: int, k: int):
    p = ext.p
    if k not in (1, 2):
        raise InputError("witt probes run at k = 1 or 2")
    if c % p == 0:
        if ext.splitting != "inert" or c % (p * p) == 0 or k < 2:
            raise InputError("c must be a unit, or p times a unit over an inert ring at k = 2")


def witt_orbit_check(ext: LocalQuadExt, c: int, k: int = 1, budget: int = GROUP_BUDGET) -> WittReport:
    """Orbits of U(M2)(O/p^k) on {x in (O/p^k)^2 : h(x, x) = c}."""
    _check_c(ext, c, k)
    R = TruncatedRing(ext, k)
    V = _RingVectors(R)
    M = R.modulus
    g1, g2 = _unitary_group(V, budget)
    targets = np.nonzero(V.hermitian_norm(V.x1, V.x2) == c % M)[0]
    remaining = set(targets.tolist())
    sizes = []
    E = V.E
    while remaining:
        x = next(iter(remaining))
        s1 = (V.x1[0][x], V.x1[1][x])
        s2 = (V.x2[0][x], V.x2[1][x])
        # g x = x_1 * col1 + x_2 * col2, per coordinate
        a = R.vmul(V.x1[0][g1], V.x1[1][g1], *s1)
        b = R.vmul(V.x1[0][g2], V.x1[1][g2], *s2)
        y1 = ((a[0] + b[0]) % M, (a[1] + b[1]) % M)
        a = R.vmul(V.x2[0][g1], V.x2[1][g1], *s1)
        b = R.vmul(V.x2[0][g2], V.x2[1][g2], *s2)
        y2 = ((a[0] + b[0]) % M, (a[1] + b[1]) % M)
        flat = (y1[0] * M + y1[1]) * E + (y2[0] * M + y2[1])
        orbit = set(np.unique(flat).tolist())
        if x not in orbit:
            raise InputError("the enumerated group does not contain the identity")
        sizes.append(len(orbit))
        remaining -= orbit
    return WittReport(len(sizes), len(targets), len(g1), sizes)


def stabilizer_index_check(ext: LocalQuadExt, c: int, k: int) -> int:
    """Index of {alpha = 1 mod c d} inside the norm-one elements of O/p^k."""
    _check_c(ext, c, k)
    R = TruncatedRing(ext, k)
    M = R.modulus
    ex, ey = R.all_elements()
    ones = np.nonzero(R.vnorm(ex, ey) == 1 % M)[0]
    gx, gy = R.mul(R.embed(c), R.different_elem())
    mx, my = R.vmul(ex, ey, np.full_like(ex, gx), np.full_like(ey, gy))
    ideal = set((mx * M + my).tolist())
    shifted = ((ex[ones] - 1) % M) * M + ey[ones]
    inside = sum(1 for v in shifted.tolist() if v in ideal)
    if len(ones) % inside:
        raise InputError("subgroup count does not divide the group order")
    return len(ones) // inside
