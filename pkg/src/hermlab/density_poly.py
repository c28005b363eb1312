"""The interpolating polynomial Den(S, T, X) with Den(S + M2^r, T) = Den(S, T, q^{-2r})."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .density import DEFAULT_BUDGET, DensityResult, local_density
from .errors import DegreeCapExceeded, RamifiedUnsupported
from .field_data import LocalQuadExt, valuation
from .hermitian import GramMatrix, direct_sum, standard_hyperbolic, unit_rank_one


@dataclass
class DensityPolynomial:
    coeffs: list[Fraction]
    ext: LocalQuadExt
    n: int
    m: int
    degree_certified_to: int = 0
    nodes: list[tuple[int, Fraction]] = field(default_factory=list)

    @property
    def degree(self) -> int:
        d = len(self.coeffs) - 1
        while d > 0 and self.coeffs[d] == 0:
            d -= 1
        return d

    def __call__(self, x) -> Fraction:
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "DensityPolynomial":
        dc = [i * c for i, c in enumerate(self.coeffs)][1:] or [Fraction(0)]
        return DensityPolynomial(dc, self.ext, self.n, self.m)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def same_polynomial(self, other: "DensityPolynomial") -> bool:
        a, b = list(self.coeffs), list(other.coeffs)
        size = max(len(a), len(b))
        a += [Fraction(0)] * (size - len(a))
        b += [Fraction(0)] * (size - len(b))
        return a == b

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs[: self.degree + 1]]


def augment_hyperbolic(S: GramMatrix, r: int) -> GramMatrix:
    if r == 0:
        return S
    return direct_sum(S, *[standard_hyperbolic(S.ext)] * r)


def augment_unit(S: GramMatrix, r: int) -> GramMatrix:
    if S.ext.ramified:
        raise RamifiedUnsupported("<1> augmentation needs an unramified extension")
    if r == 0:
        return S
    return direct_sum(S, *[unit_rank_one(S.ext)] * r)


def newton_coefficients(xs: list[Fraction], ys: list[Fraction]) -> list[Fraction]:
    """Monomial coefficients (ascending) of the interpolant through (xs, ys)."""
    n = len(xs)
    dd = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # coeffs <- coeffs * (X - xs[i]) + dd[i]
        new = [Fraction(0)] * n
        for d in range(n - 1):
            new[d + 1] += coeffs[d]
            new[d] -= coeffs[d] * xs[i]
        new[0] += dd[i]
        coeffs = new
    return coeffs


def _eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def default_degree_cap(S: GramMatrix, T: GramMatrix) -> int:
    # 2mn alone is too small once T is far from unimodular (e.g. S=[1], T=[p^2] has degree 3)
    v = abs(valuation(T.det(), T.ext.p)) if T.n and T.det() != 0 else 0
    return max(2, 2 * T.n * S.n, T.n + 2 * v + 2)


class _NodeCache:
    def __init__(self, fn: Callable[[int], Fraction], threads: int):
        self.fn = fn
        self.threads = max(1, threads)
        self.values: dict[int, Fraction] = {}

    def get(self, r: int) -> Fraction:
        if r not in self.values:
            todo = [rr for rr in range(r, r + self.threads) if rr not in self.values]
            if self.threads > 1 and len(todo) > 1:
                with ThreadPoolExecutor(self.threads) as pool:
                    for rr, v in zip(todo, pool.map(self.fn, todo)):
                        self.values[rr] = v
            else:
                self.values[r] = self.fn(r)
        return self.values[r]


def interpolate(
    S: GramMatrix,
    T: GramMatrix,
    max_degree: int | None = None,
    k_max: int = 4,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    extra_nodes: int = 2,
) -> DensityPolynomial:
    """Minimal-degree polynomial through the hyperbolic augmentation nodes, certified on
    ``extra_nodes`` further nodes."""
    q = S.ext.q
    if max_degree is None:
        max_degree = default_degree_cap(S, T)

    def node(r: int) -> Fraction:
        return local_density(augment_hyperbolic(S, r), T, k_max=k_max, budget=budget).value

    cache = _NodeCache(node, threads)
    xs = lambda r: Fraction(1, q ** (2 * r))  # noqa: E731
    for d in range(max_degree + 1):
        pts = list(range(d + 1))
        coeffs = newton_coefficients([xs(r) for r in pts], [cache.get(r) for r in pts])
        if all(_eval(coeffs, xs(r)) == cache.get(r) for r in range(d + 1, d + 1 + extra_nodes)):
            while len(coeffs) > 1 and coeffs[-1] == 0:
                coeffs.pop()
            nodes = sorted((r, v) for r, v in cache.values.items())
            return DensityPolynomial(coeffs, S.ext, S.n, T.n, extra_nodes, nodes)
    raise DegreeCapExceeded(f"no polynomial of degree <= {max_degree} fits the augmentation nodes")


def unit_augment_value(P: DensityPolynomial, r: int) -> Fraction:
    """P((-q)^{-r}) for inert, P(q^{-r}) for split."""
    q = P.ext.q
    if P.ext.splitting == "inert":
        return P(Fraction(1, (-q) ** r))
    if P.ext.splitting == "split":
        return P(Fraction(1, q**r))
    raise RamifiedUnsupported("unit augmentation rule needs an unramified extension")


def unit_augment_check(
    S: GramMatrix,
    T: GramMatrix,
    P: DensityPolynomial,
    r_max: int = 3,
    k_max: int = 4,
    budget: int = DEFAULT_BUDGET,
    detail: list | None = None,
) -> bool:
    ok = True
    for r in range(0, r_max + 1):
        lhs = local_density(augment_unit(S, r), T, k_max=k_max, budget=budget).value
        rhs = unit_augment_value(P, r)
        if detail is not None:
            detail.append((r, lhs, rhs))
        ok &= lhs == rhs
    return ok


def density_values(S: GramMatrix, T: GramMatrix, rs, k_max=4, budget=DEFAULT_BUDGET) -> list[DensityResult]:
    return [local_density(augment_hyperbolic(S, r), T, k_max=k_max, budget=budget) for r in rs]
