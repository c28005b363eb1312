"""Symbolic Weil indices and epsilon factors, restricted to the cases with known values.

A space is described as an orthogonal sum of blocks.  Each block either has a known
index (a fourth root of unity) or makes the whole request ``Uncovered``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import Uncovered
from .field_data import LocalQuadExt, kronecker


@dataclass(frozen=True)
class FourthRoot:
    exponent: int = 0

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % 4)

    def __mul__(self, o: "FourthRoot") -> "FourthRoot":
        return FourthRoot(self.exponent + o.exponent)

    def __pow__(self, k: int) -> "FourthRoot":
        return FourthRoot(self.exponent * k)

    def conj(self) -> "FourthRoot":
        return FourthRoot(-self.exponent)

    def inverse(self) -> "FourthRoot":
        return self.conj()

    def to_complex(self) -> complex:
        return [1, 1j, -1, -1j][self.exponent]

    def __str__(self):
        return ["1", "i", "-1", "-i"][self.exponent]


ONE = FourthRoot(0)
I = FourthRoot(1)

# block kinds
HERMITIAN_HYPERBOLIC = "hermitian_hyperbolic"  # Gram [[0,1_d],[1_d,0]]
SPLIT_ALGEBRA = "split_algebra"  # F_v = F+ x F+
SELF_DUAL_EVEN = "self_dual_even"  # even rank, self-dual lattice, unramified or odd residue char
SELF_DUAL_UNRAMIFIED = "self_dual_unramified"  # unramified, self-dual lattice, psi unramified
QUADRATIC_HYPERBOLIC = "quadratic_hyperbolic"
QUADRATIC_SELF_DUAL = "quadratic_self_dual"  # quadratic space with a self-dual lattice
ARCHIMEDEAN_LINE = "archimedean_line"  # the Hermitian line C over R, psi = e^{2 pi i x}
RAMIFIED_LINE = "ramified_line"  # a single line over a ramified extension: value unknown
LINE_PAIR = "line_pair"  # two copies of the same line: gamma(F_v)^2 = eta(-1)

KINDS = (
    HERMITIAN_HYPERBOLIC,
    SPLIT_ALGEBRA,
    SELF_DUAL_EVEN,
    SELF_DUAL_UNRAMIFIED,
    QUADRATIC_HYPERBOLIC,
    QUADRATIC_SELF_DUAL,
    ARCHIMEDEAN_LINE,
    RAMIFIED_LINE,
    LINE_PAIR,
)


@dataclass(frozen=True)
class WeilBlock:
    kind: str
    p: int | None = None  # None for the real place
    splitting: str | None = None
    rank: int = 1
    psi_unramified: bool = True
    sign: int = 1  # archimedean lines: +1 positive, -1 negative definite


def eta_minus_one(p: int | None, splitting: str | None) -> int:
    """eta_v(-1) for the quadratic character of F_v / F+_v."""
    if p is None:
        return -1  # sign character of C/R
    if splitting in ("split", "inert"):
        return 1
    # ramified, odd p: Hilbert symbol (-1, p*unit)_p = (-1/p)
    return kronecker(-1, p)


def block_index(b: WeilBlock) -> FourthRoot:
    k = b.kind
    if k in (HERMITIAN_HYPERBOLIC, SPLIT_ALGEBRA, QUADRATIC_HYPERBOLIC):
        return ONE
    if k == SELF_DUAL_EVEN:
        if b.rank % 2 or b.p is None:
            raise Uncovered("even-rank self-dual case needs even rank at a finite place")
        if b.splitting == "ramified" and b.p == 2:
            raise Uncovered("ramified dyadic self-dual spaces are not covered")
        return ONE
    if k == SELF_DUAL_UNRAMIFIED:
        if b.p is None or b.splitting not in ("inert", "split") or not b.psi_unramified:
            raise Uncovered("needs an unramified extension and an unramified character")
        return ONE
    if k == QUADRATIC_SELF_DUAL:
        if b.p is None or b.p == 2 or not b.psi_unramified:
            raise Uncovered("self-dual quadratic case needs odd residue characteristic and unramified psi")
        return ONE
    if k == ARCHIMEDEAN_LINE:
        return I if b.sign > 0 else I.conj()
    if k == LINE_PAIR:
        return FourthRoot(0 if eta_minus_one(b.p, b.splitting) == 1 else 2)
    if k == RAMIFIED_LINE:
        raise Uncovered("the index of a single ramified line is not determined here")
    raise Uncovered(f"unknown block kind {k!r}")


def weil_index(blocks, conjugate: bool = False) -> FourthRoot:
    """Index of the orthogonal sum of ``blocks`` for psi (or its conjugate)."""
    out = ONE
    for b in blocks:
        out = out * block_index(b)
    return out.conj() if conjugate else out


@dataclass(frozen=True)
class EpsilonFactor:
    """eps(s, eta, psi) = p^{-exponent*(s - 1/2)} * gamma, gamma possibly unknown."""

    p: int
    exponent: int  # c(psi) + v_p(Delta)
    gamma: FourthRoot | None
    gamma_square: FourthRoot
    conjugate: bool = False

    def is_constant_one(self) -> bool:
        return self.exponent == 0 and self.gamma == ONE

    def conj(self) -> "EpsilonFactor":
        g = self.gamma.conj() if self.gamma is not None else None
        return EpsilonFactor(self.p, self.exponent, g, self.gamma_square.conj(), not self.conjugate)

    def p_power(self, s) -> Fraction | float:
        """|p^{c} Delta|^{s - 1/2} at s."""
        e = -self.exponent * (s - Fraction(1, 2) if isinstance(s, (int, Fraction)) else s - 0.5)
        return Fraction(self.p) ** e if isinstance(e, Fraction) and e.denominator == 1 else self.p ** float(e)


def epsilon_weil_relation(ext: LocalQuadExt, c_psi: int = 0) -> EpsilonFactor:
    exponent = c_psi + ext.different_exponent
    sq = FourthRoot(0 if eta_minus_one(ext.p, ext.splitting) == 1 else 2)
    if ext.splitting in ("inert", "split") and c_psi == 0:
        gamma = ONE
    elif ext.splitting == "split":
        gamma = ONE  # eta trivial: epsilon of the trivial character with this psi has gamma = 1
    else:
        gamma = None
    return EpsilonFactor(ext.p, exponent, gamma, sq)


def hermitian_space_blocks(ext: LocalQuadExt, rank: int, det_valuation: int, hyperbolic: bool = False) -> list[WeilBlock]:
    """Blocks for a Hermitian space spanned by a lattice with the given data.

    ``hyperbolic`` marks a space known to be an orthogonal sum of hyperbolic planes.
    """
    p, sp = ext.p, ext.splitting
    if hyperbolic:
        return [WeilBlock(HERMITIAN_HYPERBOLIC, p, sp, rank)]
    if sp == "split":
        return [WeilBlock(SPLIT_ALGEBRA, p, sp, rank)]
    if sp == "inert" and det_valuation % 2 == 0:
        # the space contains a self-dual lattice (unit determinant class)
        return [WeilBlock(SELF_DUAL_UNRAMIFIED, p, sp, rank)]
    raise Uncovered("Hermitian space outside the covered cases")
