"""Local representation densities Den(S, T) by exact counting over O/p^k.

Two counting routes are provided:

* ``enumerate``: column-by-column search over x with pruning on each completed entry of
  conj(x)^t S x.  Simple and independent; used as the oracle on small instances.
* ``fourier``: S is split (by unimodular base change) into small orthogonal blocks; each
  block's value distribution on the residue group A = Herm*/p^k Herm* is tabulated and the
  blocks are convolved.  Convolution runs through an FFT whose coefficients are checked to be
  integral (they are Hermitian Gauss sums), then summed exactly by grouping equal terms.
  When the coefficients are not integral (ramified blocks) an exact big-integer convolution
  is used instead.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, ContextMismatch, NotIntegral, NotStabilized
from .field_data import LocalQuadExt, valuation
from .hermitian import (
    FieldElement,
    GramMatrix,
    det_valuation,
    different,
    in_dual_star,
    is_integral,
    standard_hyperbolic,
)
from .truncated_ring import TruncatedRing, reduce_rational

DEFAULT_BUDGET = 10**9
# largest residue group handled by the FFT route (complex128 entries)
MAX_GROUP = 2**23


@dataclass
class DensityResult:
    value: Fraction
    stabilized_at: int
    raw_counts: list[tuple[int, int]] = field(default_factory=list)
    certified_by: str = "consecutive"

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "stabilized_at": self.stabilized_at,
            "raw_counts": [[k, str(c)] for k, c in self.raw_counts],
            "certified_by": self.certified_by,
        }


def normalizer_exponent(n: int, m: int) -> int:
    return m * (2 * n - m)


# ----------------------------------------------------------------------------- block data


class _Block:
    """Numeric data of an r x r Gram block at level k."""

    def __init__(self, g: GramMatrix, ring: TruncatedRing):
        self.ring = ring
        self.r = g.n
        M = ring.modulus
        p = ring.p
        dd = different(g.ext)
        self.diag = [reduce_rational(g[a, a].a, M, p) for a in range(self.r)]
        self.beta = [[ring.from_field(dd * g[a, b]) for b in range(self.r)] for a in range(self.r)]
        self.key = (tuple(self.diag), tuple(tuple(r) for r in self.beta))

    def tr_d(self, wx, wy):
        """Tr(w / d) for w in O."""
        ring = self.ring
        if ring.ext.ramified:
            return (2 * wy) % ring.modulus
        return ring.vtrace(wx, wy)

    def values(self, cols):
        """cols[i][a] = (X, Y) arrays: entry (a, i) of x.  Returns coordinate arrays."""
        ring = self.ring
        M = ring.modulus
        m = len(cols)
        out = []
        for i in range(m):
            acc = 0
            for a in range(self.r):
                if self.diag[a]:
                    acc = acc + self.diag[a] * ring.vnorm(*cols[i][a])
                for b in range(a + 1, self.r):
                    bx, by = self.beta[a][b]
                    if bx == 0 and by == 0:
                        continue
                    cx, cy = ring.vconj(*cols[i][a])
                    zx, zy = ring.vmul(cx, cy, bx, by)
                    wx, wy = ring.vmul(zx, zy, *cols[i][b])
                    acc = acc + self.tr_d(wx, wy)
            out.append(np.asarray(acc, dtype=np.int64) % M)
        for i in range(m):
            for j in range(i + 1, m):
                ax = ay = 0
                for a in range(self.r):
                    cx, cy = ring.vconj(*cols[i][a])
                    for b in range(self.r):
                        bx, by = self.beta[a][b]
                        if bx == 0 and by == 0:
                            continue
                        zx, zy = ring.vmul(cx, cy, bx, by)
                        wx, wy = ring.vmul(zx, zy, *cols[j][b])
                        ax = ax + wx
                        ay = ay + wy
                out.append(np.asarray(ax, dtype=np.int64) % M)
                out.append(np.asarray(ay, dtype=np.int64) % M)
        # a zero block yields scalars; give every output the shape of the inputs
        shape = np.broadcast(*[c for col in cols for pair in col for c in pair]).shape
        return [np.broadcast_to(o, shape) for o in out]


def target_coords(T: GramMatrix, ring: TruncatedRing) -> list[int]:
    M, p = ring.modulus, ring.p
    dd = different(T.ext)
    m = T.n
    out = [reduce_rational(T[i, i].a, M, p) for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            out.extend(ring.from_field(dd * T[i, j]))
    return out


def _flat(coords, M):
    idx = np.zeros(np.broadcast(*coords).shape if len(coords) > 1 else np.shape(coords[0]), dtype=np.int64)
    for c in reversed(coords):
        idx = idx * M + c
    return idx


# ----------------------------------------------------------------------------- block splitting


def _is_unit(ext: LocalQuadExt, x: FieldElement) -> bool:
    return x.norm() != 0 and valuation(x.norm(), ext.p) == 0


def split_blocks(S: GramMatrix) -> list[GramMatrix]:
    """Orthogonal blocks of a lattice isometric to S (unimodular base changes only)."""
    ext = S.ext
    G = [list(r) for r in S.entries]
    zero = FieldElement(Fraction(0), Fraction(0), ext.delta_sq)
    active = list(range(S.n))
    blocks: list[GramMatrix] = []

    def peel(i):
        piv = G[i][i]
        inv = piv.inverse()
        coef = {j: G[i][j] * inv for j in active if j != i}
        if not all(is_integral(ext, c) for c in coef.values()):
            return False
        # e_j <- e_j - (G_ij / G_ii) e_i
        for j in active:
            if j == i:
                continue
            for l in active:
                if l == i:
                    continue
                G[j][l] = G[j][l] - G[j][i] * inv * G[i][l]
        for j in active:
            if j != i:
                G[i][j] = zero
                G[j][i] = zero
        blocks.append(GramMatrix(ext, ((piv,),)))
        active.remove(i)
        return True

    progress = True
    while active and progress:
        progress = False
        for i in list(active):
            if _is_unit(ext, G[i][i]) and peel(i):
                progress = True
                break
        if progress or ext.ramified:
            continue
        # unramified: a unit off the diagonal can be moved onto it
        for i, j in itertools.permutations(active, 2):
            if not _is_unit(ext, G[i][j]):
                continue
            for t in _trace_candidates(ext):
                val = G[i][i] + (G[i][j] * t).trace() + t.norm() * G[j][j]
                if _is_unit(ext, val):
                    _shear(G, active, i, j, t)
                    progress = True
                    break
            if progress:
                break
    for blk in _components(ext, G, active):
        # a ramified plane with Gram in Herm* and det of valuation -1 is d^{-1}-modular of
        # odd scale, hence hyperbolic
        if ext.ramified and blk.n == 2 and in_dual_star(blk) and det_valuation(blk) == -1:
            blk = standard_hyperbolic(ext)
        blocks.append(blk)
    return blocks


def _trace_candidates(ext):
    d = ext.delta_sq
    al, be = ext.delta_coords()
    theta = FieldElement(-al / be, 1 / be, d)
    one = FieldElement(Fraction(1), Fraction(0), d)
    return [one, theta, one + theta]


def _shear(G, active, i, j, t):
    """e_i <- e_i + t e_j."""
    # column i of G <- col_i + col_j * t ; row i <- row_i + conj(t) * row_j
    for l in active:
        G[l][i] = G[l][i] + G[l][j] * t
    for l in active:
        G[i][l] = G[i][l] + t.conj() * G[j][l]


def _components(ext, G, active):
    seen = set()
    out = []
    for s in active:
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in active:
                if j not in seen and not G[i][j].is_zero():
                    seen.add(j)
                    stack.append(j)
        comp.sort()
        out.append(GramMatrix(ext, tuple(tuple(G[i][j] for j in comp) for i in comp)))
    return out


# ----------------------------------------------------------------------------- histograms


def _block_cost(block: GramMatrix, m: int, ring: TruncatedRing) -> int:
    M = ring.modulus
    if block.n == 2 and m == 1 and _Block(block, ring).diag == [0, 0]:
        return M * M
    return (M * M) ** (block.n * m)


def block_histogram(block: GramMatrix, m: int, ring: TruncatedRing, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Counts of conj(x)^t B x over x in (O/p^k)^{r x m}, indexed by flattened coordinates."""
    M = ring.modulus
    size = M ** (m * m)
    b = _Block(block, ring)
    r = block.n
    if r == 2 and m == 1 and b.diag == [0, 0]:
        return _hyperbolic_line_histogram(b, ring)
    cells = r * m
    total = (M * M) ** cells
    if total > budget:
        raise BudgetExceeded(f"block enumeration needs {total} points (budget {budget})")
    hist = np.zeros(size, dtype=np.int64)
    E = M * M
    # enumerate the first cell in python when the rest would be too large
    outer = 0
    while E ** (cells - outer) > 2**22 and outer < cells:
        outer += 1
    inner_cells = cells - outer
    inner = np.arange(E**inner_cells, dtype=np.int64)
    for head in itertools.product(range(E), repeat=outer):
        idx = []
        for c in range(cells):
            if c < outer:
                e = np.full(1, head[c], dtype=np.int64)
            else:
                e = (inner // (E ** (c - outer))) % E
            idx.append(e)
        cols = [[None] * r for _ in range(m)]
        for c in range(cells):
            a, i = divmod(c, m)
            cols[i][a] = (idx[c] // M, idx[c] % M)
        flat = _flat(b.values(cols), M)
        flat = np.broadcast_to(flat, inner.shape)
        hist += np.bincount(flat, minlength=size)
    return hist


def _hyperbolic_line_histogram(b: _Block, ring: TruncatedRing) -> np.ndarray:
    """m = 1, zero-diagonal plane: the value is additive in the second coordinate."""
    M, p = ring.modulus, ring.p
    x, y = ring.all_elements()
    cx, cy = ring.vconj(x, y)
    zx, zy = ring.vmul(cx, cy, *b.beta[0][1])
    # value = Tr((z * w) / d) is linear in w = s + t*theta with coefficients c1, c2
    c1 = b.tr_d(zx, zy)
    tx, ty = ring.vmul(zx, zy, np.zeros_like(zx), np.ones_like(zy))
    c2 = b.tr_d(tx, ty)
    g = np.gcd(np.gcd(c1, c2), M)
    hist = np.zeros(M, dtype=object)
    for gv, cnt in zip(*np.unique(g, return_counts=True)):
        gv = int(gv)
        mult = M * gv  # M^2 points over M/g values
        hist[::gv] += int(cnt) * mult
    return hist


# ----------------------------------------------------------------------------- convolution


def _ramanujan(t: int, p: int, k: int) -> int:
    M = p**k
    t %= M
    v = k if t == 0 else valuation(t, p)
    if v >= k:
        return M - M // p
    if v == k - 1:
        return -(M // p)
    return 0


def _count_fourier(hists: list[tuple[np.ndarray, int]], tflat_coords, ring: TruncatedRing, m: int):
    """Exact count via integral Gauss sums; returns None when they are not integral."""
    M, p, k = ring.modulus, ring.p, ring.k
    shape = (M,) * (m * m)
    gs = []
    for h, mult in hists:
        f = np.fft.fftn(np.asarray(h, dtype=np.float64).reshape(shape[::-1]))
        re = np.rint(f.real)
        scale = max(1.0, float(np.abs(f).max()))
        if np.abs(f.imag).max() > 1e-6 * scale ** 0.5 + 1e-3 or np.abs(f.real - re).max() > 1e-3:
            return None
        gs.append((re.astype(np.int64).ravel(), mult))
    # character index w, coordinates in reversed axis order to match the reshape
    D = m * m
    w = np.indices(shape, dtype=np.int64).reshape(D, -1)
    t = np.zeros(w.shape[1], dtype=np.int64)
    for c in range(D):
        t = (t + tflat_coords[D - 1 - c] * w[c]) % M
    # encode (t, G_1, G_2, ...) as one integer key; 1-d unique is much faster than axis=0
    key = t.copy()
    base = M
    levels = []
    for g, _ in gs:
        vals, inv = np.unique(g, return_inverse=True)
        levels.append(vals.tolist())
        key = key + base * inv.astype(np.int64)
        base *= len(vals)
    keys, counts = np.unique(key, return_counts=True)
    total = 0
    cache: dict[int, int] = {}
    for kv, cnt in zip(keys.tolist(), counts.tolist()):
        tv = kv % M
        rv = cache.get(tv)
        if rv is None:
            rv = cache[tv] = _ramanujan(tv, p, k)
        if rv == 0:
            continue
        rest = kv // M
        prod = 1
        for vals, (_, mult) in zip(levels, gs):
            rest, i = divmod(rest, len(vals))
            prod *= vals[i] ** mult
        total += cnt * prod * rv
    denom = (M - M // p) * M**D
    if total % denom:
        raise ArithmeticError("fourier count is not integral")
    return total // denom


def _kron_conv(a: list[int], b: list[int], M: int, D: int) -> list[int]:
    """Exact cyclic convolution on (Z/M)^D by Kronecker substitution."""
    L = 2 * M - 1
    bits = (max(max(a), 1) * max(max(b), 1) * M**D).bit_length() + 1

    def pack(h):
        acc = 0
        for flat, val in enumerate(h):
            if val:
                idx = 0
                rem = flat
                mul = 1
                for _ in range(D):
                    rem, c = divmod(rem, M)
                    idx += c * mul
                    mul *= L
                acc |= int(val) << (idx * bits)
        return acc

    prod = pack(a) * pack(b)
    out = [0] * (M**D)
    mask = (1 << bits) - 1
    pos = 0
    while prod:
        val = prod & mask
        prod >>= bits
        if val:
            rem = pos
            flat = 0
            mul = 1
            for _ in range(D):
                rem, c = divmod(rem, L)
                flat += (c % M) * mul
                mul *= M
            out[flat] += val
        pos += 1
    return out


def _count_exact(hists, tflat: int, ring: TruncatedRing, m: int, budget: int) -> int:
    M = ring.modulus
    D = m * m
    if (M**D) ** 2 > budget * 100:
        raise BudgetExceeded("exact convolution over the residue group is too large")
    acc = None
    for h, mult in hists:
        h = [int(v) for v in h]
        for _ in range(mult):
            acc = h if acc is None else _kron_conv(acc, h, M, D)
    return acc[tflat]


# ----------------------------------------------------------------------------- public API


def _check_inputs(S: GramMatrix, T: GramMatrix):
    if S.ext != T.ext:
        raise ContextMismatch("S and T come from different local models")
    if not in_dual_star(S):
        raise NotIntegral("S is not in Herm^*")
    if not in_dual_star(T):
        raise NotIntegral("T is not in Herm^*")


def count_solutions(S: GramMatrix, T: GramMatrix, k: int, budget: int = DEFAULT_BUDGET, method: str = "auto") -> int:
    """#{x in M_{n,m}(O/p^k) : conj(x)^t S x - T in p^k Herm^*}."""
    _check_inputs(S, T)
    m, n = T.n, S.n
    if m == 0:
        return 1
    ring = TruncatedRing(S.ext, k)
    if method == "enumerate":
        return count_by_enumeration(S, T, ring, budget)
    M = ring.modulus
    if n == 0:
        return 1 if all(c == 0 for c in target_coords(T, ring)) else 0
    D = m * m
    if M**D > MAX_GROUP:
        raise BudgetExceeded(f"residue group of size {M**D} exceeds {MAX_GROUP}")
    blocks = split_blocks(S)
    kinds: dict = {}
    for blk in blocks:
        key = _Block(blk, ring).key
        if key in kinds:
            kinds[key][1] += 1
        else:
            kinds[key] = [blk, 1]
    work = sum(_block_cost(b, m, ring) for b, _ in kinds.values())
    if work > budget:
        raise BudgetExceeded(f"enumeration needs {work} points (budget {budget})")
    hists = [(block_histogram(b, m, ring, budget), mult) for b, mult in kinds.values()]
    tc = target_coords(T, ring)
    if method in ("auto", "fourier"):
        res = _count_fourier(hists, tc, ring, m)
        if res is not None:
            return res
        if method == "fourier":
            raise ArithmeticError("Gauss sums are not integral for this model")
    tflat = 0
    for c in reversed(tc):
        tflat = tflat * M + c
    return _count_exact(hists, tflat, ring, m, budget)


def count_by_enumeration(S: GramMatrix, T: GramMatrix, ring: TruncatedRing, budget: int = DEFAULT_BUDGET) -> int:
    """Column-by-column search; each column is pruned on its diagonal entry and on its
    pairings with the earlier columns."""
    n, m = S.n, T.n
    M = ring.modulus
    npts = (M * M) ** n
    if npts * max(1, m) > budget:
        raise BudgetExceeded(f"enumeration needs {npts} vectors per column (budget {budget})")
    b = _Block(S, ring)
    tc = target_coords(T, ring)
    E = M * M
    idx = np.arange(npts, dtype=np.int64)
    vec = [((idx // E**a) % E // M, (idx // E**a) % M) for a in range(n)]
    self_val = b.values([vec])[0]
    cand = [np.nonzero(self_val == tc[i])[0] for i in range(m)]

    def pair(ii, jj, i_sel, j_sel):
        cols = [[(vec[a][0][i_sel], vec[a][1][i_sel]) for a in range(n)], [(vec[a][0][j_sel], vec[a][1][j_sel]) for a in range(n)]]
        v = b.values(cols)
        return v[2], v[3]

    off_pos = {}
    pos = m
    for i in range(m):
        for j in range(i + 1, m):
            off_pos[(i, j)] = pos
            pos += 2

    def rec(j, chosen):
        if j == m:
            return 1
        c = cand[j]
        ok = np.ones(len(c), dtype=bool)
        for i, xi in enumerate(chosen):
            sel = np.full(len(c), xi, dtype=np.int64)
            vx, vy = pair(i, j, sel, c)
            q = off_pos[(i, j)]
            ok &= (vx == tc[q]) & (vy == tc[q + 1])
        survivors = c[ok]
        if j == m - 1:
            return int(len(survivors))
        return sum(rec(j + 1, chosen + [int(x)]) for x in survivors)

    return rec(0, [])


def _k_start(T: GramMatrix) -> int:
    """First level worth comparing: below v_p(det T) + 1 the residues cannot see T."""
    v = valuation(T.det(), T.ext.p) if T.n else 0
    return 1 + max(0, v)


def _unimodular(g: GramMatrix) -> bool:
    return g.n == 0 or valuation(g.det(), g.ext.p) == 0


_DENSITY_MEMO: dict = {}


def local_density(
    S: GramMatrix,
    T: GramMatrix,
    k_max: int = 4,
    budget: int = DEFAULT_BUDGET,
    method: str = "auto",
) -> DensityResult:
    """Den(S, T): the normalized count at the first pair of consecutive levels that agree.

    Results are memoized per (S, T, k_max, budget, method); treat them as read-only.
    """
    key = (S, T, k_max, budget, method)
    hit = _DENSITY_MEMO.get(key)
    if hit is None:
        hit = _DENSITY_MEMO[key] = _local_density(S, T, k_max, budget, method)
    return hit


def _local_density(S, T, k_max, budget, method) -> DensityResult:
    if S.ext != T.ext:
        raise ContextMismatch("S and T come from different local models")
    if not in_dual_star(S):
        raise NotIntegral("S is not in Herm^*")
    n, m = S.n, T.n
    if n < m or not in_dual_star(T):
        return DensityResult(Fraction(0), 0, [], "short-circuit")
    if m == 0:
        return DensityResult(Fraction(1), 0, [], "short-circuit")
    q = S.ext.q
    e = normalizer_exponent(n, m)
    k = _k_start(T)
    raw: list[tuple[int, int]] = []
    prev = None
    while k <= k_max:
        try:
            c = count_solutions(S, T, k, budget, method)
        except BudgetExceeded:
            smooth = (
                prev is not None
                and len(raw) == 1
                and raw[0][0] == 1
                and not S.ext.ramified
                and _unimodular(S)
                and _unimodular(T)
            )
            if smooth:
                # unimodular S, T over an unramified ring: the representation scheme is
                # smooth, so Hensel lifting makes level 1 exact
                return DensityResult(prev, 1, raw, "smooth")
            raise
        raw.append((k, c))
        val = Fraction(c, q ** (k * e))
        if prev is not None and val == prev:
            return DensityResult(val, k, raw)
        prev = val
        k += 1
    vals = [(kk, str(Fraction(cc, q ** (kk * e)))) for kk, cc in raw]
    raise NotStabilized(f"densities did not stabilize by k={k_max}: {vals}", vals)
