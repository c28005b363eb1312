"""Verification suites: exact identities and cross-path agreements, grouped the way the
CLI exposes them.  Each numbered criterion returns a :class:`CriterionResult` holding
the individual checks with both sides of every comparison."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mpf

from . import analytic as an
from . import finite_groups as fg
from .assembly import corank1_unfold, divisors, hecke_faltings, hecke_numeric_derivative, rank1_global, sigma, unfold_sign_exponent
from .config import Config
from .density import local_density
from .density_poly import augment_hyperbolic, interpolate, unit_augment_check
from .errors import HermlabError, Uncovered
from .field_data import class_number, local_model, unit_count
from .hermitian import diagonal, direct_sum, gram, self_dual_gram, standard_hyperbolic
from .values import LogLinear
from .weil_index import (
    ARCHIMEDEAN_LINE,
    HERMITIAN_HYPERBOLIC,
    LINE_PAIR,
    QUADRATIC_HYPERBOLIC,
    QUADRATIC_SELF_DUAL,
    SELF_DUAL_EVEN,
    SELF_DUAL_UNRAMIFIED,
    SPLIT_ALGEBRA,
    FourthRoot,
    WeilBlock,
    weil_index,
)
from .whittaker import normalize, rank1_closed_form


@dataclass
class Check:
    name: str
    passed: bool
    lhs: str = ""
    rhs: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "status": "pass" if self.passed else "fail", "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list[Check] = field(default_factory=list)
    elapsed: float = 0.0
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, lhs="", rhs="") -> None:
        self.checks.append(Check(name, bool(passed), str(lhs), str(rhs)))

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f" ({self.error})" if self.error else ""
        return f"{tag} criterion {self.number}: {self.title} [{len(self.checks)} checks, {self.elapsed:.1f}s]{extra}"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "status": "pass" if self.passed else "fail",
            "elapsed_s": f"{self.elapsed:.3f}",
            "error": self.error,
            "tests": len(self.checks),
            "failures": len(self.failures()),
            "testcases": [c.to_json() for c in self.checks],
        }


def _unit(p: int) -> int:
    return 3 if p == 2 else 2


def _close(a, b, tol) -> bool:
    return abs(a - b) <= tol


def _nstr(x) -> str:
    return mpmath.nstr(x, 20)


# --- local densities -----------------------------------------------------------------------


def crit_base_densities(cfg: Config, res: CriterionResult) -> None:
    ext = local_model(3, "inert")
    one, three = gram(ext, [[1]]), gram(ext, [[3]])
    t0 = time.perf_counter()
    a = local_density(one, one, k_max=cfg.k_max, budget=cfg.enumeration_budget)
    b = local_density(one, three, k_max=cfg.k_max, budget=cfg.enumeration_budget)
    dt = time.perf_counter() - t0
    res.add("Den([1],[1]) at inert 3", a.value == Fraction(4, 3), a.value, "4/3")
    res.add("Den([1],[3]) at inert 3", b.value == 0, b.value, "0")
    res.add("stabilized by k=3", max(a.stabilized_at, b.stabilized_at) <= 3, (a.stabilized_at, b.stabilized_at), "<= 3")
    res.add("runtime under 1 s", dt < 1.0, f"{dt:.3f}s", "< 1s")


_INTERP_CASES = [(3, "inert"), (5, "inert"), (2, "split"), (3, "split")]


def crit_interpolation(cfg: Config, res: CriterionResult) -> None:
    for p, sp in _INTERP_CASES:
        ext = local_model(p, sp)
        u = _unit(p)
        for S in (diagonal(ext, [1]), diagonal(ext, [1, 1])):
            for j in (u, p * u, p * p * u):
                T = diagonal(ext, [j])
                tag = f"{sp} p={p} S=rank{S.n} T=[{j}]"
                P = interpolate(S, T, k_max=cfg.k_max, budget=cfg.enumeration_budget, threads=cfg.threads)
                q = ext.q
                for r in range(P.degree + 3):
                    v = local_density(augment_hyperbolic(S, r), T, k_max=cfg.k_max, budget=cfg.enumeration_budget).value
                    x = Fraction(1, q ** (2 * r))
                    res.add(f"{tag} hyperbolic r={r}", v == P(x), v, P(x))
                detail: list = []
                ok = unit_augment_check(S, T, P, r_max=3, k_max=cfg.k_max, budget=cfg.enumeration_budget, detail=detail)
                res.add(f"{tag} unit augmentation r<=3", ok, [str(d[1]) for d in detail], [str(d[2]) for d in detail])


def crit_rank_one(cfg: Config, res: CriterionResult) -> None:
    pts = [Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1)]
    for p, sp in _INTERP_CASES:
        ext = local_model(p, sp)
        S = self_dual_gram(ext, 2)
        for v in range(3):
            j = p**v
            W = normalize(S, diagonal(ext, [j]), k_max=cfg.k_max, budget=cfg.enumeration_budget, threads=cfg.threads)
            f = rank1_closed_form(j, p)
            for s in pts:
                a, b = W.evaluate(s), f(s)
                res.add(f"{sp} p={p} v={v} s={s}", a == b, a, b)
            if v == 1:
                c = W.evaluate(Fraction(1, 2))
                res.add(f"{sp} p={p} centre value", c.is_rational() and c.rational() == p + 1, c, p + 1)


def _self_dual_targets(ext, m: int):
    u = _unit(ext.p)
    if m == 1:
        return [("[u]", diagonal(ext, [u]))]
    H = standard_hyperbolic(ext)
    if m == 2:
        return [("H", H)]
    return [("H+[u]", direct_sum(H, diagonal(ext, [u])))]


def crit_self_dual(cfg: Config, res: CriterionResult, primes=(2, 3, 5), max_n: int = 3) -> None:
    for p in primes:
        for sp in ("inert", "split"):
            ext = local_model(p, sp)
            for n in range(1, max_n + 1):
                S = self_dual_gram(ext, n)
                for m in range(1, n + 1):
                    for label, T in _self_dual_targets(ext, m):
                        W = normalize(S, T, k_max=cfg.k_max, budget=cfg.enumeration_budget, threads=cfg.threads)
                        res.add(
                            f"{sp} p={p} n={n} T={label}",
                            W.is_identically_one(),
                            [str(c) for c in W.numerator.coeffs],
                            [str(c) for c in W.denominator.coeffs],
                        )


# --- analytic ------------------------------------------------------------------------------


def crit_lambda(cfg: Config, res: CriterionResult) -> None:
    an.set_precision(cfg.precision_digits)
    deltas = (-4, -7, -8, -23)
    for n in (2, 4, 6):
        for s in ("0", "0.25", "0.5", "1"):
            for d in deltas:
                a, b = an.lambda_factor(n, n, s, d), an.closed_form_volume(n, s, d)
                res.add(f"volume n={n} s={s} D={d}", _close(a.value, b.value, mpf("1e-9")), _nstr(a.value), _nstr(b.value))
    for n in (2, 6):
        for s in ("0", "0.3", "1"):
            for d in deltas:
                a, b = an.corank1_ratio(n, s, d)
                res.add(f"corank-1 ratio n={n} s={s} D={d}", _close(a.value, b.value, mpf("1e-9")), _nstr(a.value), _nstr(b.value))
    for d in (-4, -7, -23):
        r = Fraction(class_number(d), unit_count(d))
        a, _ = an.corank1_ratio(2, 0, d)
        target = -mpf(r.numerator) / r.denominator
        res.add(f"ratio at 0 D={d}", _close(a.value, target, mpf("1e-8")), _nstr(a.value), f"-{r}")


def crit_intertwining(cfg: Config, res: CriterionResult) -> None:
    an.set_precision(cfg.precision_digits)
    for m in (1, 2, 3):
        for n in (1, 2, 3, 4):
            for s in ("0.13", "0.37", "0.61"):
                a, b = an.shimura_intertwining_check(m, n, s)
                res.add(f"m={m} n={n} s={s}", _close(a.value, b.value, mpf("1e-8")), _nstr(a.value), _nstr(b.value))


def crit_volume(cfg: Config, res: CriterionResult) -> None:
    an.set_precision(cfg.precision_digits)
    from .field_data import ramified_primes

    for n, d in ((2, -7), (2, -23), (6, -15)):
        vol = an.shimura_volume(n, d, True)
        lam = an.lambda_factor(n, n, 0, d)
        res.add(f"vol = 2 Lambda n={n} D={d}", _close(vol.value, 2 * lam.value, mpf("1e-8")), _nstr(vol.value), _nstr(2 * lam.value))
        raw = an.shimura_volume(n, d, False)
        f = an.level_change_factor(n, d)
        expected = Fraction(1)
        for ell in ramified_primes(d):
            expected *= Fraction(1 + ell ** (n // 2), 2)
        res.add(f"level change n={n} D={d}", f == expected, f, expected)
        ratio = raw.value / vol.value
        res.add(
            f"level change realized n={n} D={d}",
            _close(ratio, mpf(f.numerator) / f.denominator, mpf("1e-8")),
            _nstr(ratio),
            f,
        )


# --- finite groups -------------------------------------------------------------------------


def crit_groups(cfg: Config, res: CriterionResult) -> None:
    budget = min(cfg.enumeration_budget, fg.GROUP_BUDGET)
    for kind, expect in (("sp", 24), ("o_split", 4)):
        rep = fg.group_order_report(kind, 1, 3, budget=budget)
        res.add(f"{kind}(1,3)", rep.formula_value == expect and rep.matches, rep.enumerated_value, expect)
    for d, q in ((1, 3), (2, 3), (1, 5), (3, 7)):
        r = fg.stabilizer_ratio(d, q)
        res.add(f"stabilizer ratio d={d} q={q}", r == Fraction(1 + q**d, 2), r, Fraction(1 + q**d, 2))
    i3, r7 = local_model(3, "inert"), local_model(7, "ramified")
    cases = [(i3, 1, 1), (i3, 2, 1)] + [(r7, c, 1) for c in range(1, 7)] + [(i3, 3, 2)]
    for ext, c, k in cases:
        w = fg.witt_orbit_check(ext, c, k, budget=budget)
        res.add(f"orbits {ext.splitting} p={ext.p} c={c} k={k}", w.orbit_count == 1 and w.lagrange_ok, w.orbit_count, 1)
    for ext, c, k, expect in ((i3, 1, 1, 1), (r7, 1, 1, 2), (i3, 3, 2, 4)):
        idx = fg.stabilizer_index_check(ext, c, k)
        res.add(f"stabilizer index {ext.splitting} p={ext.p} c={c} k={k}", idx == expect, idx, expect)


# --- assembly ------------------------------------------------------------------------------


def crit_hecke(cfg: Config, res: CriterionResult, j_max: int = 200) -> None:
    an.set_precision(cfg.precision_digits)
    for j in range(1, j_max + 1):
        deg, h = hecke_faltings(j)
        direct = sum(divisors(j))
        res.add(f"degree j={j}", deg == direct == sigma(1, j), deg, direct)
        num = hecke_numeric_derivative(j)
        val = h.mpf()
        ok = abs(val - num) <= mpf("1e-6") * abs(num) if num else val == 0
        res.add(f"height j={j}", ok, _nstr(val), _nstr(num))
    for p in (2, 3, 5, 7, 11, 13, 97, 199):
        _, h = hecke_faltings(p)
        want = LogLinear.make({p: Fraction(p - 1, 2)})
        res.add(f"prime j={p}", h == want, h, want)
    _, h1 = hecke_faltings(1)
    res.add("j=1", h1.is_zero(), h1, "0")


def crit_unfold(cfg: Config, res: CriterionResult) -> None:
    an.set_precision(cfg.precision_digits)
    n, m = 2, 2
    e = m * (m - 1) * (n - m - 1) // 2
    sign = -1 if e % 2 else 1
    res.add("sign exponent parity", unfold_sign_exponent(n, m) % 2 == e % 2, unfold_sign_exponent(n, m), e)
    for d in (-4, -7, -23):
        for j in (1, 3, 12):
            flat = rank1_global(j)
            for s in ("0.2", "0.7"):
                a = corank1_unfold(n, m, d, 1, flat, s)
                b = corank1_unfold(n, m, d, 1, flat, "-" + s)
                tol = mpf("1e-9") * max(mpf(1), abs(a.value))
                res.add(f"D={d} j={j} s={s}", _close(a.value, sign * b.value, tol), _nstr(a.value), _nstr(sign * b.value))


# --- Weil indices --------------------------------------------------------------------------


def _random_block(rng: random.Random) -> WeilBlock:
    choice = rng.randrange(7)
    p = rng.choice([3, 5, 7, 11, 13])
    if choice == 0:
        return WeilBlock(HERMITIAN_HYPERBOLIC, p, rng.choice(["inert", "split", "ramified"]), 2 * rng.randint(1, 3))
    if choice == 1:
        return WeilBlock(SPLIT_ALGEBRA, p, "split", rng.randint(1, 4))
    if choice == 2:
        return WeilBlock(SELF_DUAL_EVEN, p, rng.choice(["inert", "ramified"]), 2 * rng.randint(1, 2))
    if choice == 3:
        return WeilBlock(SELF_DUAL_UNRAMIFIED, p, rng.choice(["inert", "split"]), rng.randint(1, 4))
    if choice == 4:
        return WeilBlock(QUADRATIC_HYPERBOLIC, p, None, 2)
    if choice == 5:
        return WeilBlock(ARCHIMEDEAN_LINE, None, None, 1, sign=rng.choice([1, -1]))
    return WeilBlock(LINE_PAIR, p, "ramified", 2)


def crit_weil(cfg: Config, res: CriterionResult, samples: int = 100, seed: int = 20240611) -> None:
    rng = random.Random(seed)
    for t in range(samples):
        A = [_random_block(rng) for _ in range(rng.randint(1, 4))]
        B = [_random_block(rng) for _ in range(rng.randint(1, 4))]
        ga, gb, gab = weil_index(A), weil_index(B), weil_index(A + B)
        res.add(f"sample {t} multiplicative", gab == ga * gb, gab, ga * gb)
        res.add(f"sample {t} fourth power", gab**4 == FourthRoot(0), gab**4, 1)
        res.add(f"sample {t} conjugation", weil_index(A + B, conjugate=True) == gab.conj(), weil_index(A + B, conjugate=True), gab.conj())
    g = weil_index([WeilBlock(SELF_DUAL_UNRAMIFIED, 5, "inert", 3)])
    res.add("self-dual unramified block", g == FourthRoot(0), g, "1")
    g = weil_index([WeilBlock(ARCHIMEDEAN_LINE, None, None, 1)])
    res.add("archimedean line", g == FourthRoot(1), g, "i")
    g = weil_index([WeilBlock(LINE_PAIR, 7, "ramified", 2)])
    res.add("ramified line pair at 7", g == FourthRoot(2), g, "-1")
    try:
        weil_index([WeilBlock(QUADRATIC_SELF_DUAL, 2, None, 1)])
        res.add("rank-1 self-dual over Q2 is uncovered", False, "returned a value", "Uncovered")
    except Uncovered as exc:
        res.add("rank-1 self-dual over Q2 is uncovered", True, type(exc).__name__, "Uncovered")


CRITERIA: dict[int, tuple[str, Callable]] = {
    1: ("density base values and stabilization", crit_base_densities),
    2: ("interpolation and unit augmentation", crit_interpolation),
    3: ("rank-1 closed form", crit_rank_one),
    4: ("self-dual triviality", crit_self_dual),
    5: ("Lambda cross-identities", crit_lambda),
    6: ("archimedean intertwining consistency", crit_intertwining),
    7: ("volume chain", crit_volume),
    8: ("finite groups", crit_groups),
    9: ("Hecke degree and height excess", crit_hecke),
    10: ("corank-1 unfolding symmetry", crit_unfold),
    11: ("Weil-index algebra", crit_weil),
}

SUITES: dict[str, list[int]] = {
    "densities": [1, 2, 3, 4],
    "analytic": [5, 6, 7],
    "groups": [8],
    "weil": [11],
    "assembly": [9, 10],
}
SUITES["all"] = sorted(n for v in SUITES.values() for n in v)


def run_criterion(number: int, cfg: Config | None = None) -> CriterionResult:
    cfg = cfg or Config()
    title, fn = CRITERIA[number]
    res = CriterionResult(number, title)
    t0 = time.perf_counter()
    try:
        fn(cfg, res)
    except HermlabError as exc:
        res.error = f"{type(exc).__name__}: {exc}"
    res.elapsed = time.perf_counter() - t0
    return res


def run_suite(name: str, cfg: Config | None = None) -> list[CriterionResult]:
    return [run_criterion(n, cfg) for n in SUITES[name]]
