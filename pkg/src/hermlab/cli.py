"""Command-line interface.

Exit codes: 0 success, 1 bad input or usage, 2 a computational limit was reached.
All numbers in machine-readable output are strings.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import mpmath

from . import analytic as an
from .assembly import corank1_unfold, finite_coefficient, hecke_faltings, rank1_global, sigma
from .config import FORMATS, Config
from .density import local_density
from .density_poly import interpolate
from .errors import ComputationLimit, HermlabError, InputError, NotStabilized
from .field_data import local_model
from .hermitian import RATIONAL_TOKEN, in_dual_star, parse_gram
from .verify import SUITES, run_suite


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_matrix_arg(text: str):
    """A JSON string, or the path of a file holding one."""
    if text and os.path.isfile(text):
        with open(text) as fh:
            return fh.read()
    return text


def _int_range(text: str) -> list[int]:
    """'a..b', 'a,b,c' or a single integer."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad integer range {text!r}") from None


def _s_list(text: str) -> list[str]:
    vals = [x.strip() for x in text.split(",") if x.strip()]
    for v in vals:
        try:
            Fraction(v)
        except ValueError:
            raise InputError(f"bad value of s: {v!r}") from None
    return vals


def _s_value(text: str):
    """Exact Fraction for half-integers, otherwise the decimal string."""
    f = Fraction(text)
    return f if (2 * f).denominator == 1 else text


def _stringify(obj):
    """Every number becomes a string; booleans and null stay as they are."""
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _emit(payload, fmt: str, rows: list[dict] | None = None) -> None:
    if fmt == "json" or (fmt == "csv" and rows is None):
        print(json.dumps(_stringify(payload), indent=2))
        return
    if fmt == "csv":
        buf = io.StringIO()
        fields = list(rows[0]) if rows else []
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        if fields:
            w.writeheader()
            w.writerows(rows)
        sys.stdout.write(buf.getvalue())
        return
    if rows is not None:
        for r in rows:
            print("  ".join(f"{k}={v}" for k, v in r.items()))
        return
    for k, v in payload.items():
        print(f"{k}: {v if not isinstance(v, (dict, list)) else json.dumps(v)}")


def _config(args) -> Config:
    threads = args.threads if args.threads is not None else None
    kw = dict(
        precision_digits=args.precision,
        k_max=args.k_max,
        enumeration_budget=args.budget,
        output_format=args.format,
    )
    if threads is not None:
        kw["threads"] = threads
    cfg = Config(**kw)
    an.set_precision(cfg.precision_digits)
    return cfg


# --- commands ------------------------------------------------------------------------------


def cmd_den(args, cfg: Config) -> int:
    if args.p is None or args.splitting is None:
        raise InputError("den needs --p and --splitting")
    ext = local_model(args.p, args.splitting)
    S = parse_gram(_read_matrix_arg(args.S), ext)
    T = parse_gram(_read_matrix_arg(args.T), ext)
    out: dict = {"p": str(ext.p), "splitting": ext.splitting, "n": str(S.n), "m": str(T.n)}
    if not in_dual_star(T):
        out.update(value="0", reason="T not integral")
        _emit(out, cfg.output_format)
        return 0
    try:
        res = local_density(S, T, k_max=cfg.k_max, budget=cfg.enumeration_budget)
    except NotStabilized as exc:
        out.update(error="not stabilized", levels=[[str(k), v] for k, v in exc.values])
        _emit(out, cfg.output_format)
        return 2
    out.update(res.to_json())
    if not args.no_poly:
        P = interpolate(S, T, k_max=cfg.k_max, budget=cfg.enumeration_budget, threads=cfg.threads)
        out["polynomial"] = P.to_json()
        out["variable"] = f"X = {ext.q}^(-2r)"
    _emit(out, cfg.output_format)
    return 0


def cmd_verify(args, cfg: Config) -> int:
    suite = "groups" if args.suite == "group-orders" else args.suite
    results = run_suite(suite, cfg)
    failures = sum(0 if r.passed else 1 for r in results)
    report = {
        "suite": suite,
        "tests": str(len(results)),
        "failures": str(failures),
        "testsuites": [r.to_json() for r in results],
    }
    for r in results:
        print(r.line(), file=sys.stderr)
        for c in r.failures()[:20]:
            print(f"    {c.name}: {c.lhs} != {c.rhs}", file=sys.stderr)
    if cfg.output_format == "json":
        print(json.dumps(_stringify(report), indent=2))
    else:
        rows = [
            {"criterion": str(r.number), "title": r.title, "status": "pass" if r.passed else "fail", "checks": str(len(r.checks))}
            for r in results
        ]
        _emit(report, cfg.output_format, rows)
    return 0 if failures == 0 else 1


def cmd_table(args, cfg: Config) -> int:
    rows: list[dict] = []
    if args.kind == "hecke":
        for j in _int_range(args.j or ""):
            deg, h = hecke_faltings(j)
            rows.append({"j": str(j), "sigma1": str(deg), "height_delta": mpmath.nstr(h.mpf(), 20), "expansion": str(h)})
    elif args.kind == "sigma":
        for j in _int_range(args.j or ""):
            rows.append({"j": str(j), "k": str(args.k), "sigma": str(sigma(args.k, j))})
    else:
        if args.n is None or args.m is None or args.delta is None:
            raise InputError("table lambda needs --n, --m and --delta")
        for s in _s_list(args.s or ""):
            v = an.lambda_factor(args.m, args.n, s, args.delta)
            j = v.to_json()
            rows.append({"n": str(args.n), "m": str(args.m), "delta": str(args.delta), "s": s, **j})
    _emit({"kind": args.kind, "rows": rows}, cfg.output_format, rows)
    return 0


def _global_rows(text: str):
    raw = _read_matrix_arg(text)
    try:
        obj = json.loads(RATIONAL_TOKEN.sub(r'"\1"', raw))
    except ValueError as exc:
        raise InputError(f"malformed matrix: {exc}") from None
    if isinstance(obj, dict):
        obj = obj.get("entries")
    if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
        raise InputError("matrix must be a list of lists")

    def entry(x):
        if isinstance(x, list):
            return (Fraction(str(x[0])), Fraction(str(x[1])))
        return Fraction(str(x))

    try:
        return [[entry(x) for x in r] for r in obj]
    except (ValueError, IndexError, ZeroDivisionError) as exc:
        raise InputError(f"malformed matrix entry: {exc}") from None


def cmd_coeff(args, cfg: Config) -> int:
    if args.delta is None or args.n is None or args.T is None:
        raise InputError("coeff needs --delta, --n and --T")
    cs = finite_coefficient(_global_rows(args.T), args.delta, args.n, k_max=cfg.k_max, budget=cfg.enumeration_budget, threads=cfg.threads)
    out = cs.to_json()
    out["identically_one"] = cs.is_identically_one()
    out["values"] = {s: str(cs(_s_value(s))) for s in _s_list(args.s or "0,1/2,1")}
    _emit(out, cfg.output_format)
    return 0


def cmd_unfold(args, cfg: Config) -> int:
    if args.n is None or args.m is None or args.delta is None:
        raise InputError("unfold needs --n, --m and --delta")
    if args.j is not None:
        flat = rank1_global(int(args.j))
        label = f"rank-1 closed form j={args.j}"
    else:
        c = Fraction(args.flat_constant)
        flat = lambda s: c  # noqa: E731
        label = f"constant {c}"
    rows = []
    for s in _s_list(args.s or "0"):
        v = corank1_unfold(args.n, args.m, args.delta, args.a_sharp, flat, s)
        rows.append({"s": s, **v.to_json()})
    _emit({"n": str(args.n), "m": str(args.m), "delta": str(args.delta), "flat": label, "rows": rows}, cfg.output_format, rows if cfg.output_format != "json" else None)
    return 0


def cmd_hecke(args, cfg: Config) -> int:
    if args.j is None:
        raise InputError("hecke needs --j")
    deg, h = hecke_faltings(int(args.j))
    out = {"j": str(args.j), "degree": str(deg), "height_delta": h.to_json(), "decimal": mpmath.nstr(h.mpf(), 20)}
    _emit(out, cfg.output_format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--splitting", choices=["inert", "split", "ramified"])
    common.add_argument("--delta", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--k-max", dest="k_max", type=int, default=4)
    common.add_argument("--budget", type=int, default=10**9)
    common.add_argument("--precision", type=int, default=50)
    common.add_argument("--threads", type=int)
    common.add_argument("--format", choices=FORMATS, default="json")

    ap = _Parser(prog="hermlab", description="Hermitian local densities, Whittaker functions and normalizing factors.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("den", parents=[common], help="local density and its interpolating polynomial")
    d.add_argument("--S", required=True, help="Gram matrix JSON or a file containing it")
    d.add_argument("--T", required=True, help="Gram matrix JSON or a file containing it")
    d.add_argument("--no-poly", action="store_true", help="skip the interpolating polynomial")
    d.set_defaults(func=cmd_den)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES) + ["group-orders"])
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", parents=[common], help="tabulate sigma, Hecke data or Lambda")
    t.add_argument("kind", choices=["hecke", "sigma", "lambda"])
    t.add_argument("--j", help="range like 1..20 or a comma list")
    t.add_argument("--k", type=int, default=1)
    t.add_argument("--s", help="comma list of s values")
    t.set_defaults(func=cmd_table)

    c = sub.add_parser("coeff", parents=[common], help="finite part of a global Fourier coefficient")
    c.add_argument("--T", required=True)
    c.add_argument("--s", help="comma list of s values")
    c.set_defaults(func=cmd_coeff)

    u = sub.add_parser("unfold", parents=[common], help="corank-1 unfolding")
    u.add_argument("--a-sharp", dest="a_sharp", default="1")
    u.add_argument("--j", type=int, help="use the rank-1 closed form for j as the flat series")
    u.add_argument("--flat-constant", default="1")
    u.add_argument("--s", help="comma list of s values")
    u.set_defaults(func=cmd_unfold)

    h = sub.add_parser("hecke", parents=[common], help="Hecke degree and height excess")
    h.add_argument("--j", type=int, required=True)
    h.set_defaults(func=cmd_hecke)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ComputationLimit as exc:
        print(f"computational limit: {exc}", file=sys.stderr)
        return 2
    except HermlabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
