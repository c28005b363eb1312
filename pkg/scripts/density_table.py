"""Density polynomials Den(S, [p^v u], X) for rank-1 and rank-2 self-dual S.

    python3 scripts/density_table.py --p 3 --splitting inert --v-max 3
"""
import argparse

from hermlab.density_poly import interpolate
from hermlab.field_data import local_model
from hermlab.hermitian import diagonal, self_dual_gram, standard_hyperbolic


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--splitting", default="inert", choices=["inert", "split", "ramified"])
    ap.add_argument("--v-max", type=int, default=2)
    args = ap.parse_args()
    ext = local_model(args.p, args.splitting)
    sources = [("M2", standard_hyperbolic(ext))] if ext.ramified else [("[1]", diagonal(ext, [1])), ("1_2", self_dual_gram(ext, 2))]
    for name, S in sources:
        for v in range(args.v_max + 1):
            T = diagonal(ext, [args.p**v])
            P = interpolate(S, T)
            print(f"{ext.describe()}  S={name:4s} T=[{args.p}^{v}]  P(1)={P(1)!s:>10}  coeffs={P.to_json()}")


if __name__ == "__main__":
    main()
