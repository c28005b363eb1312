"""Hecke degrees and exact height excess, compared with a numeric derivative."""
import argparse

import mpmath

from hermlab.assembly import hecke_faltings, hecke_numeric_derivative


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--j-max", type=int, default=30)
    args = ap.parse_args()
    with mpmath.workdps(40):
        for j in range(1, args.j_max + 1):
            deg, h = hecke_faltings(j)
            num = hecke_numeric_derivative(j)
            print(f"{j:4d}  deg={deg:5d}  h={str(h):32s} {mpmath.nstr(h.mpf(), 14):>18}  numeric={mpmath.nstr(num, 14)}")


if __name__ == "__main__":
    main()
