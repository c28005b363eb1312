"""Lambda_n(s) against its closed form, and the corank-1 ratio at s = 0 against -h/w."""
import argparse

import mpmath

from hermlab import analytic as an


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--deltas", default="-4,-7,-8,-23")
    ap.add_argument("--precision", type=int, default=50)
    args = ap.parse_args()
    an.set_precision(args.precision)
    deltas = [int(d) for d in args.deltas.split(",")]
    print("n  delta  s     lambda_n(s)               |difference|")
    for n in (2, 4, 6):
        for d in deltas:
            for s in ("0", "0.25", "0.5", "1"):
                a = an.lambda_factor(n, n, s, d)
                b = an.closed_form_volume(n, s, d)
                print(f"{n}  {d:5d}  {s:5s} {mpmath.nstr(a.re, 18):>24}  {mpmath.nstr(abs(a.value - b.value), 3)}")
    print()
    for d in deltas:
        direct, _ = an.corank1_ratio(2, 0, d)
        print(f"delta={d:4d}  ratio(0)={mpmath.nstr(direct.re, 15)}  -h/w={-an.class_number_ratio(d)}  h_cm={mpmath.nstr(an.h_cm(d), 12)}")


if __name__ == "__main__":
    main()
