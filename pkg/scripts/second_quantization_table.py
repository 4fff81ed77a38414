#!/usr/bin/env python3
"""Dimension series of second-quantized Frobenius algebras.

For each base dimension the script prints the per-level invariant
dimensions against the Euler-product expansion prod (1-q^m)^(-dim A),
plus the shifted Poincare polynomial of each level.
"""

import argparse

from orbifrob.exact import format_rat
from orbifrob.frobenius import point_algebra, zn_algebra
from orbifrob.sympow import second_quantization


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=4)
    ap.add_argument("--dims", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--parity", type=int, choices=[0, 1], default=0)
    args = ap.parse_args()

    for d in args.dims:
        A = point_algebra() if d == 1 else zn_algebra(d)
        rep = second_quantization(A, args.nmax, args.parity)
        print(f"base {A.name} (dim {d}), parity {rep.parity}:")
        for lv in rep.levels:
            poly = " + ".join(f"{m}q^{format_rat(deg)}" for deg, m in lv.poincare)
            print(f"  n={lv.n}: total {lv.total_dim:>4}  invariants "
                  f"{lv.invariants_dim:>3}   P(q) = {poly}")
        print(f"  series:  {rep.coefficients}")
        if rep.verdict:
            print(f"  product: {rep.product_coefficients}  -> {rep.verdict}")
        print()


if __name__ == "__main__":
    main()
