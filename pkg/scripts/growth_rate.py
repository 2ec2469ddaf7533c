#!/usr/bin/env python3
"""Growth rate r_N = (2 pi / N) log J_N(exp(2 pi i / N)) against 2 v_3.

Scans every N in a range, reports whether r_N is monotone, and fits
r_N = L + alpha log(N)/N + beta/N to extrapolate L.

    python scripts/growth_rate.py --n-max 2000
"""

import argparse

import numpy as np

from fig8jones.convergence import figure_eight_volume
from fig8jones.jones import kashaev_value
from fig8jones.laurent import context


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n-min", type=int, default=10)
    ap.add_argument("--n-max", type=int, default=2000)
    ap.add_argument("--precision", type=int, default=128)
    args = ap.parse_args()
    ctx = context(args.precision)
    ref = float(figure_eight_volume(args.precision))
    ns = np.arange(args.n_min, args.n_max + 1)
    rates = np.array([float(2 * ctx.pi / N * ctx.log(kashaev_value(int(N), args.precision))) for N in ns])
    diffs = np.diff(rates)
    print(f"reference 2 v3 = {ref:.15f}")
    for N in sorted({int(ns[0]), 50, 100, 200, 500, 1000, int(ns[-1])}):
        if ns[0] <= N <= ns[-1]:
            r = rates[N - ns[0]]
            print(f"  r_{N:<5} = {r:.9f}   rel gap {abs(r - ref) / ref:.3%}")
    print(f"increasing steps: {(diffs > 0).sum()}   decreasing steps: {(diffs < 0).sum()}")
    design = np.column_stack([np.ones_like(ns, dtype=float), np.log(ns) / ns, 1.0 / ns])
    (L, alpha, beta), *_ = np.linalg.lstsq(design, rates, rcond=None)
    print(f"fit L + alpha log N / N + beta / N:  L = {L:.9f}  alpha = {alpha:.6f}  beta = {beta:.6f}")
    print(f"3 pi (expected alpha for an N^(3/2) prefactor) = {3 * np.pi:.6f}")


if __name__ == "__main__":
    main()
