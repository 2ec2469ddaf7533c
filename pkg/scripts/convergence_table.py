#!/usr/bin/env python3
"""Print |J_N(exp(a/N)) - 1/(3 - 2 cosh a)| along a doubling schedule.

    python scripts/convergence_table.py            # default points
    python scripts/convergence_table.py 0.6+0.1i   # custom points
"""

import argparse

from fig8jones.convergence import limit_study, shifted_gap_study
from fig8jones.laurent import ComplexParam


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("points", nargs="*", default=["0.3", "0.5", "0.25i", "0.3+0.2i"])
    ap.add_argument("--schedule", default="25,50,100,200,400,800")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    sched = [int(s) for s in args.schedule.split(",")]
    for lit in args.points:
        a = ComplexParam.parse(lit)
        rep = limit_study(a, sched, jobs=args.jobs)
        print(f"a = {lit}   delta = {rep.delta:.6f}   target = {complex(rep.target):.12g}")
        print(f"{'N':>6} {'abs error':>12} {'rel error':>12} {'N^2 * err':>12} {'tail bound':>12}")
        for N, e, r, tb in zip(rep.schedule, rep.errors, rep.relative_errors, rep.tail_bound):
            print(f"{N:>6} {e:12.4e} {r:12.4e} {N * N * e:12.6f} {tb:12.4e}")
        print(f"fitted order of decay: {rep.fitted_order:+.4f}")
        for l in (1, 2):
            sg = shifted_gap_study(a, l, sched, jobs=args.jobs)
            pairs = "  ".join(f"{g:.3e}<={b:.3e}" for g, b in zip(sg.gaps, sg.bounds))
            print(f"  l={l} gaps/bounds: {pairs}  (eps'={sg.epsilon_prime}, c={sg.c:.4f})")
        print()


if __name__ == "__main__":
    main()
