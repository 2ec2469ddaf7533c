#!/usr/bin/env python3
"""Freeze the N=800 error thresholds used by the acceptance suite.

Runs the limit study for the four reference points on the doubling schedule
100..800 and writes tests/data/limit_thresholds.json.  Each threshold is the
observed relative error at N=800 times a safety factor of 2, rounded up to
two significant digits.  Re-run only when the numerical core changes on
purpose; the file is committed.

    python scripts/oracle_run.py
"""

import json
import math
from pathlib import Path

from fig8jones.convergence import limit_study
from fig8jones.laurent import ComplexParam

POINTS = ["0.3", "0.5", "0.25i", "0.3+0.2i"]
SCHEDULE = [100, 200, 400, 800]
SAFETY = 2.0

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "limit_thresholds.json"


def round_up(x: float, digits: int = 2) -> float:
    e = math.floor(math.log10(x)) - digits + 1
    return math.ceil(x / 10**e) * 10**e


def main():
    rows = {}
    for lit in POINTS:
        rep = limit_study(ComplexParam.parse(lit), SCHEDULE)
        rel = rep.relative_errors
        rows[lit] = {
            "observed_relative_errors": rel,
            "fitted_order": rep.fitted_order,
            "threshold_relative_error_N800": float(f"{round_up(rel[-1] * SAFETY):.2g}"),
        }
        print(f"{lit:>9}  rel err(800) = {rel[-1]:.3e}  order = {rep.fitted_order:+.4f}  "
              f"threshold = {rows[lit]['threshold_relative_error_N800']:.2g}")
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"schedule": SCHEDULE, "safety_factor": SAFETY, "points": rows}, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
