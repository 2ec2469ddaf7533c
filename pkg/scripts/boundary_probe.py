#!/usr/bin/env python3
"""Exploratory: behaviour of J_N(exp(a/N)) on and beyond the region boundary.

Nothing here is a claim; points outside the oval are run with
``allow_outside=True`` and reported as exploratory.  Useful for seeing
where convergence to 1/(3 - 2 cosh a) visibly breaks down.

    python scripts/boundary_probe.py
"""

from fig8jones.convergence import landmarks, limit_study, region_check
from fig8jones.laurent import ComplexParam

SCHEDULE = [25, 50, 100, 200]


def probe(a: ComplexParam, label: str):
    v = region_check(a)
    try:
        rep = limit_study(a, SCHEDULE, allow_outside=True)
        errs = "  ".join(f"{r:.3e}" for r in rep.relative_errors)
        trend = "decreasing" if rep.errors_decreasing else "not decreasing"
    except Exception as exc:  # pole of the target, overflow, ...
        errs, trend = f"({type(exc).__name__}: {exc})", "-"
    print(f"{label:>28}  delta={float(v.delta):8.4f}  inside={v.inside!s:5}  rel errs: {errs}  [{trend}]")


def main():
    for name, z in landmarks().items():
        for scale in (0.9, 0.99, 1.0, 1.01, 1.1):
            w = z * scale
            probe(ComplexParam(w.real, w.imag), f"{scale:.2f} x {name}")
    probe(ComplexParam.parse("2pi*i"), "2 pi i (Kashaev point)")


if __name__ == "__main__":
    main()
