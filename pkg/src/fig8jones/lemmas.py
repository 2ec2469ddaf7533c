"""Grid verification of the hyperbolic-function inequalities behind the
convergence argument.

Each check samples a deterministic grid and returns a :class:`LemmaReport`.
Strict inequalities count as verified only with slack above
``STRICT_MARGIN``; identities are held to a precision-scaled tolerance.
Where a statement only holds for small parameters ("there is an eps > 0")
the largest eps on a dyadic ladder whose grid passes is certified and
reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .laurent import DEFAULT_PRECISION, ComplexParam, context

__all__ = [
    "STRICT_MARGIN",
    "STANDOFF",
    "Grid2D",
    "LemmaReport",
    "oval_grid",
    "re_a_grid",
    "strip_grid",
    "default_a_samples",
    "check_region_identity",
    "check_u_monotonicity",
    "check_ratio_lower_bound",
    "check_exp_integral",
    "check_taylor_ratio",
    "check_positivity",
    "run_all",
    "certify_taylor_epsilon",
    "ratio_constant",
]

STRICT_MARGIN = 1e-12
STANDOFF = 1e-3
LADDER_DEPTH = 24


@dataclass(frozen=True)
class Grid2D:
    """Inclusive rectangular grid over a = x + iy.

    Sample coordinates are exact rationals interpolated between the float
    bounds, so the same grid yields the same points at every precision.
    """

    x_range: tuple[float, float]
    y_range: tuple[float, float]
    steps: tuple[int, int] = (64, 64)
    exclusions: str = "a = 0"

    def points(self, precision_bits: int = DEFAULT_PRECISION) -> list[ComplexParam]:
        nx, ny = self.steps
        pts = []
        for i in range(nx):
            x = _lerp(self.x_range, i, nx)
            for k in range(ny):
                y = _lerp(self.y_range, k, ny)
                if self.exclusions == "a = 0" and x == 0 and y == 0:
                    continue
                pts.append(ComplexParam(x, y, precision_bits))
        return pts


def _lerp(bounds: tuple[float, float], i: int, n: int) -> Fraction:
    lo, hi = (Fraction(b) for b in bounds)
    if n == 1:
        return lo
    return lo + (hi - lo) * i / (n - 1)


@dataclass
class LemmaReport:
    lemma_id: str
    samples: int
    min_margin: float
    worst_witness: dict | None
    violations: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "lemma_id": self.lemma_id,
            "samples": self.samples,
            "min_margin": self.min_margin,
            "worst_witness": self.worst_witness,
            "violations": self.violations,
            "details": self.details,
        }


class _Tracker:
    """Accumulates margins, the worst witness and violations."""

    def __init__(self, lemma_id: str, threshold: float = STRICT_MARGIN):
        self.lemma_id = lemma_id
        self.threshold = threshold
        self.samples = 0
        self.min_margin = float("inf")
        self.worst = None
        self.violations: list[dict] = []

    def record(self, margin, witness: dict, *, ok: bool | None = None):
        m = float(margin)
        self.samples += 1
        if m < self.min_margin:
            self.min_margin = m
            self.worst = witness
        if not (m > self.threshold if ok is None else ok):
            self.violations.append({**witness, "margin": m})

    def report(self, **details) -> LemmaReport:
        return LemmaReport(
            self.lemma_id,
            self.samples,
            self.min_margin if self.samples else float("nan"),
            self.worst,
            self.violations,
            details,
        )


def _w(a: ComplexParam, **extra) -> dict:
    return {"x": float(a.x), "y": float(a.y), **{k: float(v) for k, v in extra.items()}}


# -- expression helpers -------------------------------------------------------
# Spelled out in mpmath primitives rather than imported from jones so each
# inequality is checked against the literal expression.


def _inside(a: ComplexParam, standoff: float = STANDOFF) -> bool:
    ctx = a.ctx
    return bool(
        abs(2 * ctx.cosh(a.value) - 2) <= 1 - standoff and abs(a.y) <= ctx.pi / 3 - standoff
    )


def _re_a(a: ComplexParam):
    ctx = a.ctx
    v = a.value
    return ctx.re(v * ctx.sinh(v) / (ctx.cosh(v) - 1))


def _re_a2(a: ComplexParam):
    ctx = a.ctx
    v = a.value
    return ctx.re(v * v * ctx.cosh(v) / (ctx.cosh(v) - 1))


def ratio_constant(a: ComplexParam):
    """c = |a sinh a / (cosh a - 1)|."""
    ctx = a.ctx
    v = a.value
    return abs(v * ctx.sinh(v) / (ctx.cosh(v) - 1))


# -- default grids ------------------------------------------------------------


def oval_grid(steps: int = 64) -> Grid2D:
    """Bounding box of the oval, pulled in by the standoff."""
    xmax = math.acosh(1.5) - STANDOFF
    ymax = math.pi / 3 - STANDOFF
    return Grid2D((-xmax, xmax), (-ymax, ymax), (steps, steps))


def strip_grid(steps: int = 64) -> Grid2D:
    """|Re a| < pi, |Im a| < pi/3."""
    xmax = math.pi - STANDOFF
    ymax = math.pi / 3 - STANDOFF
    return Grid2D((-xmax, xmax), (-ymax, ymax), (steps, steps))


def re_a_grid(steps: int = 64) -> Grid2D:
    """|Im a| < pi, with |Re a| <= 4."""
    ymax = math.pi - STANDOFF
    return Grid2D((-4.0, 4.0), (-ymax, ymax), (steps, steps))


def default_a_samples(precision_bits: int = DEFAULT_PRECISION) -> list[ComplexParam]:
    """Small fixed set of nonzero points inside the oval, used where one
    check costs a full scan per point."""
    lits = ["0.5", "0.3i", "0.2i", "0.4+0.2i", "-0.6+0.3i", "0.05-0.9i", "0.9", "0.1+0.1i"]
    return [ComplexParam.parse(s, precision_bits) for s in lits]


# -- checks ---------------------------------------------------------------


def check_region_identity(grid: Grid2D | None = None, precision_bits: int = DEFAULT_PRECISION) -> LemmaReport:
    """|cosh a - 1| = cosh x - cos y, to within 2^(24-p)."""
    grid = grid or oval_grid()
    ctx = context(precision_bits)
    tol = float(ctx.mpf(2) ** (24 - precision_bits))
    tr = _Tracker("cosh_identity")
    worst_disc = 0.0
    for a in grid.points(precision_bits):
        lhs = abs(ctx.cosh(a.value) - 1)
        rhs = ctx.cosh(a.x) - ctx.cos(a.y)
        disc = float(abs(lhs - rhs))
        worst_disc = max(worst_disc, disc)
        tr.record(tol - disc, _w(a, discrepancy=disc), ok=disc <= tol)
    return tr.report(tolerance=tol, max_discrepancy=worst_disc, precision_bits=precision_bits)


def check_u_monotonicity(
    a_grid: Grid2D | Iterable[ComplexParam] | None = None,
    u_steps: int = 32,
    precision_bits: int = DEFAULT_PRECISION,
) -> LemmaReport:
    """u -> |cosh a - cosh ua| strictly decreasing on (0, 1), and
    |cosh ua - 1| < |cosh a - 1| for 0 < u < 1, for a != 0 in the oval."""
    points = _points(a_grid, precision_bits, oval_grid())
    tr = _Tracker("u_monotonicity")
    n_a = 0
    skipped = 0
    for a in points:
        if a.is_zero() or not _inside(a):
            skipped += 1
            continue
        n_a += 1
        ctx = a.ctx
        v = a.value
        ca = ctx.cosh(v)
        base = abs(ca - 1)
        prev = None
        for i in range(1, u_steps):
            u = ctx.mpf(i) / u_steps
            cu = ctx.cosh(u * v)
            cur = abs(ca - cu)
            if prev is not None:
                tr.record(prev - cur, _w(a, u=u, kind=0))
            tr.record(base - abs(cu - 1), _w(a, u=u, kind=1))
            prev = cur
    return tr.report(a_points=n_a, skipped_outside=skipped, u_steps=u_steps,
                     witness_kind="0: monotone step, 1: corollary")


def _points(src, precision_bits, fallback: Grid2D) -> list[ComplexParam]:
    if src is None:
        src = fallback
    if isinstance(src, Grid2D):
        return src.points(precision_bits)
    if isinstance(src, ComplexParam):
        return [src]
    return list(src)


def _ladder(top: float, depth: int = LADDER_DEPTH) -> list[float]:
    return [top / 2**k for k in range(depth + 1)]


def check_ratio_lower_bound(
    a: ComplexParam | Iterable[ComplexParam] | None = None,
    u_max_scan: float = 1.0,
    u_points: int = 1024,
) -> LemmaReport:
    """|(cosh a - cosh ua)/(cosh a - 1)| > 1 - u for 0 < u < eps.

    For each a the certified eps is the largest rung of the dyadic ladder
    u_max_scan * 2^-k whose ``u_points``-point grid in (0, eps) passes.  An a
    with no certified rung is a violation.
    """
    points = _points(a, DEFAULT_PRECISION, None) if a is not None else default_a_samples()
    tr = _Tracker("ratio_lower_bound")
    eps_by_a = []
    for pt in points:
        ctx = pt.ctx
        v = pt.value
        ca = ctx.cosh(v)
        denom = ca - 1

        def margins(eps):
            out = []
            for i in range(1, u_points + 1):
                u = ctx.mpf(eps) * i / (u_points + 1)
                out.append((u, abs((ca - ctx.cosh(u * v)) / denom) - (1 - u)))
            return out

        certified = None
        for eps in _ladder(u_max_scan):
            ms = margins(eps)
            if all(m > STRICT_MARGIN for _, m in ms):
                certified = eps
                for u, m in ms:
                    tr.record(m, _w(pt, u=u))
                break
        eps_by_a.append({"x": float(pt.x), "y": float(pt.y), "epsilon": certified})
        if certified is None:
            tr.samples += 1
            tr.violations.append({**_w(pt), "reason": "no epsilon certified"})
    return tr.report(epsilon=eps_by_a, u_points=u_points, u_max_scan=u_max_scan)


def exp_integral_closed_form(m: int, a, ctx):
    """exp(-a)/a * sum_k m!/(a^k (m-k)!)."""
    a = ctx.convert(a)
    total = ctx.mpf(0)
    falling = ctx.mpf(1)
    for k in range(m + 1):
        total += falling / a**k
        falling *= m - k
    return ctx.exp(-a) / a * total


def _truncation_point(m: int, a, rel_floor, closed, ctx):
    # For a T > m the tail is below exp(-aT) T^m / (a - m/T).
    T = ctx.mpf(max(2, 2 * (m + 1) / a))
    while True:
        tail = ctx.exp(-a * T) * T**m / (a - m / T)
        if tail < rel_floor * closed:
            return T, tail
        T *= 2


def check_exp_integral(
    m_max: int = 10,
    a_grid: Sequence = ("0.25", "0.5", "1", "2", "4", "8", "16"),
    precision_bits: int = DEFAULT_PRECISION,
    rel_tol: float = 1e-10,
) -> LemmaReport:
    """Quadrature of int_1^oo exp(-a t) t^m dt against the closed form."""
    ctx = context(precision_bits)
    tr = _Tracker("exp_integral", threshold=0.0)
    floor = ctx.mpf(2) ** (-precision_bits)
    for a_lit in a_grid:
        a = ctx.mpf(a_lit)
        for m in range(1, m_max + 1):
            closed = exp_integral_closed_form(m, a, ctx)
            T, tail = _truncation_point(m, a, floor, closed, ctx)
            peak = ctx.mpf(m) / a
            nodes = [ctx.mpf(1)]
            if 1 < peak < T:
                nodes.append(peak)
            # subdivide so each panel spans a few decay lengths
            step = max(1 / a, ctx.mpf(1) / 4)
            x = nodes[-1]
            while x + 8 * step < T:
                x += 8 * step
                nodes.append(x)
            nodes.append(T)
            quad = ctx.quad(lambda t: ctx.exp(-a * t) * t**m, nodes)
            rel = abs(quad - closed) / closed
            tr.record(rel_tol - float(rel), {"m": m, "a": float(a), "relative_error": float(rel), "cut": float(T)})
    return tr.report(rel_tol=rel_tol, m_max=m_max, a_grid=[str(a) for a in a_grid])


def _taylor_margins(pt: ComplexParam, eps, x_steps: int, u_steps: int):
    ctx = pt.ctx
    v = pt.value
    ca = ctx.cosh(v)
    c = ratio_constant(pt)
    eps = ctx.mpf(eps)
    xs = [eps * i / (x_steps + 1) for i in range(1, x_steps + 1)]
    us = [eps * k / (u_steps + 1) for k in range(1, u_steps + 1)]
    cx = [ctx.cosh(v * (1 - x)) for x in xs]
    cu = [ctx.cosh(u * v) for u in us]
    for x, c1 in zip(xs, cx):
        for u, c2 in zip(us, cu):
            r = abs((c1 - c2) / (ca - c2))
            yield x, u, 1 - r, r - (1 - c * x)


def certify_taylor_epsilon(pt: ComplexParam, x_steps: int = 32, u_steps: int = 32, eps_max: float = 0.5):
    """Largest ladder rung eps' such that
    1 > |(cosh a(1-x) - cosh ua)/(cosh a - cosh ua)| > 1 - c x
    on the (x, u) grid in (0, eps')^2, with c = |a sinh a / (cosh a - 1)|.
    Returns (eps', margins) or (None, [])."""
    for eps in _ladder(eps_max):
        ms = list(_taylor_margins(pt, eps, x_steps, u_steps))
        if all(m1 > STRICT_MARGIN and m2 > STRICT_MARGIN for *_, m1, m2 in ms):
            return eps, ms
    return None, []


def check_taylor_ratio(
    a_grid: ComplexParam | Iterable[ComplexParam] | None = None,
    x_steps: int = 32,
    u_steps: int = 32,
    eps_max: float = 0.5,
) -> LemmaReport:
    """Both bounds of the first-order ratio estimate on a certified square."""
    points = _points(a_grid, DEFAULT_PRECISION, None) if a_grid is not None else default_a_samples()
    tr = _Tracker("taylor_ratio")
    eps_by_a = []
    for pt in points:
        eps, ms = certify_taylor_epsilon(pt, x_steps, u_steps, eps_max)
        eps_by_a.append({"x": float(pt.x), "y": float(pt.y), "epsilon_prime": eps, "c": float(ratio_constant(pt))})
        if eps is None:
            tr.samples += 1
            tr.violations.append({**_w(pt), "reason": "no epsilon' certified"})
            continue
        for x, u, m1, m2 in ms:
            tr.record(min(m1, m2), _w(pt, dx=x, u=u))
    return tr.report(epsilon_prime=eps_by_a, x_steps=x_steps, u_steps=u_steps)


def check_positivity(
    grid: Grid2D | None = None,
    which: str = "Re_a",
    precision_bits: int = DEFAULT_PRECISION,
) -> LemmaReport:
    """Re(a sinh a/(cosh a - 1)) > 0 on |Im a| < pi (``which="Re_a"``), or
    Re(a^2 cosh a/(cosh a - 1)) > 0 inside the oval (``which="Re_a2"``)."""
    if which == "Re_a":
        grid = grid or re_a_grid()
        expr: Callable = _re_a
        keep = lambda a: True  # noqa: E731
        lemma_id = "re_a"
    elif which == "Re_a2":
        grid = grid or oval_grid()
        expr = _re_a2
        keep = _inside
        lemma_id = "re_a2"
    else:
        raise ValueError(f"which must be 'Re_a' or 'Re_a2', got {which!r}")
    tr = _Tracker(lemma_id)
    skipped = 0
    for a in grid.points(precision_bits):
        if a.is_zero() or not keep(a):
            skipped += 1
            continue
        tr.record(expr(a), _w(a))
    return tr.report(skipped=skipped)


def run_all(precision_bits: int = DEFAULT_PRECISION) -> list[LemmaReport]:
    """All seven lemma checks on their default grids."""
    return [
        check_region_identity(precision_bits=precision_bits),
        check_u_monotonicity(precision_bits=precision_bits),
        check_ratio_lower_bound(),
        check_exp_integral(precision_bits=precision_bits),
        check_taylor_ratio(),
        check_positivity(which="Re_a", precision_bits=precision_bits),
        check_positivity(which="Re_a2", precision_bits=precision_bits),
    ]
