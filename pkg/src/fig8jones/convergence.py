"""Numerical studies of the limit J_N(exp(a/N)) -> 1/Delta(exp a).

Also covers the shifted sequences J_{N-l}(exp(a/N)), the Kashaev growth rate
at a = 2 pi i, and the exact Melvin-Morton-Rozansky coefficient table.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .jones import alexander_inverse, habiro_exact, jones_trace, kashaev_value
from .laurent import (
    DEFAULT_PRECISION,
    ComplexParam,
    DomainError,
    TruncatedSeries,
    context,
    ts_exp_pow,
    ts_invert,
)

__all__ = [
    "DEFAULT_SCHEDULE",
    "RegionVerdict",
    "ConvergenceReport",
    "ShiftedGapReport",
    "GrowthReport",
    "MmrTable",
    "landmarks",
    "region_check",
    "limit_study",
    "shifted_gap_bound",
    "shifted_gap_study",
    "lobachevsky",
    "figure_eight_volume",
    "growth_rate_study",
    "interpolate_exact",
    "mmr_coefficients",
    "alexander_inverse_series",
    "mmr_study",
]

DEFAULT_SCHEDULE = (25, 50, 100, 200, 400, 800)


def _freeze(v):
    """Replace mpmath numbers by raw (tag, data, prec) tuples; numbers from
    a private context cannot cross a process boundary as they are."""
    if hasattr(v, "_mpc_"):
        return ("__mpc__", v._mpc_, v.context.prec)
    if hasattr(v, "_mpf_"):
        return ("__mpf__", v._mpf_, v.context.prec)
    if isinstance(v, (list, tuple)):
        return type(v)(_freeze(x) for x in v)
    return v


def _thaw(v):
    if isinstance(v, tuple) and len(v) == 3 and v[0] in ("__mpc__", "__mpf__"):
        ctx = context(v[2])
        return ctx.make_mpc(v[1]) if v[0] == "__mpc__" else ctx.make_mpf(v[1])
    if isinstance(v, (list, tuple)):
        return type(v)(_thaw(x) for x in v)
    return v


def _frozen_call(fn_and_arg):
    fn, arg = fn_and_arg
    return _freeze(fn(arg))


def _pmap(fn: Callable, items: Sequence, jobs: int = 1) -> list:
    """Order-preserving map, fanned out to processes when jobs > 1."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return [_thaw(r) for r in pool.map(_frozen_call, [(fn, x) for x in items])]


def _check_schedule(schedule: Sequence[int], minimum: int = 1) -> list[int]:
    sched = [int(n) for n in schedule]
    if not sched:
        raise DomainError("schedule is empty")
    if any(b <= a for a, b in zip(sched, sched[1:])):
        raise DomainError(f"schedule must be strictly increasing: {sched}")
    if sched[0] < minimum:
        raise DomainError(f"schedule entries must be >= {minimum}")
    return sched


# -- region -------------------------------------------------------------


def landmarks(precision_bits: int = DEFAULT_PRECISION) -> dict[str, complex]:
    """Where the oval's boundary crosses the axes."""
    ctx = context(precision_bits)
    x = ctx.log((3 + ctx.sqrt(5)) / 2)
    y = ctx.pi / 3
    return {
        "+log((3+sqrt5)/2)": complex(x),
        "+pi*i/3": complex(0, y),
        "-log((3+sqrt5)/2)": complex(-x),
        "-pi*i/3": complex(0, -y),
    }


@dataclass(frozen=True)
class RegionVerdict:
    a: ComplexParam
    delta: object
    im_bound_ok: bool
    inside: bool
    equivalent_form: object
    landmarks: dict = field(repr=False, default_factory=dict)


def region_check(a: ComplexParam) -> RegionVerdict:
    """Is a in {|2 cosh a - 2| < 1, |Im a| < pi/3}?

    ``equivalent_form`` is cosh x - cos y, which equals |cosh a - 1|.
    """
    ctx = a.ctx
    delta = a.delta
    im_ok = bool(abs(a.y) < ctx.pi / 3)
    eq = ctx.cosh(a.x) - ctx.cos(a.y)
    return RegionVerdict(a, delta, im_ok, bool(delta < 1) and im_ok, eq, landmarks(a.precision_bits))


# -- limit study --------------------------------------------------------


@dataclass
class ConvergenceReport:
    """Per-N values of J_N(exp(a/N)) against 1/Delta(exp a).

    ``fitted_order`` is the least-squares slope of log(error) against log N
    (about -2 in practice); None when some error is exactly zero.
    ``tail_bound[i]`` is delta^N / (1 - delta) and ``tail_ok[i]`` records
    whether every suffix |sum_{k>=M} f_k| stayed under delta^M / (1 - delta).
    """

    a: ComplexParam
    schedule: list[int]
    values: list
    target: object
    errors: list[float]
    fitted_order: float | None
    tail_bound: list[float]
    tail_ok: list[bool]
    delta: float
    exploratory: bool = False
    underflow_at: list = field(default_factory=list)

    def recomputed_errors(self) -> list[float]:
        return [float(abs(v - self.target)) for v in self.values]

    @property
    def relative_errors(self) -> list[float]:
        t = float(abs(self.target))
        return [e / t for e in self.errors]

    @property
    def errors_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.errors, self.errors[1:]))


def _fit_slope(ns: Sequence[int], errs: Sequence[float]) -> float | None:
    if len(ns) < 2 or any(e <= 0 for e in errs):
        return None
    slope, _ = np.polyfit(np.log(ns), np.log(errs), 1)
    return float(slope)


def _tail_ok(fs: Sequence, delta, ctx) -> bool:
    """Every suffix sum of the partial products under the geometric bound."""
    if delta >= 1:
        return False
    slack = ctx.mpf(2) ** (8 - ctx.prec)
    suffix = ctx.mpc(0)
    for M in range(len(fs) - 1, -1, -1):
        suffix += fs[M]
        if abs(suffix) > delta**M / (1 - delta) + slack:
            return False
    return True


def _limit_point(args):
    N, a, l = args
    tr = jones_trace(N, a, l)
    ok = _tail_ok(tr.f_values, a.delta, a.ctx) if l == 0 else None
    return tr.value, ok, tr.underflow_at


def limit_study(
    a: ComplexParam,
    schedule: Sequence[int] = DEFAULT_SCHEDULE,
    *,
    allow_outside: bool = False,
    jobs: int = 1,
) -> ConvergenceReport:
    """Run J_N(exp(a/N)) along ``schedule`` and compare with 1/Delta.

    Points outside the oval are refused unless ``allow_outside`` is set, in
    which case the report is marked exploratory.
    """
    sched = _check_schedule(schedule, minimum=1)
    verdict = region_check(a)
    if not verdict.inside and not allow_outside:
        raise DomainError(f"a = {a} lies outside the convergence region (delta = {float(verdict.delta):.6g})")
    target = alexander_inverse(a)
    rows = _pmap(_limit_point, [(N, a, 0) for N in sched], jobs)
    values = [r[0] for r in rows]
    errors = [float(abs(v - target)) for v in values]
    delta = verdict.delta
    tail = [float(delta**N / (1 - delta)) if delta < 1 else float("inf") for N in sched]
    return ConvergenceReport(
        a=a,
        schedule=sched,
        values=values,
        target=target,
        errors=errors,
        fitted_order=_fit_slope(sched, errors),
        tail_bound=tail,
        tail_ok=[bool(r[1]) for r in rows],
        delta=float(delta),
        exploratory=not verdict.inside,
        underflow_at=[r[2] for r in rows],
    )


# -- shifted sequences ----------------------------------------------------


@dataclass
class ShiftedGapReport:
    a: ComplexParam
    l: int
    schedule: list[int]
    gaps: list[float]
    bounds: list[float]
    epsilon_prime: float | None
    c: float
    delta: float

    @property
    def within_bounds(self) -> bool:
        return all(g <= b for g, b in zip(self.gaps, self.bounds))

    @property
    def shrink_factor(self) -> float:
        return self.gaps[0] / self.gaps[-1] if self.gaps[-1] else math.inf


def shifted_gap_bound(N: int, l: int, delta: float, c: float, epsilon_prime: float) -> float:
    """Three-term bound on |J_N - J_{N-l}| at exp(a/N).

    With K = floor(eps' N) and r = 1 - l c / N:
        (1 - d^K)/(1 - d) - (1 - (d r)^K)/(1 - d r) + 2 d^K (1 - d^(N-K))/(1 - d).
    The ratio estimate 1 - c x is applied at x = l / N.
    """
    K = math.floor(epsilon_prime * N)
    r = 1 - l * c / N
    d = delta
    first = (1 - d**K) / (1 - d)
    second = (1 - (d * r) ** K) / (1 - d * r)
    third = 2 * d**K * (1 - d ** (N - K)) / (1 - d)
    return first - second + third


def shifted_gap_study(
    a: ComplexParam,
    l: int,
    schedule: Sequence[int] = DEFAULT_SCHEDULE,
    *,
    epsilon_prime: float | None = None,
    allow_outside: bool = False,
    jobs: int = 1,
) -> ShiftedGapReport:
    """|J_N - J_{N-l}| at exp(a/N) along the schedule, with the explicit bound.

    ``epsilon_prime`` defaults to the value certified by the taylor-ratio
    scan for this a.
    """
    if l not in (1, 2):
        raise DomainError(f"shift must be 1 or 2, got {l}")
    sched = _check_schedule(schedule, minimum=l + 1)
    verdict = region_check(a)
    if not verdict.inside and not allow_outside:
        raise DomainError(f"a = {a} lies outside the convergence region")
    delta = float(verdict.delta)
    if a.is_zero():
        c = 0.0
        eps = epsilon_prime if epsilon_prime is not None else 0.0
    else:
        from .lemmas import certify_taylor_epsilon, ratio_constant

        c = float(ratio_constant(a))
        eps = epsilon_prime if epsilon_prime is not None else certify_taylor_epsilon(a)[0]
    base = _pmap(_limit_point, [(N, a, 0) for N in sched], jobs)
    shifted = _pmap(_limit_point, [(N, a, l) for N in sched], jobs)
    gaps = [float(abs(b[0] - s[0])) for b, s in zip(base, shifted)]
    bounds = [shifted_gap_bound(N, l, delta, c, eps or 0.0) for N in sched]
    return ShiftedGapReport(a, l, sched, gaps, bounds, eps, c, delta)


# -- growth rate at a = 2 pi i --------------------------------------------


def _bernoulli_abs(n_max: int) -> list[Fraction]:
    """|B_0|..|B_n_max| from the standard recurrence."""
    B = [Fraction(1)]
    for m in range(1, n_max + 1):
        s = sum((math.comb(m + 1, k) * B[k] for k in range(m)), Fraction(0))
        B.append(-s / (m + 1))
    return [abs(b) for b in B]


def lobachevsky(theta, precision_bits: int = DEFAULT_PRECISION):
    """Lobachevsky function -int_0^theta log|2 sin u| du for 0 < theta < pi.

    Uses Lambda(theta) = Cl2(2 theta)/2 and the Bernoulli series
    Cl2(p) = p - p log p + sum_k |B_2k| p^(2k+1) / (2k (2k+1)!), |p| < 2 pi,
    after reducing theta to (0, pi/2] by Lambda(pi - theta) = -Lambda(theta).
    """
    ctx = context(precision_bits + 16)
    th = ctx.convert(theta)
    if not 0 < th < ctx.pi:
        raise DomainError("theta must lie in (0, pi)")
    if th > ctx.pi / 2:
        return -lobachevsky(ctx.pi - th, precision_bits)
    p = 2 * th
    total = p - p * ctx.log(p)
    eps = ctx.mpf(2) ** (-precision_bits - 8)
    k = 1
    bern = _bernoulli_abs(64)
    while True:
        if 2 * k > len(bern) - 1:
            bern = _bernoulli_abs(4 * k)
        b = bern[2 * k]
        term = ctx.mpf(b.numerator) / b.denominator * p ** (2 * k + 1) / (2 * k * ctx.factorial(2 * k + 1))
        total += term
        if abs(term) < eps:
            break
        k += 1
    return context(precision_bits).mpf(total / 2)


def figure_eight_volume(precision_bits: int = DEFAULT_PRECISION):
    """2 v_3 with v_3 = 3 Lambda(pi/3), the regular ideal tetrahedron volume."""
    ctx = context(precision_bits)
    return 6 * lobachevsky(ctx.pi / 3, precision_bits)


@dataclass
class GrowthReport:
    """r_N = (2 pi / N) log J_N(exp(2 pi i/N)) along the schedule.

    ``extrapolated`` comes from a least-squares fit
    r_N = L + alpha log(N)/N + beta/N; ``fit_form`` names it.
    """

    schedule: list[int]
    rates: list[float]
    reference: float
    extrapolated: float | None
    fit_form: str = "r_N = L + alpha*log(N)/N + beta/N"

    @property
    def relative_gap(self) -> float:
        return abs(self.rates[-1] - self.reference) / self.reference

    @property
    def increasing(self) -> bool:
        return all(b > a for a, b in zip(self.rates, self.rates[1:]))

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.rates, self.rates[1:]))


def _growth_point(args):
    N, bits = args
    ctx = context(bits)
    return float(2 * ctx.pi / N * ctx.log(kashaev_value(N, bits)))


def growth_rate_study(
    schedule: Sequence[int] = (100, 200, 500, 1000, 2000),
    precision_bits: int = DEFAULT_PRECISION,
    jobs: int = 1,
) -> GrowthReport:
    sched = _check_schedule(schedule, minimum=2)
    rates = _pmap(_growth_point, [(N, precision_bits) for N in sched], jobs)
    ref = float(figure_eight_volume(precision_bits))
    extrap = None
    if len(sched) >= 3:
        ns = np.array(sched, dtype=float)
        design = np.column_stack([np.ones_like(ns), np.log(ns) / ns, 1 / ns])
        coef, *_ = np.linalg.lstsq(design, np.array(rates), rcond=None)
        extrap = float(coef[0])
    return GrowthReport(sched, rates, ref, extrap)


# -- Melvin-Morton-Rozansky table --------------------------------------------


def interpolate_exact(xs: Sequence[int], ys: Sequence[Fraction]) -> list[Fraction]:
    """Monomial coefficients of the interpolating polynomial, trailing zeros
    stripped (Newton divided differences over the rationals)."""
    n = len(xs)
    if n != len(ys) or n == 0:
        raise DomainError("need equally many nodes and values")
    if len(set(xs)) != n:
        raise DomainError("interpolation nodes must be distinct")
    dd = [Fraction(y) for y in ys]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    coeffs = [Fraction(0)] * n
    # Horner-style expansion of the Newton form
    for i in range(n - 1, -1, -1):
        shifted = [Fraction(0)] + coeffs[:-1]
        coeffs = [s - xs[i] * c for s, c in zip(shifted, coeffs)]
        coeffs[0] += dd[i]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _degree(coeffs: Sequence[Fraction]) -> int:
    return -1 if len(coeffs) == 1 and coeffs[0] == 0 else len(coeffs) - 1


def mmr_coefficients(N: int, d: int, lookup=None) -> TruncatedSeries:
    """J_N(exp h) as an exact power series in h through order d."""
    lookup = lookup or habiro_exact
    total = TruncatedSeries.constant(0, d)
    for m, c in lookup(N).poly.items():
        total = total + ts_exp_pow(m, d) * c
    return total


def alexander_inverse_series(d: int) -> TruncatedSeries:
    """1/(3 - e^z - e^-z) through order d."""
    return ts_invert(3 - ts_exp_pow(1, d) - ts_exp_pow(-1, d))


@dataclass
class MmrTable:
    """Coefficients c_j(N) of h^j in J_N(exp h) and their fit in N.

    ``polys[j]`` is c_j as a polynomial in N (monomial coefficients),
    ``fitted_degree[j]`` its degree (-1 for the zero polynomial) and
    ``diagonal[j]`` the coefficient of N^j.
    """

    j_max: int
    N_set: list[int]
    c: dict[int, list[Fraction]]
    polys: dict[int, list[Fraction]]
    fitted_degree: dict[int, int]
    diagonal: list[Fraction]
    expected_diagonal: list[Fraction]

    @property
    def below_diagonal(self) -> bool:
        return all(self.fitted_degree[j] <= j for j in range(self.j_max + 1))

    @property
    def odd_rows_zero(self) -> bool:
        return all(all(v == 0 for v in self.c[j]) for j in range(1, self.j_max + 1, 2))

    @property
    def diagonal_matches(self) -> bool:
        return self.diagonal == self.expected_diagonal


def mmr_study(
    j_max: int = 6,
    N_set: Iterable[int] = range(2, 11),
    d: int | None = None,
    lookup=None,
) -> MmrTable:
    N_list = sorted(set(int(n) for n in N_set))
    d = j_max if d is None else d
    if d < j_max:
        raise DomainError(f"series order {d} is below j_max {j_max}")
    if len(N_list) < j_max + 2:
        raise DomainError(f"need at least {j_max + 2} values of N for degree-{j_max} detection, got {len(N_list)}")
    series = {N: mmr_coefficients(N, d, lookup) for N in N_list}
    c = {j: [series[N][j] for N in N_list] for j in range(j_max + 1)}
    polys = {j: interpolate_exact(N_list, c[j]) for j in range(j_max + 1)}
    degrees = {j: _degree(polys[j]) for j in polys}
    diagonal = [polys[j][j] if len(polys[j]) > j else Fraction(0) for j in range(j_max + 1)]
    expected = list(alexander_inverse_series(d).coefficients[: j_max + 1])
    return MmrTable(j_max, N_list, c, polys, degrees, diagonal, expected)
