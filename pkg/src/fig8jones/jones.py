"""Colored Jones polynomials of the figure-eight knot.

The exact polynomials come from the cyclotomic (Habiro) sum

    J_N(t) = sum_{k=0}^{N-1} prod_{j=1}^{k} (t^N - t^j - t^-j + t^-N)

and the numeric values at t = exp(a/N) from the same sum with each factor
written as 2 cosh(a M/N) - 2 cosh(a j/N), M = N - l.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .laurent import (
    ComplexParam,
    DomainError,
    LaurentPolynomial,
    PoleError,
    context,
    lp_eval,
)

__all__ = [
    "JonesExact",
    "SummandTrace",
    "habiro_factor",
    "habiro_exact",
    "habiro_eval",
    "g_factor",
    "jones_trace",
    "jones_numeric",
    "alexander_polynomial",
    "alexander_inverse",
    "recursion_coefficients",
    "recursion_denominator",
    "recursion_residual",
    "recursion_limit_residual",
    "recursion_limit_value",
    "kashaev_value",
]

SHIFTS = (0, 1, 2)

T = LaurentPolynomial.t()
ONE = LaurentPolynomial.constant(1)


def _tp(k: int) -> LaurentPolynomial:
    return LaurentPolynomial.monomial(k)


@dataclass(frozen=True)
class JonesExact:
    N: int
    poly: LaurentPolynomial

    def __post_init__(self):
        if not self.poly.is_symmetric():
            raise AssertionError(f"J_{self.N} is not symmetric under t -> 1/t")
        if self.poly.at_one() != 1:
            raise AssertionError(f"J_{self.N}(1) = {self.poly.at_one()}, expected 1")


def habiro_factor(N: int, j: int) -> LaurentPolynomial:
    """t^N - t^j - t^-j + t^-N, the expanded j-th cyclotomic factor."""
    return LaurentPolynomial({N: 1, -N: 1}) - LaurentPolynomial({j: 1, -j: 1})


@lru_cache(maxsize=256)
def habiro_exact(N: int) -> JonesExact:
    """Exact J_N of the figure-eight knot."""
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    total = ONE
    prod = ONE
    for j in range(1, N):
        prod = prod * habiro_factor(N, j)
        total = total + prod
    return JonesExact(N, total)


def habiro_eval(N: int, a: ComplexParam, l: int = 0):
    """J_{N-l} evaluated at exp(a/N) through the exact polynomial.

    The evaluation point is formed with 64 guard bits so the comparison
    against :func:`jones_numeric` is not limited by rounding of exp(a/N).
    """
    if N - l < 1:
        raise DomainError(f"need N - l >= 1, got N={N}, l={l}")
    hi = context(a.precision_bits + 64)
    z = hi.exp(hi.convert(a.with_precision(a.precision_bits + 64).value) / N)
    return lp_eval(habiro_exact(N - l).poly, z, a.precision_bits)


def _guard(N: int) -> int:
    return 16 + 2 * max(N, 2).bit_length()


def g_factor(N: int, a: ComplexParam, j: int, l: int = 0, *, _ctx=None, _a=None):
    """2 cosh(a (1 - l/N)) - 2 cosh(a j / N).

    With l = 0 this is the factor g_{N,a}(j); l = 1, 2 give the shifted
    factors whose products sum to J_{N-l}(exp(a/N)).
    """
    if l not in SHIFTS:
        raise DomainError(f"shift must be one of {SHIFTS}, got {l}")
    if not 1 <= j <= N - 1:
        raise DomainError(f"j must satisfy 1 <= j <= N-1, got j={j}, N={N}")
    ctx = _ctx or a.ctx
    av = _a if _a is not None else ctx.convert(a.value)
    return 2 * ctx.cosh(av * (N - l) / N) - 2 * ctx.cosh(av * j / N)


@dataclass(frozen=True)
class SummandTrace:
    """Factors and partial products behind one numeric J value.

    ``g_values[j-1]`` is the j-th factor and ``f_values[k]`` the product of
    the first k factors, so ``f_values[0] == 1``.  ``underflow_at`` is the
    first k with |f_k| < 2^(8-p), after which summands no longer register at
    the working precision (None if that never happens).
    """

    N: int
    a: ComplexParam
    l: int
    g_values: tuple = field(repr=False)
    f_values: tuple = field(repr=False)
    value: object = None
    underflow_at: int | None = None

    @property
    def underflow(self) -> bool:
        return self.underflow_at is not None


def jones_trace(N: int, a: ComplexParam, l: int = 0) -> SummandTrace:
    if l not in SHIFTS:
        raise DomainError(f"shift must be one of {SHIFTS}, got {l}")
    if N < l + 1:
        raise DomainError(f"need N >= l + 1, got N={N}, l={l}")
    p = a.precision_bits
    ctx = context(p + _guard(N))
    av = ctx.convert(a.with_precision(p + _guard(N)).value)
    out = a.ctx
    floor = out.mpf(2) ** (8 - p)
    f = ctx.mpc(1)
    total = ctx.mpc(1)
    gs, fs = [], [out.mpc(1)]
    underflow_at = None
    for j in range(1, N - l):
        g = g_factor(N, a, j, l, _ctx=ctx, _a=av)
        f = f * g
        total += f
        gs.append(out.mpc(g))
        fs.append(out.mpc(f))
        if underflow_at is None and abs(fs[-1]) < floor:
            underflow_at = j
    return SummandTrace(N, a, l, tuple(gs), tuple(fs), out.mpc(total), underflow_at)


def jones_numeric(N: int, a: ComplexParam, l: int = 0):
    """J_{N-l}(exp(a/N)) from incremental partial products."""
    return jones_trace(N, a, l).value


def alexander_polynomial() -> LaurentPolynomial:
    """-t + 3 - 1/t."""
    return LaurentPolynomial({1: -1, 0: 3, -1: -1})


def alexander_inverse(a: ComplexParam):
    """1 / (3 - 2 cosh a), the conjectured and proven limit value."""
    ctx = a.ctx
    denom = 3 - 2 * ctx.cosh(a.value)
    if abs(denom) <= ctx.mpf(2) ** (16 - a.precision_bits):
        raise PoleError(f"3 - 2 cosh a vanishes at a = {a}")
    return 1 / denom


# -- inhomogeneous recursion ------------------------------------------------


def recursion_denominator(N: int) -> LaurentPolynomial:
    """t^(2N+2) (t^N - 1)(t^(2N-3) - 1), clearing every denominator."""
    return _tp(2 * N + 2) * (_tp(N) - 1) * (_tp(2 * N - 3) - 1)


def recursion_coefficients(N: int) -> tuple[LaurentPolynomial, LaurentPolynomial, LaurentPolynomial]:
    """Cleared coefficients (A, B, C) with D J_N = A + B J_{N-1} - C J_{N-2}."""
    if N < 3:
        raise DomainError(f"recursion needs N >= 3, got {N}")
    a = _tp(N + 1) * (_tp(N) + T) * (_tp(2 * N) - T) * (_tp(2 * N - 3) - 1)
    quartic = LaurentPolynomial(
        {4: 1, 4 * N: 1, N + 3: -1, 2 * N + 1: -1, 2 * N + 3: -1, 3 * N + 1: -1}
    )
    b = (_tp(N - 1) - 1) ** 2 * (_tp(N - 1) + 1) * quartic
    c = (_tp(N - 2) - 1) * (_tp(2 * N - 1) - 1) * _tp(2 * N + 2)
    return a, b, c


def recursion_residual(N: int, lookup=None) -> LaurentPolynomial:
    """D J_N - (A + B J_{N-1} - C J_{N-2}); zero iff the recursion holds.

    ``lookup`` maps N to a :class:`JonesExact` (defaults to
    :func:`habiro_exact`; the CLI passes its disk cache).
    """
    lookup = lookup or habiro_exact
    a, b, c = recursion_coefficients(N)
    d = recursion_denominator(N)
    return d * lookup(N).poly - (a + b * lookup(N - 1).poly - c * lookup(N - 2).poly)


def recursion_limit_residual() -> LaurentPolynomial:
    """Exact check that the N -> oo limit of the recursion forces J = 1/Delta.

    With t^N -> w and t -> 1 the recursion becomes J = A + B J - C J with
    A = w^-1 (w+1)(w^2-1)/(w-1),
    B = w^-2 (w-1)^2 (w+1)(1 + w^4 - w - 2w^2 - w^3) / ((w-1)(w^2-1)),
    C = 1.  Solving and cross-multiplying, J Delta(w) = 1 reduces to the
    polynomial returned here vanishing.
    """
    w = T
    an, ad = w**-1 * (w + 1) * (w**2 - 1), w - 1
    bn = w**-2 * (w - 1) ** 2 * (w + 1) * LaurentPolynomial({0: 1, 4: 1, 1: -1, 2: -2, 3: -1})
    bd = (w - 1) * (w**2 - 1)
    cn = cd = (w - 1) * (w**2 - 1)
    # J * (ad bd cd - bn ad cd + cn ad bd) = an bd cd
    lhs_coeff = ad * bd * cd - bn * ad * cd + cn * ad * bd
    rhs = an * bd * cd
    return rhs * alexander_polynomial() - lhs_coeff


def recursion_limit_value(a: ComplexParam):
    """Fixed point of the limiting recursion at w = exp(a)."""
    ctx = a.ctx
    w = ctx.exp(a.value)
    A = (w + 1) ** 2 / w
    B = (1 + w**4 - w - 2 * w**2 - w**3) / w**2
    C = 1
    return A / (1 - B + C)


# -- Kashaev invariant ------------------------------------------------------


def kashaev_value(N: int, precision_bits: int = 128):
    """J_N at exp(2 pi i / N), summed in real arithmetic.

    Every factor 2 - 2 cos(2 pi j / N) is non-negative, so there is no
    cancellation and the result is a positive real.
    """
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    ctx = context(precision_bits + _guard(N))
    half = [2 - 2 * ctx.cospi(ctx.mpf(2 * j) / N) for j in range(N // 2 + 1)]
    total = ctx.mpf(1)
    f = ctx.mpf(1)
    for j in range(1, N):
        # factor j equals factor N - j
        f *= half[min(j, N - j)]
        total += f
    return context(precision_bits).mpf(total)
