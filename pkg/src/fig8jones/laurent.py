"""Exact Laurent polynomials, truncated rational power series, and complex
evaluation points carrying their own working precision.

Everything here is immutable.  High-precision numerics go through private
``mpmath`` contexts (one per precision) so the global ``mpmath.mp`` state is
never touched.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from mpmath.ctx_mp import MPContext

__all__ = [
    "DomainError",
    "PoleError",
    "NotInvertibleError",
    "context",
    "LaurentPolynomial",
    "TruncatedSeries",
    "ComplexParam",
    "lp_add",
    "lp_mul",
    "lp_eval",
    "ts_invert",
    "ts_exp_pow",
    "DEFAULT_PRECISION",
    "MAX_SERIES_ORDER",
]

DEFAULT_PRECISION = 128
MAX_SERIES_ORDER = 32


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Evaluation hit a pole."""


class NotInvertibleError(ZeroDivisionError):
    """Series with vanishing constant term."""


@lru_cache(maxsize=None)
def context(bits: int) -> MPContext:
    """Private mpmath context at ``bits`` of binary precision.

    Cached contexts are shared; callers must never change their ``prec``.
    """
    if bits < 2:
        raise DomainError(f"precision must be positive, got {bits}")
    ctx = MPContext()
    ctx.prec = bits
    return ctx


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class LaurentPolynomial:
    """Laurent polynomial in one variable ``t`` with integer coefficients.

    Stored canonically as ``{exponent: coefficient}`` with zero coefficients
    dropped, so equality is structural.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coefficients: Mapping[int, int] | None = None):
        c = {}
        for e, v in (coefficients or {}).items():
            if not isinstance(e, int) or not isinstance(v, int):
                raise TypeError("exponents and coefficients must be int")
            if v:
                c[e] = v
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> "LaurentPolynomial":
        # c must already be canonical
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def constant(cls, value: int) -> "LaurentPolynomial":
        return cls({0: value})

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentPolynomial":
        return cls({exponent: coefficient})

    @classmethod
    def t(cls) -> "LaurentPolynomial":
        return cls({1: 1})

    # -- inspection --------------------------------------------------------

    def coefficients(self) -> dict[int, int]:
        """Copy of the exponent -> coefficient map."""
        return dict(self._c)

    def items(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs sorted by exponent."""
        return sorted(self._c.items())

    def __getitem__(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def __len__(self) -> int:
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def min_exponent(self) -> int:
        if not self._c:
            raise DomainError("zero polynomial has no exponents")
        return min(self._c)

    @property
    def max_exponent(self) -> int:
        if not self._c:
            raise DomainError("zero polynomial has no exponents")
        return max(self._c)

    def at_one(self) -> int:
        """Exact value at t = 1."""
        return sum(self._c.values())

    def inverted(self) -> "LaurentPolynomial":
        """Substitute t -> 1/t."""
        return LaurentPolynomial._raw({-e: v for e, v in self._c.items()})

    def is_symmetric(self) -> bool:
        return all(self._c.get(-e) == v for e, v in self._c.items())

    def l1_norm(self) -> int:
        return sum(abs(v) for v in self._c.values())

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return LaurentPolynomial._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        c: dict[int, int] = {}
        # b is the sparser operand; Habiro factors have only four terms
        for eb, vb in b.items():
            for ea, va in a.items():
                e = ea + eb
                c[e] = c.get(e, 0) + va * vb
        return LaurentPolynomial._raw({e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self._c) != 1:
                raise DomainError("only monomials have Laurent inverses")
            ((e, v),) = self._c.items()
            if abs(v) != 1:
                raise DomainError("monomial inverse needs a unit coefficient")
            return LaurentPolynomial._raw({e * n: v ** (-n)})
        result = LaurentPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by t**k."""
        return LaurentPolynomial._raw({e + k: v for e, v in self._c.items()})

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPolynomial({dict(self.items())!r})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items(), reverse=True):
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if e == 0:
                body = str(mag)
            else:
                var = "t" if e == 1 else f"t^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- evaluation --------------------------------------------------------

    def evaluate(self, z: "ComplexParam | complex", precision_bits: int | None = None):
        return lp_eval(self, z, precision_bits)


def lp_add(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    return p + q


def lp_mul(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    return p * q


def _guard_bits(p: LaurentPolynomial, radius: float) -> int:
    # Bits lost to cancellation are bounded by log2 of the coefficient mass
    # sum |c_m| r^m relative to a result of order one.
    if radius <= 0:
        return 16
    log_r = math.log2(radius)
    worst = max(e * log_r for e in (p.min_exponent, p.max_exponent))
    mass = math.log2(p.l1_norm()) if p.l1_norm() else 0.0
    return 16 + max(0, math.ceil(mass + max(worst, 0.0))) + max(0, p.max_exponent - p.min_exponent).bit_length()


def lp_eval(p: LaurentPolynomial, z, precision_bits: int | None = None):
    """Evaluate ``p`` at the complex point ``z``.

    ``z`` is a :class:`ComplexParam` (its precision is used unless
    ``precision_bits`` overrides it) or anything mpmath can convert.
    Horner's rule runs over the dense exponent range with enough guard bits
    to absorb the coefficient mass; the result is rounded to the working
    precision, so it is reproducible for fixed inputs.
    """
    if isinstance(z, ComplexParam):
        bits = precision_bits or z.precision_bits
        zval = z.value
    else:
        bits = precision_bits or DEFAULT_PRECISION
        zval = z
    out_ctx = context(bits)
    if p.is_zero():
        return out_ctx.mpc(0)
    probe = context(53).convert(zval)
    if probe == 0:
        raise DomainError("cannot evaluate a Laurent polynomial at 0")
    ctx = context(bits + _guard_bits(p, float(abs(probe))))
    z_hi = ctx.convert(zval)
    lo, hi = p.min_exponent, p.max_exponent
    acc = ctx.mpc(0)
    for e in range(hi, lo - 1, -1):
        acc = acc * z_hi + p[e]
    acc = acc * z_hi**lo
    return out_ctx.mpc(acc)


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series c_0 + c_1 z + ... + c_d z^d with exact rational coefficients."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        if not coeffs:
            raise DomainError("series needs at least the constant term")
        if len(coeffs) - 1 > MAX_SERIES_ORDER:
            raise DomainError(f"order {len(coeffs) - 1} exceeds cap {MAX_SERIES_ORDER}")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def of(cls, values: Iterable, order: int) -> "TruncatedSeries":
        """Pad or truncate ``values`` to the given order."""
        vals = [Fraction(v) for v in values][: order + 1]
        vals += [Fraction(0)] * (order + 1 - len(vals))
        return cls(tuple(vals))

    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        return cls.of([value], order)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def _check(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(other, self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if other.order != self.order:
            raise DomainError(f"order mismatch: {self.order} vs {other.order}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-a for a in self.coefficients))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(tuple(a * other for a in self.coefficients))
        other = self._check(other)
        if other is NotImplemented:
            return other
        d = self.order
        a, b = self.coefficients, other.coefficients
        return TruncatedSeries(
            tuple(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(d + 1))
        )

    __rmul__ = __mul__

    def invert(self) -> "TruncatedSeries":
        return ts_invert(self)

    def evaluate(self, z):
        """Horner evaluation of the truncated polynomial (z any number type)."""
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc

    def __str__(self):
        terms = [f"{c}*z^{k}" if k else str(c) for k, c in enumerate(self.coefficients) if c]
        return " + ".join(terms) + f" + O(z^{self.order + 1})" if terms else f"O(z^{self.order + 1})"


def ts_invert(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse through the series' own order."""
    c = s.coefficients
    if c[0] == 0:
        raise NotInvertibleError("constant term is zero")
    inv = [1 / c[0]]
    for k in range(1, s.order + 1):
        acc = sum((c[i] * inv[k - i] for i in range(1, k + 1)), Fraction(0))
        inv.append(-acc / c[0])
    return TruncatedSeries(tuple(inv))


def ts_exp_pow(m: int, d: int) -> TruncatedSeries:
    """Series of exp(m z) through order ``d``: coefficients m^k / k!."""
    if d < 0:
        raise DomainError("order must be non-negative")
    coeffs = [Fraction(1)]
    for k in range(1, d + 1):
        coeffs.append(coeffs[-1] * m / k)
    return TruncatedSeries(tuple(coeffs))


# ---------------------------------------------------------------------------
# Complex evaluation points
# ---------------------------------------------------------------------------

_Real = Union[int, float, str, Fraction]

_PI_TERM = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?(?:/\d+)?)\s*\*?\s*pi\s*$")


def _portable(v):
    if hasattr(v, "_mpf_"):
        man, exp = v.man, v.exp
        return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)
    return v


def _real(ctx: MPContext, v: _Real):
    """Convert a component to ctx precision; strings may be decimals,
    fractions, or rational multiples of pi such as ``"2pi"`` or ``"-1/3*pi"``."""
    if isinstance(v, Fraction):
        return ctx.mpf(v.numerator) / v.denominator
    if isinstance(v, str):
        s = v.strip()
        m = _PI_TERM.match(s)
        if m:
            coef = m.group(1)
            if coef in ("", "+"):
                k = Fraction(1)
            elif coef == "-":
                k = Fraction(-1)
            else:
                k = Fraction(coef)
            return ctx.mpf(k.numerator) * ctx.pi / k.denominator
        if "/" in s:
            return _real(ctx, Fraction(s))
        return ctx.mpf(s)
    return ctx.mpf(v)


@dataclass(frozen=True)
class ComplexParam:
    """A complex number a = re + i*im together with its working precision.

    Components are kept in the exact form they were given (decimal strings,
    fractions, ``"k*pi"`` strings, ints or binary floats) and rounded only
    when :attr:`value` is requested.
    """

    re: _Real = 0
    im: _Real = 0
    precision_bits: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.precision_bits < 53:
            raise DomainError(f"precision_bits must be >= 53, got {self.precision_bits}")
        # validate eagerly so bad literals fail at construction
        _real(context(53), self.re)
        _real(context(53), self.im)

    @property
    def ctx(self) -> MPContext:
        return context(self.precision_bits)

    @property
    def x(self):
        return _real(self.ctx, self.re)

    @property
    def y(self):
        return _real(self.ctx, self.im)

    @property
    def value(self):
        return self.ctx.mpc(self.x, self.y)

    @property
    def delta(self):
        """|2 cosh a - 2|, recomputed on every access."""
        ctx = self.ctx
        return abs(2 * ctx.cosh(self.value) - 2)

    def with_precision(self, bits: int) -> "ComplexParam":
        return ComplexParam(self.re, self.im, bits)

    def __reduce__(self):
        # numbers from a private mpmath context do not pickle; a binary
        # float value converts to a Fraction without loss
        return (ComplexParam, (_portable(self.re), _portable(self.im), self.precision_bits))

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    @classmethod
    def parse(cls, text: str, precision_bits: int = DEFAULT_PRECISION) -> "ComplexParam":
        """Parse ``"x"``, ``"yi"``, ``"x+yi"``, ``"x-yi"`` or ``"2pi*i"``.

        Components may also be ``k*pi`` multiples, e.g. ``"1/3*pi*i"``.
        """
        s = text.strip().replace(" ", "").lower()
        if not s:
            raise DomainError("empty complex literal")
        if s.endswith("j"):
            s = s[:-1] + "i"
        if not s.endswith("i") or s.endswith("pi"):
            return cls(_check_component(s), 0, precision_bits)
        body = s[:-1]
        if body.endswith("*"):
            body = body[:-1]
        # split at the last sign that is not leading and not an exponent sign
        split = None
        for idx in range(len(body) - 1, 0, -1):
            if body[idx] in "+-" and body[idx - 1] not in "e/*":
                split = idx
                break
        if split is None:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:split], body[split:]
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return cls(_check_component(re_part), _check_component(im_part), precision_bits)

    def __str__(self):
        return f"{self.re}+{self.im}i" if str(self.im)[:1] != "-" else f"{self.re}{self.im}i"


def _check_component(s: str) -> str:
    try:
        _real(context(53), s)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse {s!r} as a real number") from exc
    return s
