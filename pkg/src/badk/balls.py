"""Certified interval scalars built on MPFR directed rounding.

A :class:`Ball` is a closed real interval with mpfr endpoints; a
:class:`CBall` is a rectangle (re, im) enclosing a complex value.  All
endpoint arithmetic rounds outward through gmpy2 contexts, so every
enclosure is rigorous at the working precision of the moment.  Exact inputs
stay exact where MPFR allows it: ``exp(0)`` and ``log(1)`` come out as point
intervals, which is what keeps height comparisons at flow time 0 decidable.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .precision import PrecisionError, get_precision

_CTX = {}


def _ctxs(prec: int):
    try:
        return _CTX[prec]
    except KeyError:
        pair = (
            gmpy2.context(precision=prec, round=gmpy2.RoundDown),
            gmpy2.context(precision=prec, round=gmpy2.RoundUp),
        )
        _CTX[prec] = pair
        return pair


_MPFR_ZERO = mpfr(0)


def _to_endpoints(x, prec):
    """Outward-rounded mpfr endpoints of a number."""
    down, up = _ctxs(prec)
    if isinstance(x, Fraction):
        q = gmpy2.mpq(x.numerator, x.denominator)
        return down.add(q, _MPFR_ZERO), up.add(q, _MPFR_ZERO)
    # adding mpfr zero forces a correctly rounded mpfr conversion
    return down.add(x, _MPFR_ZERO), up.add(x, _MPFR_ZERO)


class Ball:
    """Closed real interval [lo, hi] with rigorous endpoint arithmetic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if not lo <= hi:
            raise ValueError(f"bad interval endpoints [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- construction -------------------------------------------------

    @classmethod
    def of(cls, x, prec: int | None = None) -> "Ball":
        if isinstance(x, Ball):
            return x
        lo, hi = _to_endpoints(x, prec or get_precision())
        return cls(lo, hi)

    @classmethod
    def point(cls, x) -> "Ball":
        v = x if isinstance(x, mpfr) else mpfr(x)
        return cls(v, v)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        o = Ball.of(other)
        down, up = _ctxs(get_precision())
        return Ball(down.add(self.lo, o.lo), up.add(self.hi, o.hi))

    __radd__ = __add__

    def __neg__(self):
        # endpoint negation must round outward too: bare mpfr operators would
        # silently re-round through the 53-bit default context
        down, up = _ctxs(get_precision())
        return Ball(down.minus(self.hi), up.minus(self.lo))

    def __sub__(self, other):
        o = Ball.of(other)
        down, up = _ctxs(get_precision())
        return Ball(down.sub(self.lo, o.hi), up.sub(self.hi, o.lo))

    def __rsub__(self, other):
        return Ball.of(other) - self

    def __mul__(self, other):
        o = Ball.of(other)
        down, up = _ctxs(get_precision())
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        lo = min(down.mul(a, c), down.mul(a, d), down.mul(b, c), down.mul(b, d))
        hi = max(up.mul(a, c), up.mul(a, d), up.mul(b, c), up.mul(b, d))
        return Ball(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Ball.of(other)
        if o.contains_zero():
            raise ZeroDivisionError("division by interval containing zero")
        down, up = _ctxs(get_precision())
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        lo = min(down.div(a, c), down.div(a, d), down.div(b, c), down.div(b, d))
        hi = max(up.div(a, c), up.div(a, d), up.div(b, c), up.div(b, d))
        return Ball(lo, hi)

    def __rtruediv__(self, other):
        return Ball.of(other) / self

    def abs(self) -> "Ball":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        _, up = _ctxs(get_precision())
        return Ball(mpfr(0), max(up.minus(self.lo), self.hi))

    def sq(self) -> "Ball":
        down, up = _ctxs(get_precision())
        a, b = self.lo, self.hi
        if a >= 0:
            return Ball(down.mul(a, a), up.mul(b, b))
        if b <= 0:
            return Ball(down.mul(b, b), up.mul(a, a))
        return Ball(mpfr(0), max(up.mul(a, a), up.mul(b, b)))

    def powi(self, n: int) -> "Ball":
        if n < 0:
            return Ball.of(1) / self.powi(-n)
        out = Ball.of(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base.sq() if n > 1 else base
            n >>= 1
        return out

    def sqrt(self) -> "Ball":
        if self.lo < 0:
            raise ValueError("sqrt of interval with negative part")
        down, up = _ctxs(get_precision())
        return Ball(down.sqrt(self.lo), up.sqrt(self.hi))

    def rootn(self, n: int) -> "Ball":
        if self.lo < 0:
            raise ValueError("rootn of interval with negative part")
        down, up = _ctxs(get_precision())
        return Ball(down.rootn(self.lo, n), up.rootn(self.hi, n))

    def exp(self) -> "Ball":
        down, up = _ctxs(get_precision())
        return Ball(down.exp(self.lo), up.exp(self.hi))

    def log(self) -> "Ball":
        if self.lo <= 0:
            raise ValueError("log of interval touching (-inf, 0]")
        down, up = _ctxs(get_precision())
        return Ball(down.log(self.lo), up.log(self.hi))

    # -- lattice of intervals -------------------------------------------

    def max_with(self, other: "Ball") -> "Ball":
        return Ball(max(self.lo, other.lo), max(self.hi, other.hi))

    def min_with(self, other: "Ball") -> "Ball":
        return Ball(min(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Ball") -> "Ball":
        return Ball(min(self.lo, other.lo), max(self.hi, other.hi))

    # -- queries ---------------------------------------------------------

    def mid(self) -> float:
        down, _ = _ctxs(get_precision())
        return float(down.div(down.add(self.lo, self.hi), 2))

    def rad(self) -> float:
        _, up = _ctxs(get_precision())
        r = float(up.div(up.sub(self.hi, self.lo), 2))
        return r * (1 + 2e-16) if r else 0.0

    def width(self):
        _, up = _ctxs(get_precision())
        return up.sub(self.hi, self.lo)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    # -- certified comparisons --------------------------------------------
    # True/False only when the enclosure decides the predicate; otherwise
    # PrecisionError.  A point interval sitting exactly on the threshold is
    # decidable (e.g. [1,1] < 1 is a certified False).

    def certified_lt(self, other) -> bool:
        lo, hi = _other_endpoints(other)
        if self.hi < lo:
            return True
        if self.lo >= hi:
            return False
        raise PrecisionError(f"cannot certify {self} < {other}")

    def certified_gt(self, other) -> bool:
        lo, hi = _other_endpoints(other)
        if self.lo > hi:
            return True
        if self.hi <= lo:
            return False
        raise PrecisionError(f"cannot certify {self} > {other}")

    def certified_sign(self) -> int:
        """-1, 0 (point zero) or +1; PrecisionError when undecidable."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        raise PrecisionError(f"cannot certify sign of {self}")

    def __repr__(self):
        return f"Ball({self.mid():.17g} ± {self.rad():.3g})"


def _other_endpoints(other):
    if isinstance(other, Ball):
        return other.lo, other.hi
    lo, hi = _to_endpoints(other, get_precision())
    return lo, hi


class CBall:
    """Rectangular complex enclosure with Ball real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Ball, im: Ball):
        self.re = re
        self.im = im

    @classmethod
    def of(cls, x) -> "CBall":
        if isinstance(x, CBall):
            return x
        if isinstance(x, Ball):
            return cls(x, Ball.of(0))
        if isinstance(x, complex):
            return cls(Ball.of(x.real), Ball.of(x.imag))
        return cls(Ball.of(x), Ball.of(0))

    def __add__(self, other):
        o = CBall.of(other)
        return CBall(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CBall(-self.re, -self.im)

    def __sub__(self, other):
        o = CBall.of(other)
        return CBall(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return CBall.of(other) - self

    def __mul__(self, other):
        o = CBall.of(other)
        return CBall(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = CBall.of(other)
        den = o.re.sq() + o.im.sq()
        if den.contains_zero():
            raise ZeroDivisionError("division by complex interval containing zero")
        num = self * o.conj()
        return CBall(num.re / den, num.im / den)

    def conj(self) -> "CBall":
        return CBall(self.re, -self.im)

    def abs(self) -> Ball:
        return (self.re.sq() + self.im.sq()).sqrt()

    def abs_sq(self) -> Ball:
        return self.re.sq() + self.im.sq()

    def mid(self) -> complex:
        return complex(self.re.mid(), self.im.mid())

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def is_real(self) -> bool:
        return self.im.lo == self.im.hi == 0

    def __repr__(self):
        return f"CBall({self.re!r}, {self.im!r})"


def as_scalar(x):
    """Wrap a number into a Ball (real) or CBall (non-real complex)."""
    if isinstance(x, (Ball, CBall)):
        return x
    if isinstance(x, complex):
        if x.imag == 0:
            return Ball.of(x.real)
        return CBall.of(x)
    return Ball.of(x)


def abs_of(x) -> Ball:
    return x.abs() if isinstance(x, (Ball, CBall)) else Ball.of(x).abs()


def sup_of(x, y) -> Ball:
    """Sup norm max(|x|, |y|) of two interval scalars."""
    return abs_of(x).max_with(abs_of(y))


def horner(coeffs, x):
    """Evaluate sum(coeffs[i] * x**i) with Ball/CBall x; coeffs exact numbers."""
    zero = Ball.of(0) if isinstance(x, Ball) else CBall.of(0)
    acc = zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc
