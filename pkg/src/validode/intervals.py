"""Outward-rounded interval arithmetic over binary64 endpoints.

Endpoints are plain Python floats.  Directed rounding is emulated in
software: for +, -, *, /, sqrt the exact rounding error of the nearest
result is recovered (TwoSum / Dekker product), so the returned endpoints
are *correctly rounded* in the required direction whenever the error
term is representable; otherwise we fall back to widening by one ulp.
Library transcendentals (sin, cos, exp, log) are widened by two ulps,
which covers the documented error bounds of the platform libm.
"""

from __future__ import annotations

import math
import re
import sys
from fractions import Fraction

from .errors import DivisionByZeroInterval, DomainError, EmptyIntersection

__all__ = ["Interval", "PI", "TWO_PI", "HALF_PI", "from_decimal"]

_INF = math.inf
_MAXF = sys.float_info.max
_SPLIT = 134217729.0  # 2**27 + 1, Veltkamp splitting constant
_SPLIT_GUARD = 6.69e299  # above this the splitting itself overflows
_UNDERFLOW_GUARD = 2.0 ** -970  # below this the error term may be lost

_next_up = lambda x: math.nextafter(x, _INF)
_next_down = lambda x: math.nextafter(x, -_INF)
_nextafter = math.nextafter
_isinf = math.isinf


def _new(lo: float, hi: float) -> "Interval":
    """Raw constructor for internal hot paths; endpoints must be valid."""
    iv = Interval.__new__(Interval)
    object.__setattr__(iv, "lo", lo)
    object.__setattr__(iv, "hi", hi)
    return iv


# ---------------------------------------------------------------------------
# directed scalar primitives
# ---------------------------------------------------------------------------

def _add_down(a: float, b: float) -> float:
    s = a + b
    if math.isinf(s):
        if math.isinf(a) or math.isinf(b):
            return s
        return s if s < 0 else _MAXF
    bp = s - a
    err = (a - (s - bp)) + (b - bp)
    return _next_down(s) if err < 0 else s


def _add_up(a: float, b: float) -> float:
    s = a + b
    if math.isinf(s):
        if math.isinf(a) or math.isinf(b):
            return s
        return s if s > 0 else -_MAXF
    bp = s - a
    err = (a - (s - bp)) + (b - bp)
    return _next_up(s) if err > 0 else s


def _prod_err(x: float, y: float, p: float):
    """Exact error of the rounded product, or None when unrepresentable."""
    ax, ay = abs(x), abs(y)
    if ax > _SPLIT_GUARD or ay > _SPLIT_GUARD:
        return None
    if p != 0.0 and abs(p) < _UNDERFLOW_GUARD:
        return None
    cx = _SPLIT * x
    xh = cx - (cx - x)
    xl = x - xh
    cy = _SPLIT * y
    yh = cy - (cy - y)
    yl = y - yh
    return ((xh * yh - p) + xh * yl + xl * yh) + xl * yl


def _mul_down(x: float, y: float) -> float:
    # Dekker's product inlined; this is the hottest scalar kernel
    if x == 0.0 or y == 0.0:
        return 0.0
    p = x * y
    if _isinf(p):
        if _isinf(x) or _isinf(y):
            return p
        return p if p < 0 else _MAXF
    if _isinf(x) or _isinf(y):
        return p
    ax = x if x > 0 else -x
    ay = y if y > 0 else -y
    ap = p if p > 0 else -p
    if ax > _SPLIT_GUARD or ay > _SPLIT_GUARD or ap < _UNDERFLOW_GUARD:
        return _nextafter(p, -_INF)
    cx = _SPLIT * x
    xh = cx - (cx - x)
    xl = x - xh
    cy = _SPLIT * y
    yh = cy - (cy - y)
    yl = y - yh
    err = ((xh * yh - p) + xh * yl + xl * yh) + xl * yl
    return _nextafter(p, -_INF) if err < 0 else p


def _mul_up(x: float, y: float) -> float:
    if x == 0.0 or y == 0.0:
        return 0.0
    p = x * y
    if _isinf(p):
        if _isinf(x) or _isinf(y):
            return p
        return p if p > 0 else -_MAXF
    if _isinf(x) or _isinf(y):
        return p
    ax = x if x > 0 else -x
    ay = y if y > 0 else -y
    ap = p if p > 0 else -p
    if ax > _SPLIT_GUARD or ay > _SPLIT_GUARD or ap < _UNDERFLOW_GUARD:
        return _nextafter(p, _INF)
    cx = _SPLIT * x
    xh = cx - (cx - x)
    xl = x - xh
    cy = _SPLIT * y
    yh = cy - (cy - y)
    yl = y - yh
    err = ((xh * yh - p) + xh * yl + xl * yh) + xl * yl
    return _nextafter(p, _INF) if err > 0 else p


def _mul_bounds(al: float, ah: float, bl: float, bh: float):
    """Endpoint pair of [al,ah]*[bl,bh]; leaf kernel for convolution loops."""
    if al >= 0.0:
        if bl >= 0.0:
            return _mul_down(al, bl), _mul_up(ah, bh)
        if bh <= 0.0:
            return _mul_down(ah, bl), _mul_up(al, bh)
        return _mul_down(ah, bl), _mul_up(ah, bh)
    if ah <= 0.0:
        if bl >= 0.0:
            return _mul_down(al, bh), _mul_up(ah, bl)
        if bh <= 0.0:
            return _mul_down(ah, bh), _mul_up(al, bl)
        return _mul_down(al, bh), _mul_up(al, bl)
    if bl >= 0.0:
        return _mul_down(al, bh), _mul_up(ah, bh)
    if bh <= 0.0:
        return _mul_down(ah, bl), _mul_up(al, bl)
    return (
        min(_mul_down(al, bh), _mul_down(ah, bl)),
        max(_mul_up(al, bl), _mul_up(ah, bh)),
    )


def _div_resid_sign(x: float, y: float, q: float):
    """Sign of x - q*y (the true quotient is q + resid/y), or None."""
    p = q * y
    err = _prod_err(q, y, p)
    if err is None or math.isinf(p):
        return None
    return math.fsum((x, -p, -err))


def _div_down(x: float, y: float) -> float:
    q = x / y
    if math.isinf(q):
        if math.isinf(x):
            return q
        return q if q < 0 else _MAXF
    if x == 0.0 or math.isinf(y):
        return q
    s = _div_resid_sign(x, y, q)
    if s is None:
        return _next_down(q)
    if s == 0.0:
        return q
    true_above = (s > 0) == (y > 0)
    return q if true_above else _next_down(q)


def _div_up(x: float, y: float) -> float:
    q = x / y
    if math.isinf(q):
        if math.isinf(x):
            return q
        return q if q > 0 else -_MAXF
    if x == 0.0 or math.isinf(y):
        return q
    s = _div_resid_sign(x, y, q)
    if s is None:
        return _next_up(q)
    if s == 0.0:
        return q
    true_above = (s > 0) == (y > 0)
    return _next_up(q) if true_above else q


def _sqrt_down(x: float) -> float:
    if x == 0.0:
        return 0.0
    r = math.sqrt(x)
    if math.isinf(r):
        return r
    p = r * r
    err = _prod_err(r, r, p)
    if err is None:
        return _next_down(r)
    s = math.fsum((x, -p, -err))
    return r if s >= 0 else _next_down(r)


def _sqrt_up(x: float) -> float:
    if x == 0.0:
        return 0.0
    r = math.sqrt(x)
    if math.isinf(r):
        return r
    p = r * r
    err = _prod_err(r, r, p)
    if err is None:
        return _next_up(r)
    s = math.fsum((x, -p, -err))
    return r if s <= 0 else _next_up(r)


def _widen2_down(x: float) -> float:
    return _next_down(_next_down(x))


def _widen2_up(x: float) -> float:
    return _next_up(_next_up(x))


# ---------------------------------------------------------------------------
# Interval
# ---------------------------------------------------------------------------

class Interval:
    """Closed interval [lo, hi] with outward-rounded operations.

    Immutable value type: every operation returns a fresh interval that
    contains the exact real image of its arguments.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("NaN endpoint")
        if lo > hi:
            raise ValueError(f"lo > hi: [{lo!r}, {hi!r}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def point(v: float) -> "Interval":
        return Interval(v, v)

    @staticmethod
    def entire() -> "Interval":
        return Interval(-_INF, _INF)

    @staticmethod
    def parse(text: str) -> "Interval":
        """Parse "[lo, hi]" or a single decimal literal (outward-rounded)."""
        text = text.strip()
        m = re.fullmatch(r"\[\s*([^\s,\]]+)\s*,\s*([^\s,\]]+)\s*\]", text)
        if m:
            lo = from_decimal(m.group(1))
            hi = from_decimal(m.group(2))
            return Interval(lo.lo, hi.hi)
        return from_decimal(text)

    # -- rendering -----------------------------------------------------------

    def __repr__(self):
        return f"[{self.lo:.17g}, {self.hi:.17g}]"

    # -- predicates / set ops ------------------------------------------------

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def contains_in_interior(self, other: "Interval") -> bool:
        return self.lo < other.lo and other.hi < self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise EmptyIntersection(f"{self} and {other}")
        return Interval(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def mid(self) -> float:
        m = 0.5 * (self.lo + self.hi)
        if math.isinf(m) or math.isnan(m):
            m = 0.5 * self.lo + 0.5 * self.hi
        if math.isinf(m) or math.isnan(m):
            m = 0.0
        return min(max(m, self.lo, -_MAXF), self.hi, _MAXF)

    def diam(self) -> float:
        return _add_up(self.hi, -self.lo)

    def rad(self) -> float:
        return 0.5 * self.diam()

    def split(self):
        m = self.mid()
        return Interval(self.lo, m), Interval(m, self.hi)

    def inflate(self, eps: float) -> "Interval":
        return Interval(_add_down(self.lo, -eps), _add_up(self.hi, eps))

    def mig(self) -> float:
        """Smallest absolute value in the interval."""
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self):
        return _new(-self.hi, -self.lo)

    def __add__(self, other):
        if type(other) is not Interval:
            other = _coerce(other)
            if other is None:
                return NotImplemented
        # TwoSum inlined in both directions
        a = self.lo
        b = other.lo
        s = a + b
        if _isinf(s):
            lo = s if (_isinf(a) or _isinf(b) or s < 0) else _MAXF
        else:
            bp = s - a
            lo = _nextafter(s, -_INF) if (a - (s - bp)) + (b - bp) < 0 else s
        a = self.hi
        b = other.hi
        s = a + b
        if _isinf(s):
            hi = s if (_isinf(a) or _isinf(b) or s > 0) else -_MAXF
        else:
            bp = s - a
            hi = _nextafter(s, _INF) if (a - (s - bp)) + (b - bp) > 0 else s
        return _new(lo, hi)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not Interval:
            other = _coerce(other)
            if other is None:
                return NotImplemented
        a = self.lo
        b = -other.hi
        s = a + b
        if _isinf(s):
            lo = s if (_isinf(a) or _isinf(b) or s < 0) else _MAXF
        else:
            bp = s - a
            lo = _nextafter(s, -_INF) if (a - (s - bp)) + (b - bp) < 0 else s
        a = self.hi
        b = -other.lo
        s = a + b
        if _isinf(s):
            hi = s if (_isinf(a) or _isinf(b) or s > 0) else -_MAXF
        else:
            bp = s - a
            hi = _nextafter(s, _INF) if (a - (s - bp)) + (b - bp) > 0 else s
        return _new(lo, hi)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if type(other) is not Interval:
            other = _coerce(other)
            if other is None:
                return NotImplemented
        al, ah = self.lo, self.hi
        bl, bh = other.lo, other.hi
        if al >= 0.0:
            if bl >= 0.0:
                return _new(_mul_down(al, bl), _mul_up(ah, bh))
            if bh <= 0.0:
                return _new(_mul_down(ah, bl), _mul_up(al, bh))
            return _new(_mul_down(ah, bl), _mul_up(ah, bh))
        if ah <= 0.0:
            if bl >= 0.0:
                return _new(_mul_down(al, bh), _mul_up(ah, bl))
            if bh <= 0.0:
                return _new(_mul_down(ah, bh), _mul_up(al, bl))
            return _new(_mul_down(al, bh), _mul_up(al, bl))
        if bl >= 0.0:
            return _new(_mul_down(al, bh), _mul_up(ah, bh))
        if bh <= 0.0:
            return _new(_mul_down(ah, bl), _mul_up(al, bl))
        return _new(
            min(_mul_down(al, bh), _mul_down(ah, bl)),
            max(_mul_up(al, bl), _mul_up(ah, bh)),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        bl, bh = other.lo, other.hi
        if bl <= 0.0 <= bh:
            raise DivisionByZeroInterval(f"divisor {other} contains 0")
        al, ah = self.lo, self.hi
        if bl > 0.0:
            lo = _div_down(al, bl if al <= 0.0 else bh)
            hi = _div_up(ah, bh if ah <= 0.0 else bl)
        else:
            lo = _div_down(ah, bh if ah >= 0.0 else bl)
            hi = _div_up(al, bl if al >= 0.0 else bh)
        return Interval(lo, hi)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    # -- elementary functions --------------------------------------------------

    def sqr(self) -> "Interval":
        al, ah = self.lo, self.hi
        if al >= 0.0:
            return _new(_mul_down(al, al), _mul_up(ah, ah))
        if ah <= 0.0:
            return _new(_mul_down(ah, ah), _mul_up(al, al))
        return _new(0.0, max(_mul_up(al, al), _mul_up(ah, ah)))

    def sqrt(self) -> "Interval":
        if self.lo < 0.0:
            raise DomainError(f"sqrt of {self}")
        return Interval(_sqrt_down(self.lo), _sqrt_up(self.hi))

    def exp(self) -> "Interval":
        lo = max(_widen2_down(math.exp(self.lo)), 0.0)
        try:
            eh = math.exp(self.hi)
        except OverflowError:
            eh = _INF
        return Interval(lo, _widen2_up(eh))

    def log(self) -> "Interval":
        if self.lo <= 0.0:
            raise DomainError(f"log of {self}")
        return Interval(_widen2_down(math.log(self.lo)), _widen2_up(math.log(self.hi)))

    def sin(self) -> "Interval":
        if self.mag() > 1e12 or self.diam() >= TWO_PI.lo:
            # argument reduction is unreliable this far out; stay correct
            return Interval(-1.0, 1.0)
        lo = _widen2_down(min(math.sin(self.lo), math.sin(self.hi)))
        hi = _widen2_up(max(math.sin(self.lo), math.sin(self.hi)))
        # extrema of sin at (k + 1/2)*pi
        kmin = math.floor(self.lo / PI.hi - 0.5) - 1
        kmax = math.ceil(self.hi / PI.lo - 0.5) + 1
        for k in range(kmin, kmax + 1):
            c = PI * (k + 0.5)
            if c.hi >= self.lo and c.lo <= self.hi:
                if k % 2 == 0:
                    hi = 1.0
                else:
                    lo = -1.0
        return Interval(max(lo, -1.0), min(hi, 1.0))

    def cos(self) -> "Interval":
        if self.mag() > 1e12 or self.diam() >= TWO_PI.lo:
            return Interval(-1.0, 1.0)
        lo = _widen2_down(min(math.cos(self.lo), math.cos(self.hi)))
        hi = _widen2_up(max(math.cos(self.lo), math.cos(self.hi)))
        # extrema of cos at k*pi
        kmin = math.floor(self.lo / PI.hi) - 1
        kmax = math.ceil(self.hi / PI.lo) + 1
        for k in range(kmin, kmax + 1):
            c = PI * float(k) if k != 0 else Interval(0.0)
            if c.hi >= self.lo and c.lo <= self.hi:
                if k % 2 == 0:
                    hi = 1.0
                else:
                    lo = -1.0
        return Interval(max(lo, -1.0), min(hi, 1.0))

    def pow_int(self, n: int) -> "Interval":
        """Integer power n >= 0, by repeated squaring on the dedicated sqr."""
        if not isinstance(n, int) or n < 0:
            raise DomainError(f"pow_int exponent must be a non-negative int, got {n!r}")
        if n == 0:
            return Interval(1.0)
        if n == 1:
            return Interval(self.lo, self.hi)
        if n % 2 == 0:
            return self.pow_int(n // 2).sqr()
        # odd power is monotone: directed endpoint powers
        return Interval(_pow_dir(self.lo, n, up=False), _pow_dir(self.hi, n, up=True))


def _pow_dir(x: float, n: int, up: bool) -> float:
    """x**n (n odd, >= 1) rounded in one direction."""
    neg = x < 0.0
    ax = abs(x)
    # for negative base, flip the rounding direction of the magnitude
    want_up = up != neg
    r = 1.0
    base = ax
    m = n
    mul = _mul_up if want_up else _mul_down
    while m > 0:
        if m & 1:
            r = mul(r, base)
        base = mul(base, base)
        m >>= 1
    return -r if neg else r


def _coerce(x):
    if isinstance(x, Interval):
        return x
    if isinstance(x, (int, float)):
        return Interval(float(x))
    return None


def from_decimal(text: str) -> Interval:
    """Tightest interval around a decimal literal, outward-rounded."""
    f = float(text)
    if math.isinf(f):
        raise ValueError(f"literal out of range: {text!r}")
    try:
        exact = Fraction(text)
    except ValueError:
        from decimal import Decimal

        exact = Fraction(Decimal(text))
    approx = Fraction(f)
    if approx == exact:
        return Interval(f, f)
    if approx < exact:
        return Interval(f, _next_up(f))
    return Interval(_next_down(f), f)


# rigorous enclosures of pi and friends (math.pi is the nearest double below pi)
PI = Interval(math.pi, _next_up(math.pi))
TWO_PI = PI * 2.0
HALF_PI = PI * 0.5
