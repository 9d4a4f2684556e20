"""Compensated (double-double) ball arithmetic for sub-ulp point tracking.

A binary64 interval cannot be narrower than one ulp of its value, so a
point trajectory propagated through many integration steps picks up
ulp-level noise at every step regardless of the method's order.  A
``Ball`` instead carries its value as the unevaluated double-double sum
``hi + lo`` together with a rigorous radius ``rad`` bounding everything
the pair does not capture: inherited input uncertainty plus the
accumulated rounding of the double-word operations themselves.  The
per-operation rounding charge is then of order u^2 ~ 1.2e-32 relative
instead of u ~ 1.1e-16, which keeps long point runs tight far below the
interval representation floor.

Error budgets are generous multiples of the proven double-word bounds
(relative 3u^2 for addition, 7u^2 for multiplication without FMA, 3u^2
for division by a double); every operation charges 16u^2 of the result
plus a fixed subnormal allowance that stays valid under gradual
underflow.  The radius bookkeeping runs in ordinary float arithmetic
and is inflated by 1 + 2^-40, dwarfing its own rounding error.  Values
whose magnitude leaves [0, 2^500] raise BallRangeError; callers are
expected to fall back to plain interval propagation.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ValidodeError
from .intervals import Interval, _add_down, _add_up

__all__ = ["Ball", "BallVector", "BallRangeError"]

_U2_16 = 16.0 * 2.0 ** -106  # 16 u^2, u = 2^-53
_SUBNORMAL_PAD = 1e-320  # covers a few ulps of any subnormal result
_RAD_INFLATE = 1.0 + 2.0 ** -40
_MAG_GUARD = 2.0 ** 500


class BallRangeError(ValidodeError):
    """Ball magnitude left the guarded range; fall back to intervals."""


def _two_sum(a: float, b: float):
    s = a + b
    bp = s - a
    return s, (a - (s - bp)) + (b - bp)


def _fast_two_sum(a: float, b: float):
    # requires |a| >= |b| or a == 0; callers guarantee this
    s = a + b
    return s, b - (s - a)


def _two_prod(a: float, b: float):
    # Dekker/Veltkamp; caller guards magnitudes so the split cannot overflow
    p = a * b
    ca = 134217729.0 * a
    ah = ca - (ca - a)
    al = a - ah
    cb = 134217729.0 * b
    bh = cb - (cb - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _guard(hi: float, lo: float, rad: float):
    if not (math.isfinite(hi) and math.isfinite(lo) and math.isfinite(rad)):
        raise BallRangeError("non-finite ball component")
    if abs(hi) > _MAG_GUARD or rad > _MAG_GUARD:
        raise BallRangeError("ball magnitude out of guarded range")


class Ball:
    """Value hi + lo with rigorous uncertainty radius rad >= 0."""

    __slots__ = ("hi", "lo", "rad")

    def __init__(self, hi: float, lo: float = 0.0, rad: float = 0.0):
        # the per-operation error budgets assume |lo| <= ulp(hi)/2, so
        # renormalize (exactly, via TwoSum) whatever the caller passed
        if lo != 0.0:
            hi, lo = _two_sum(hi, lo)
        _guard(hi, lo, rad)
        self.hi = hi
        self.lo = lo
        self.rad = rad

    @staticmethod
    def from_interval(iv: Interval) -> "Ball":
        m = iv.mid()
        r = max(_add_up(iv.hi, -m), _add_up(m, -iv.lo), 0.0)
        return Ball(m, 0.0, r * _RAD_INFLATE + _SUBNORMAL_PAD)

    @staticmethod
    def from_decimal(text: str) -> "Ball":
        """Ball around a decimal literal with radius ~u^2 of the value."""
        hi = float(text)
        if not math.isfinite(hi):
            raise ValueError(f"literal out of range: {text!r}")
        rest = Fraction(text) - Fraction(hi)
        lo = float(rest)
        # lo is the nearest double to the remainder; its own error is
        # below u*|lo| <= u^2*|hi|, covered with margin by the charge
        rad = abs(hi) * 4.0 * 2.0 ** -106 + _SUBNORMAL_PAD
        return Ball(hi, lo, rad)

    def to_interval(self) -> Interval:
        lo = _add_down(_add_down(self.hi, self.lo), -self.rad)
        hi = _add_up(_add_up(self.hi, self.lo), self.rad)
        return Interval(lo, hi)

    def mag(self) -> float:
        return abs(self.hi) + abs(self.lo) + self.rad

    def __repr__(self):
        return f"Ball({self.hi!r}, {self.lo!r}, rad={self.rad!r})"

    def __neg__(self) -> "Ball":
        return Ball(-self.hi, -self.lo, self.rad)

    def add(self, other: "Ball") -> "Ball":
        sh, sl = _two_sum(self.hi, other.hi)
        th, tl = _two_sum(self.lo, other.lo)
        c = sl + th
        vh, vl = _fast_two_sum(sh, c)
        w = tl + vl
        zh, zl = _fast_two_sum(vh, w)
        rad = (self.rad + other.rad + _U2_16 * abs(zh)) * _RAD_INFLATE \
            + _SUBNORMAL_PAD
        return Ball(zh, zl, rad)

    def sub(self, other: "Ball") -> "Ball":
        return self.add(-other)

    __add__ = add
    __sub__ = sub

    def mul(self, other: "Ball") -> "Ball":
        ch, cl1 = _two_prod(self.hi, other.hi)
        tl = self.hi * other.lo + self.lo * other.hi
        cl2 = cl1 + tl
        zh, zl = _fast_two_sum(ch, cl2)
        ma = abs(self.hi) + abs(self.lo) + self.rad
        mb = abs(other.hi) + abs(other.lo) + other.rad
        rad = (ma * other.rad + mb * self.rad
               + _U2_16 * abs(zh)) * _RAD_INFLATE + _SUBNORMAL_PAD
        return Ball(zh, zl, rad)

    __mul__ = mul

    def sqr(self) -> "Ball":
        return self.mul(self)

    def mul_d(self, d: float) -> "Ball":
        """Multiply by a plain double (exactly representable scalar)."""
        ph, pl = _two_prod(self.hi, d)
        q = self.lo * d + pl
        zh, zl = _fast_two_sum(ph, q)
        rad = (self.rad * abs(d) + _U2_16 * abs(zh)) * _RAD_INFLATE \
            + _SUBNORMAL_PAD
        return Ball(zh, zl, rad)

    def div_d(self, d: float) -> "Ball":
        """Divide by a plain nonzero double."""
        if d == 0.0:
            raise ZeroDivisionError("ball divided by zero scalar")
        th = self.hi / d
        ph, pl = _two_prod(th, d)
        dh = self.hi - ph
        delta = (dh - pl) + self.lo
        tl = delta / d
        zh, zl = _fast_two_sum(th, tl)
        rad = (self.rad / abs(d) + _U2_16 * abs(zh)) * _RAD_INFLATE \
            + _SUBNORMAL_PAD
        return Ball(zh, zl, rad)


class BallVector:
    """Thin list-of-balls wrapper mirroring the IntervalVector surface."""

    __slots__ = ("items",)

    def __init__(self, items):
        self.items = list(items)

    @property
    def dim(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i: int) -> Ball:
        return self.items[i]

    def __len__(self) -> int:
        return len(self.items)

    def norm_max(self) -> float:
        return max(b.mag() for b in self.items)

    def to_interval_vector(self):
        from .linalg import IntervalVector

        return IntervalVector([b.to_interval() for b in self.items])
