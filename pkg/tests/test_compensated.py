"""Ball (double-double plus radius) arithmetic against an mpmath oracle."""

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from validode.compensated import Ball, BallRangeError, BallVector
from validode.intervals import Interval

mpmath.mp.prec = 220


def exact(b: Ball):
    return mpmath.mpf(b.hi) + mpmath.mpf(b.lo)


class TestConstruction:
    def test_from_decimal_contains_rational(self):
        b = Ball.from_decimal("0.1")
        err = abs(mpmath.mpf(1) / 10 - exact(b))
        assert err <= b.rad
        # double-double catches nearly all of it
        assert b.rad < 1e-30

    def test_from_interval(self):
        b = Ball.from_interval(Interval(1.0, 1.0 + 1e-10))
        iv = b.to_interval()
        assert iv.lo <= 1.0 and iv.hi >= 1.0 + 1e-10

    def test_guard_rejects_nonfinite(self):
        with pytest.raises(BallRangeError):
            Ball(math.inf)

    def test_guard_rejects_huge(self):
        with pytest.raises(BallRangeError):
            Ball(2.0 ** 501)

    def test_mul_overflowing_raises(self):
        big = Ball(2.0 ** 400)
        with pytest.raises(BallRangeError):
            big.mul(big)


class TestOperations:
    def test_add_exact_error_bound(self, rng):
        for _ in range(500):
            a = Ball(float(rng.standard_normal()), float(rng.standard_normal()) * 1e-18)
            b = Ball(float(rng.standard_normal()), float(rng.standard_normal()) * 1e-18)
            s = a.add(b)
            err = abs((exact(a) + exact(b)) - exact(s))
            assert err <= s.rad

    def test_mul_exact_error_bound(self, rng):
        for _ in range(500):
            a = Ball(float(rng.standard_normal()), float(rng.standard_normal()) * 1e-18)
            b = Ball(float(rng.standard_normal()), float(rng.standard_normal()) * 1e-18)
            p = a.mul(b)
            err = abs(exact(a) * exact(b) - exact(p))
            assert err <= p.rad

    def test_div_d_exact_error_bound(self, rng):
        for _ in range(500):
            a = Ball(float(rng.standard_normal()), float(rng.standard_normal()) * 1e-18)
            d = float(rng.standard_normal())
            if d == 0.0:
                continue
            q = a.div_d(d)
            err = abs(exact(a) / mpmath.mpf(d) - exact(q))
            assert err <= q.rad

    def test_div_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            Ball(1.0).div_d(0.0)

    def test_random_op_chains_stay_rigorous(self, rng):
        """Long mixed chains: the mpmath value never escapes the ball."""
        for _ in range(150):
            b = Ball.from_decimal("0.1")
            m = mpmath.mpf(1) / 10
            for _ in range(40):
                op = rng.integers(0, 5)
                other = float(rng.uniform(-4.0, 4.0))
                ob = Ball(other)
                om = mpmath.mpf(other)
                if op == 0:
                    b, m = b.add(ob), m + om
                elif op == 1:
                    b, m = b.sub(ob), m - om
                elif op == 2:
                    b, m = b.mul(ob), m * om
                elif op == 3:
                    b, m = b.mul_d(other), m * om
                else:
                    d = other if other != 0.0 else 1.0
                    b, m = b.div_d(d), m / mpmath.mpf(d)
                if abs(m) > 1e20:  # keep magnitudes testable
                    b, m = b.mul_d(1e-20), m * mpmath.mpf(1e-20)
                assert abs(m - exact(b)) <= b.rad

    def test_sub_ulp_accuracy_over_long_chain(self):
        """The reason balls exist: error stays far below 1 ulp."""
        b = Ball.from_decimal("0.1")
        for _ in range(200):
            b = b.mul_d(1.0000000001).add(Ball.from_decimal("0.001")).sub(
                Ball.from_decimal("0.001"))
        assert b.rad < 1e-25 * abs(b.hi)

    def test_to_interval_contains_value(self, rng):
        for _ in range(200):
            b = Ball(float(rng.standard_normal()),
                     float(rng.standard_normal()) * 1e-18,
                     abs(float(rng.standard_normal())) * 1e-20)
            iv = b.to_interval()
            lo, hi = mpmath.mpf(iv.lo), mpmath.mpf(iv.hi)
            assert lo <= exact(b) - b.rad
            assert hi >= exact(b) + b.rad


class TestBallVector:
    def test_basics(self):
        v = BallVector([Ball(1.0), Ball(2.0, 0.0, 0.5)])
        assert v.dim == len(v) == 2
        assert v[1].rad == 0.5
        assert v.norm_max() == 2.5

    def test_to_interval_vector(self):
        v = BallVector([Ball(1.0), Ball(-3.0)])
        iv = v.to_interval_vector()
        assert iv[0].contains(1.0) and iv[1].contains(-3.0)
