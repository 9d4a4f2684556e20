"""Validated Taylor stepping: enclosures, remainders, step control."""

import math

import numpy as np
import pytest

from conftest import pendulum_rhs, reference_flow, rossler_rhs
from validode.intervals import Interval, TWO_PI
from validode.linalg import IntervalMatrix, IntervalVector
from validode.sets import BoxSet, C1DoubletonSet, from_affine
from validode.solver import Solver, SolverConfig, integrate_c1, integrate_to
from validode.vectorfield import parse


def ivec(*vals):
    return IntervalVector([Interval(v) for v in vals])


def point_set(*vals):
    n = len(vals)
    return from_affine(list(vals), IntervalMatrix.identity(n),
                       IntervalVector.zeros(n))


class TestConfig:
    def test_order_floor(self):
        with pytest.raises(ValueError):
            SolverConfig(order=1)

    def test_step_bounds(self):
        with pytest.raises(ValueError):
            SolverConfig(h_min=1.0, h_max=0.5)


class TestRoughEnclosure:
    def test_constant_zero_field(self):
        f = parse("var:x;fun:0*x;")
        s = Solver(f)
        box = IntervalVector([Interval(1.0, 2.0)])
        Z, h = s.rough_enclosure(0.0, box, 1.0)
        assert h == 1.0
        assert Z[0].contains(Interval(1.0, 2.0))

    def test_unit_speed(self):
        f = parse("var:x;fun:x*0+1;")
        s = Solver(f)
        Z, h = s.rough_enclosure(0.0, ivec(0.0), 0.5)
        assert Z[0].contains(Interval(0.0, 0.5 if h == 0.5 else h))

    def test_rossler_box_accepts_some_step(self):
        f = parse("par:a,b;var:x,y,z;fun:-(y+z),x+b*y,b+z*(x-a);")
        f.set_param("a", "5.7")
        f.set_param("b", "0.2")
        box = IntervalVector([Interval(0.0).inflate(1e-3),
                              Interval(-8.0).inflate(1e-3),
                              Interval(0.03).inflate(1e-3)])
        s = Solver(f)
        Z, h = s.rough_enclosure(0.0, box, 0.1)
        assert h > 0.0
        assert max(z.diam() for z in Z) <= 2.0


class TestIntegration:
    def test_exponential_reaches_e(self):
        f = parse("var:x;fun:x;")
        out = integrate_to(f, point_set(1.0), 1.0,
                           SolverConfig(order=20, tolerance=1e-14)).hull()
        assert out[0].contains(math.e)
        assert out[0].diam() <= 1e-12

    def test_harmonic_oscillator_period(self):
        f = parse("var:x,y;fun:y,-x;")
        out = integrate_to(f, point_set(1.0, 0.0), TWO_PI).hull()
        assert abs(out[0].mid() - 1.0) < 1e-8
        assert abs(out[1].mid()) < 1e-8
        assert max(out[0].diam(), out[1].diam()) <= 1e-8

    def test_interval_end_time(self):
        f = parse("var:x,y;fun:y,-x;")
        out = integrate_to(f, point_set(1.0, 0.0), TWO_PI).hull()
        # TWO_PI is an interval; the returned hull covers all end times
        assert out[0].contains(1.0 - 1e-12) or out[0].hi >= 1.0 - 1e-10

    def test_t_not_ahead_raises(self):
        f = parse("var:x;fun:x;")
        with pytest.raises(ValueError):
            integrate_to(f, point_set(1.0), 0.0, t0=1.0)

    def test_determinism(self):
        f = parse("var:x,y;fun:y,-sin(x);")
        a = integrate_to(f, point_set(0.5, 0.5), 2.0).hull()
        b = integrate_to(f, point_set(0.5, 0.5), 2.0).hull()
        for p, q in zip(a, b):
            assert p.lo == q.lo and p.hi == q.hi

    def test_containment_of_reference_trajectories(self, rng):
        f = parse("var:x,y;fun:y,-sin(x);")
        box = from_affine([0.5, 0.3], IntervalMatrix.identity(2),
                          IntervalVector([Interval(-0.01, 0.01)] * 2))
        hull = integrate_to(f, box, 3.0).hull()
        for _ in range(10):
            u0 = [0.5 + rng.uniform(-0.01, 0.01), 0.3 + rng.uniform(-0.01, 0.01)]
            ref = reference_flow(pendulum_rhs, u0, 3.0)
            assert hull[0].contains(float(ref[0]))
            assert hull[1].contains(float(ref[1]))

    def test_step_control_sanity(self):
        """Halving the tolerance must not explode the step count."""
        f = parse("var:x,y;fun:y,-sin(x);")

        def count_steps(tol):
            cfg = SolverConfig(order=8, tolerance=tol)
            solver = Solver(f, cfg)
            s = point_set(1.0, 0.0)
            t = Interval(0.0)
            steps = 0
            while t.hi < 5.0:
                prep = solver.prepare(s, t, h_goal=5.0 - t.hi)
                h = min(prep.h, 5.0 - t.hi + 1e-15)
                s = prep.advance(s, h)
                t = t + h
                steps += 1
            return steps

        n1 = count_steps(1e-8)
        n2 = count_steps(5e-9)
        assert n2 <= 4 * n1


class TestC1Integration:
    def test_linear_field_derivative_is_e(self):
        f = parse("var:x;fun:x;")
        c1 = C1DoubletonSet.from_doubleton(point_set(1.0))
        out = integrate_c1(f, c1, 1.0, SolverConfig(order=20, tolerance=1e-14))
        V = out.v_enclosure()
        assert V[0, 0].contains(math.e)
        assert V[0, 0].diam() < 1e-10

    def test_rotation_derivative_is_rotation(self):
        f = parse("var:x,y;fun:y,-x;")
        c1 = C1DoubletonSet.from_doubleton(point_set(1.0, 0.0))
        T = math.pi / 2.0
        V = integrate_c1(f, c1, T).v_enclosure()
        want = [[math.cos(T), math.sin(T)], [-math.sin(T), math.cos(T)]]
        for i in range(2):
            for j in range(2):
                assert V[i, j].inflate(1e-9).contains(want[i][j])

    def test_v_contains_finite_difference_jacobian(self, rng):
        f = parse("var:x,y;fun:y,-sin(x);")
        x0 = [0.8, -0.2]
        w = 1e-4
        box = from_affine(x0, IntervalMatrix.identity(2),
                          IntervalVector([Interval(-w, w)] * 2))
        V = integrate_c1(f, C1DoubletonSet.from_doubleton(box), 2.0).v_enclosure()
        d = 1e-5
        for j in range(2):
            up, dn = list(x0), list(x0)
            up[j] += d
            dn[j] -= d
            fu = reference_flow(pendulum_rhs, up, 2.0, rtol=1e-13, atol=1e-14)
            fd = reference_flow(pendulum_rhs, dn, 2.0, rtol=1e-13, atol=1e-14)
            for i in range(2):
                assert V[i, j].contains(float((fu[i] - fd[i]) / (2 * d)))


class TestBoxVsDoubleton:
    def test_doubleton_beats_box_on_sheared_segment(self):
        f = parse("var:x,y;fun:y,-sin(x);")
        C = IntervalMatrix.from_point(np.array([[1.0, 1.0], [-1.0, 1.0]]))
        r0 = IntervalVector([Interval(-0.5, 0.5), Interval(0.0)])
        dbl = from_affine([2.5, 2.5], C, r0)
        box = BoxSet(dbl.hull())
        hd = integrate_to(f, dbl, 2.0).hull()
        hb = integrate_to(f, box, 2.0).hull()
        assert hd[0].diam() < hb[0].diam()
        assert hd[1].diam() < hb[1].diam()
