"""Poincare return maps: crossings, return times, derivatives."""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from conftest import michelson_rhs, rossler_rhs
from validode.errors import NoCrossing
from validode.intervals import Interval
from validode.linalg import IntervalMatrix, IntervalVector
from validode.poincare import Section, poincare_derivative, poincare_map
from validode.sets import C1DoubletonSet, from_affine
from validode.solver import SolverConfig
from validode.vectorfield import parse


def point_set(*vals):
    n = len(vals)
    return from_affine(list(vals), IntervalMatrix.identity(n),
                       IntervalVector.zeros(n))


def rossler_field():
    f = parse("par:a,b;var:x,y,z;fun:-(y+z),x+b*y,b+z*(x-a);")
    f.set_param("a", "5.7")
    f.set_param("b", "0.2")
    return f


def numeric_crossing(rhs, u0, index=0, direction=1, t_hi=30.0):
    """Nonrigorous first return to coordinate plane index = 0."""

    def ev(t, u):
        return u[index]

    ev.terminal = True
    ev.direction = direction
    # start slightly off the section along the flow
    sol0 = solve_ivp(rhs, [0.0, 1e-6], list(u0), rtol=1e-12, atol=1e-13)
    sol = solve_ivp(rhs, [1e-6, t_hi], sol0.y[:, -1], rtol=1e-12, atol=1e-13,
                    events=ev, max_step=0.25)
    assert sol.t_events[0].size > 0
    return sol.t_events[0][0], sol.y_events[0][0]


class TestSectionGeometry:
    def test_coordinate_s_value(self):
        sec = Section.coordinate(0, 1.5)
        v = sec.s_value(IntervalVector([Interval(2.0), Interval(9.0)]))
        assert v.contains(0.5)

    def test_affine_s_value(self):
        sec = Section.affine([1.0, 1.0], offset=[1.0, 0.0])
        v = sec.s_value(IntervalVector([Interval(2.0), Interval(3.0)]))
        assert v.contains(4.0)

    def test_bad_direction_rejected(self):
        with pytest.raises(ValueError):
            Section.coordinate(0, direction="sideways")

    def test_tangent_basis_orthogonal_to_normal(self):
        sec = Section.affine([1.0, 2.0, -1.0])
        E = sec.tangent_basis(3)
        assert np.allclose(E.T @ np.array([1.0, 2.0, -1.0]), 0.0, atol=1e-12)


class TestHarmonicOscillator:
    def test_first_return_is_full_period(self):
        f = parse("var:x,y;fun:y,-x;")
        sec = Section.coordinate(0, 0.0, direction="positive")
        res = poincare_map(f, sec, point_set(0.0, 1.0))
        assert res.return_time.contains(2.0 * math.pi)
        assert res.return_time.diam() < 1e-6
        h = res.image.hull()
        assert h[0].inflate(1e-9).contains(0.0)
        assert h[1].inflate(1e-9).contains(1.0)

    def test_both_directions_half_period(self):
        f = parse("var:x,y;fun:y,-x;")
        sec = Section.coordinate(0, 0.0, direction="both")
        res = poincare_map(f, sec, point_set(0.0, 1.0))
        assert res.return_time.contains(math.pi)
        assert res.crossing_signs == (-1,)

    def test_derivative_is_identity(self):
        f = parse("var:x,y;fun:y,-x;")
        sec = Section.coordinate(0, 0.0, direction="positive")
        c1 = C1DoubletonSet.from_doubleton(point_set(0.0, 1.0))
        res = poincare_derivative(f, sec, c1)
        assert res.DP.shape == (1, 1)
        assert res.DP[0, 0].inflate(1e-7).contains(1.0)

    def test_no_crossing_before_t_max(self):
        f = parse("var:x,y;fun:y,-x;")
        sec = Section.coordinate(0, 0.0, direction="positive")
        with pytest.raises(NoCrossing):
            poincare_map(f, sec, point_set(0.0, 1.0), t_max=1.0)


class TestRosslerCrossings:
    def test_reference_crossings_inside_enclosure(self, rng):
        f = rossler_field()
        sec = Section.coordinate(0, 0.0, direction="positive")
        w = 5e-4
        start = from_affine(
            [0.0, -8.0, 0.03],
            IntervalMatrix.from_point(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])),
            IntervalVector([Interval(-w, w), Interval(-w * 0.01, w * 0.01)]))
        res = poincare_map(f, sec, start, cfg=SolverConfig(order=10, tolerance=1e-10))
        h = res.image.hull()
        for _ in range(10):
            u0 = [0.0, -8.0 + rng.uniform(-w, w),
                  0.03 + rng.uniform(-w, w) * 0.01]
            t_ref, u_ref = numeric_crossing(rossler_rhs, u0, direction=1)
            assert res.return_time.inflate(1e-6).contains(t_ref + 1e-6)
            for i in range(3):
                assert h[i].inflate(1e-8).contains(float(u_ref[i]))

    def test_composition_never_looser_than_pipelined(self):
        f = rossler_field()
        sec = Section.coordinate(0, 0.0, direction="positive")
        cfg = SolverConfig(order=10, tolerance=1e-10)
        w = 1e-4
        E = IntervalMatrix.from_point(
            np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        start = from_affine([0.0, -8.0, 0.03], E,
                            IntervalVector([Interval(-w, w), Interval(0.0)]))
        once = poincare_map(f, sec, start, n_iter=2, cfg=cfg)
        mid = poincare_map(f, sec, start, n_iter=1, cfg=cfg)
        # re-seed the second leg from the first image's hull (pipelined)
        mh = sec.project_hull(mid.image.hull())
        restart = from_affine([0.0, mh[0].mid(), mh[1].mid()], E,
                              IntervalVector([mh[0] - Interval(mh[0].mid()),
                                              mh[1] - Interval(mh[1].mid())]))
        twice = poincare_map(f, sec, restart, n_iter=1, cfg=cfg)
        a = sec.project_hull(once.image.hull())
        b = sec.project_hull(twice.image.hull())
        for i in range(2):
            pad = 8 * math.ulp(max(1.0, b[i].mag()))
            assert b[i].inflate(pad).contains(a[i])


class TestMichelsonReversibility:
    def test_reversor_conjugates_forward_and_backward_returns(self):
        """R(y,z)=(y,-z) on the section: P(R(P(u))) lands on R(u)."""
        f = parse("par:c;var:x,y,z;fun:y,z,c^2-y-x^2/2;")
        f.set_param("c", Interval(1.0))
        sec = Section.coordinate(0, 0.0, direction="both")
        cfg = SolverConfig(order=12, tolerance=1e-12)
        u = (0.8, 0.0)  # (y, z) on the symmetry line z = 0
        res1 = poincare_map(f, sec, point_set(0.0, u[0], u[1]), cfg=cfg)
        p1 = sec.project_hull(res1.image.hull())
        reflected = point_set(0.0, p1[0].mid(), -p1[1].mid())
        res2 = poincare_map(f, sec, reflected, cfg=cfg)
        p2 = sec.project_hull(res2.image.hull())
        assert p2[0].inflate(1e-6).contains(u[0])
        assert p2[1].inflate(1e-6).contains(-u[1])


class TestDerivativeAgainstFiniteDifferences:
    def test_rossler_dp_contains_numeric_differences(self):
        f = rossler_field()
        sec = Section.coordinate(0, 0.0, direction="positive")
        cfg = SolverConfig(order=10, tolerance=1e-10)
        y0, z0 = -8.0, 0.03
        w = 1e-5
        E = IntervalMatrix.from_point(
            np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        box = from_affine([0.0, y0, z0], E,
                          IntervalVector([Interval(-w, w), Interval(-w, w)]))
        c1 = C1DoubletonSet.from_doubleton(box)
        res = poincare_derivative(f, sec, c1, cfg=cfg)
        d = 1e-6

        def ret(y, z):
            _, u = numeric_crossing(rossler_rhs, [0.0, y, z], direction=1)
            return np.array([u[1], u[2]])

        for j, (dy, dz) in enumerate(((d, 0.0), (0.0, d))):
            fd = (ret(y0 + dy, z0 + dz) - ret(y0 - dy, z0 - dz)) / (2 * d)
            for i in range(2):
                assert res.DP[i, j].inflate(1e-4).contains(float(fd[i]))
