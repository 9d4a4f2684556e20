"""Proof rules: interval Newton, sign changes, coverings, cones, saddles."""

import json
import math

import numpy as np
import pytest

from validode.intervals import Interval
from validode.linalg import IntervalMatrix, IntervalVector
from validode.verify import (
    Certificate,
    cone_condition,
    covering_check,
    disjoint_enclosures,
    interval_newton,
    saddle_verdict,
    sign_change_existence,
)


def scalar_map(fn, dfn):
    """Wrap scalar fn/derivative as the (value, Jacobian) contract."""

    def F(x0, X):
        return (IntervalVector([fn(x0[0])]),
                IntervalMatrix([[dfn(X[0])]]))

    return F


class TestIntervalNewton:
    def test_sqrt2(self):
        F = scalar_map(lambda x: x.sqr() - Interval(2.0),
                       lambda X: Interval(2.0) * X)
        v = interval_newton(F, IntervalVector([Interval(1.5)]),
                            IntervalVector([Interval(1.0, 2.0)]))
        assert v.status == "unique_zero"
        assert v.N[0].contains(math.sqrt(2.0))
        # hand evaluation: N = 1.5 - 0.25/[2,4] = [1.375, 1.4375]
        assert v.N[0].lo >= 1.375 - 1e-12 and v.N[0].hi <= 1.4375 + 1e-12

    def test_identity_zero(self):
        F = scalar_map(lambda x: x, lambda X: Interval(1.0))
        v = interval_newton(F, IntervalVector([Interval(0.0)]),
                            IntervalVector([Interval(-1.0, 1.0)]))
        assert v.status == "unique_zero"
        assert v.N[0].contains(0.0)

    def test_no_zero(self):
        F = scalar_map(lambda x: x - Interval(10.0), lambda X: Interval(1.0))
        v = interval_newton(F, IntervalVector([Interval(0.0)]),
                            IntervalVector([Interval(-0.5, 0.5)]),
                            max_enlarge=0)
        assert v.status == "no_zero"

    def test_inconclusive_on_singular_jacobian(self):
        F = scalar_map(lambda x: x.sqr(), lambda X: Interval(2.0) * X)
        v = interval_newton(F, IntervalVector([Interval(0.0)]),
                            IntervalVector([Interval(-1.0, 1.0)]),
                            max_enlarge=0)
        assert v.status == "inconclusive"

    def test_refinement_never_grows(self):
        F = scalar_map(lambda x: x.sqr() - Interval(2.0),
                       lambda X: Interval(2.0) * X)
        X = IntervalVector([Interval(1.0, 2.0)])
        x0 = IntervalVector([Interval(1.5)])
        prev = None
        for _ in range(5):
            v = interval_newton(F, x0, X)
            assert v.status == "unique_zero"
            if prev is not None:
                assert prev.contains(v.N[0])
            prev = v.N[0]
            X = v.N
            x0 = IntervalVector([Interval(X[0].mid())])

    def test_soundness_random_polynomials(self, rng):
        """Verified unique zeros always contain a true root (quadratics
        and cubics with known real roots)."""
        for _ in range(30):
            roots = sorted(rng.uniform(-3.0, 3.0, rng.integers(2, 4)))
            if min(np.diff(roots)) < 0.3:
                continue
            coeffs = np.poly(roots)

            def fn(x, c=coeffs):
                acc = Interval(float(c[0]))
                for ck in c[1:]:
                    acc = acc * x + Interval(float(ck))
                return acc

            def dfn(X, c=coeffs):
                d = np.polyder(c)
                acc = Interval(float(d[0]))
                for ck in d[1:]:
                    acc = acc * X + Interval(float(ck))
                return acc

            target = float(roots[0])
            x0 = target + rng.uniform(-0.05, 0.05)
            F = scalar_map(fn, dfn)
            v = interval_newton(F, IntervalVector([Interval(x0)]),
                                IntervalVector([Interval(x0).inflate(0.1)]),
                                max_enlarge=0)
            if v.status == "unique_zero":
                assert v.N[0].inflate(1e-9).contains(target)


class TestSignChange:
    def test_linear_passes(self):
        cert = sign_change_existence("t", Interval(-1.0), Interval(1.0))
        assert cert.overall

    def test_same_sign_fails(self):
        cert = sign_change_existence("t", Interval(1.0), Interval(1.0))
        assert not cert.overall

    def test_zero_straddling_endpoint_fails(self):
        cert = sign_change_existence("t", Interval(-0.1, 0.1), Interval(1.0))
        assert not cert.overall

    def test_side_conditions_recorded(self):
        cert = sign_change_existence(
            "t", Interval(-1.0), Interval(1.0),
            side_conditions=[("y negative", Interval(-2.0, -1.0), "<", 0.0)])
        assert cert.overall
        assert any("y negative" in c.description for c in cert.checks)

    def test_failing_side_condition(self):
        cert = sign_change_existence(
            "t", Interval(-1.0), Interval(1.0),
            side_conditions=[("y negative", Interval(-2.0, 1.0), "<", 0.0)])
        assert not cert.overall


class TestCoveringCheck:
    def test_linear_stretch_passes(self):
        # image of [a,b] under x -> 3x; edge at -1 maps below -2, at 1 above 2
        def evaluate(name, a, b):
            img = Interval(a, b) * Interval(3.0)
            return img

        edges = [
            {"name": "left", "lo": -1.0, "hi": -0.9, "inequality": "<", "threshold": -2.0},
            {"name": "right", "lo": 0.9, "hi": 1.0, "inequality": ">", "threshold": 2.0},
        ]
        cert = covering_check("t", edges, evaluate)
        assert cert.overall

    def test_threshold_straddle_fails(self):
        def evaluate(name, a, b):
            return Interval(-1.0, 1.0)  # never strictly one-sided

        edges = [{"name": "e", "lo": 0.0, "hi": 1.0,
                  "inequality": "<", "threshold": 0.0}]
        cert = covering_check("t", edges, evaluate, depth_limit=3)
        assert not cert.overall

    def test_identity_map_fails_exit_inequality(self):
        # under the identity the right edge of M cannot exceed r_N > r_M
        def evaluate(name, a, b):
            return Interval(-7.6)

        edges = [{"name": "right edge of M", "lo": 0.0, "hi": 1.0,
                  "inequality": ">", "threshold": -4.6}]
        assert not covering_check("t", edges, evaluate).overall

    def test_subdivision_only_where_needed(self):
        calls = []

        def evaluate(name, a, b):
            calls.append((a, b))
            if b - a > 0.5:
                return Interval(-1.0, 1.0)  # too wide, force a split
            return Interval(0.1, 0.2)

        edges = [{"name": "e", "lo": 0.0, "hi": 1.0,
                  "inequality": ">", "threshold": 0.0}]
        cert = covering_check("t", edges, evaluate)
        assert cert.overall
        assert len(calls) == 3  # root plus two halves


class TestConeCondition:
    def test_diagonal_hyperbolic_passes(self):
        DP = IntervalMatrix([[Interval(2.0), Interval(0.0)],
                             [Interval(0.0), Interval(0.1)]])
        cert = cone_condition("t", [("p", DP)], 1.0, -100.0)
        assert cert.overall

    def test_identity_fails(self):
        DP = IntervalMatrix.identity(2)
        cert = cone_condition("t", [("p", DP)], 1.0, -100.0)
        assert not cert.overall

    def test_signature_constraint(self):
        with pytest.raises(ValueError):
            cone_condition("t", [], 1.0, 1.0)

    def test_pass_implies_sampled_quadratic_form_positive(self, rng):
        lam, mu = 1.0, -100.0
        w = 1e-3
        DPm = np.array([[2.0, 0.3], [0.1, 0.05]])
        DP = IntervalMatrix([[Interval(DPm[i, j]).inflate(w)
                              for j in range(2)] for i in range(2)])
        cert = cone_condition("t", [("p", DP)], lam, mu)
        assert cert.overall
        Q = np.diag([lam, mu])
        for _ in range(1000):
            D0 = DPm + rng.uniform(-w, w, (2, 2))
            M = D0.T @ Q @ D0 - Q
            M = 0.5 * (M + M.T)
            for _ in range(10):
                v = rng.standard_normal(2)
                v /= np.linalg.norm(v)
                assert v @ M @ v > 0.0


class TestSaddleVerdict:
    def test_diag_saddle_passes(self):
        DP = IntervalMatrix([[Interval(2.0), Interval(0.0)],
                             [Interval(0.0), Interval(0.5)]])
        assert saddle_verdict("t", DP).overall

    def test_rotation_fails(self):
        DP = IntervalMatrix([[Interval(0.0), Interval(1.0)],
                             [Interval(-1.0), Interval(0.0)]])
        assert not saddle_verdict("t", DP).overall

    def test_negative_expanding_eigenvalue_passes(self):
        DP = IntervalMatrix([[Interval(-3.0), Interval(0.0)],
                             [Interval(0.0), Interval(0.2)]])
        assert saddle_verdict("t", DP).overall


class TestDisjointness:
    def test_disjoint_boxes(self):
        a = IntervalVector([Interval(0.0, 1.0)])
        b = IntervalVector([Interval(2.0, 3.0)])
        assert disjoint_enclosures("t", [("a", a), ("b", b)]).overall

    def test_overlapping_boxes_fail(self):
        a = IntervalVector([Interval(0.0, 1.0)])
        b = IntervalVector([Interval(0.5, 3.0)])
        assert not disjoint_enclosures("t", [("a", a), ("b", b)]).overall


class TestCertificate:
    def test_overall_is_conjunction(self):
        cert = Certificate("t")
        assert not cert.overall  # empty certificate proves nothing
        cert.add("a", Interval(1.0), ">", 0.0, True)
        assert cert.overall
        cert.add("b", Interval(-1.0), ">", 0.0, False)
        assert not cert.overall

    def test_json_schema(self):
        cert = Certificate("demo")
        cert.add("check", Interval(0.25, 0.5), "<", 1.0, True)
        cert.config = {"order": 7}
        doc = json.loads(cert.to_json())
        assert doc["claim_id"] == "demo"
        assert doc["overall"] is True
        c = doc["checks"][0]
        assert c["bound"] == ["0.25", "0.5"]
        assert c["op"] == "<" and c["pass"] is True

    def test_self_contained_recheck(self):
        """Replaying recorded bounds against thresholds reproduces overall."""
        cert = Certificate("t")
        cert.add("a", Interval(0.1, 0.2), "<", 0.5, 0.2 < 0.5)
        cert.add("b", Interval(1.5, 2.0), ">", 1.0, 1.5 > 1.0)
        doc = json.loads(cert.to_json())
        replay = []
        for c in doc["checks"]:
            lo, hi = float(c["bound"][0]), float(c["bound"][1])
            thr = float(c["threshold"])
            replay.append(hi < thr if c["op"] == "<" else lo > thr)
        assert all(replay) == doc["overall"]

    def test_json_keys_sorted_and_17_digits(self):
        cert = Certificate("t")
        cert.add("a", Interval(1.0 / 3.0), "<", 1.0, True)
        text = cert.to_json()
        assert text.index('"checks"') < text.index('"claim_id"') < text.index('"overall"')
        assert "0.33333333333333331" in text
