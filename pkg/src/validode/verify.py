"""Proof rules turning enclosures into verdicts and certificates.

Every inequality here is checked strictly on interval bounds; an
uncertain comparison always fails, never passes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import EmptyIntersection, SingularPivot
from .intervals import Interval
from .linalg import (
    IntervalMatrix,
    IntervalVector,
    eig_bounds_2x2,
    posdef_sym_2x2,
    solve_gauss,
)

__all__ = [
    "NewtonVerdict",
    "Certificate",
    "Check",
    "interval_newton",
    "sign_change_existence",
    "covering_check",
    "cone_condition",
    "saddle_verdict",
]


@dataclass
class NewtonVerdict:
    status: str  # unique_zero | inconclusive | no_zero
    N: Optional[IntervalVector]
    X: IntervalVector


@dataclass
class Check:
    description: str
    bound: tuple  # (lo, hi)
    op: str  # "<", ">", "subset", "disjoint", "posdef", ...
    threshold: float | None
    passed: bool


@dataclass
class Certificate:
    claim_id: str
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    field_hash: str = ""

    @property
    def overall(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, description: str, bound, op: str, threshold, passed: bool) -> bool:
        if isinstance(bound, Interval):
            bound = (bound.lo, bound.hi)
        self.checks.append(Check(description, tuple(bound), op, threshold, bool(passed)))
        return bool(passed)

    def to_json(self) -> str:
        doc = {
            "claim_id": self.claim_id,
            "checks": [
                {
                    "description": c.description,
                    "bound": [_f17(c.bound[0]), _f17(c.bound[1])],
                    "op": c.op,
                    "threshold": None if c.threshold is None else _f17(c.threshold),
                    "pass": c.passed,
                }
                for c in self.checks
            ],
            "overall": self.overall,
            "config": self.config,
            "field_hash": self.field_hash,
        }
        return json.dumps(doc, sort_keys=True)


def _f17(x) -> str:
    return "%.17g" % float(x)


def field_hash(source: str) -> str:
    return hashlib.sha256(source.encode()).hexdigest()[:16]


def interval_newton(F: Callable, x0: IntervalVector, X: IntervalVector,
                    max_enlarge: int = 3) -> NewtonVerdict:
    """Interval Newton operator N = x0 - [DF(X)]^{-1} F(x0).

    F(x0_point, X_box) must return (value at the point, Jacobian enclosure
    over the box).  N in the interior of X proves a unique zero in X and
    the verdict's N is the refined enclosure N cap X; N disjoint from X
    proves there is none.  An inconclusive result triggers up to
    max_enlarge automatic 4x box enlargements around x0.
    """
    for attempt in range(max_enlarge + 1):
        fx, DF = F(x0, X)
        try:
            N = x0 - solve_gauss(DF, fx)
        except SingularPivot:
            N = None
        if N is not None:
            if X.contains_in_interior(N):
                return NewtonVerdict("unique_zero", N.intersect(X), X)
            if not N.intersects(X):
                return NewtonVerdict("no_zero", N, X)
        if attempt < max_enlarge:
            X = IntervalVector([
                Interval(c.mid()).inflate(max(2.0 * e.diam(), 1e-300))
                for c, e in zip(x0, X)
            ])
    return NewtonVerdict("inconclusive", N, X)


def sign_change_existence(claim_id: str, g_lo: Interval, g_hi: Interval,
                          side_conditions=()) -> Certificate:
    """Existence by opposite strict signs of g at two bracket endpoints.

    side_conditions: iterable of (description, bound Interval, op, threshold)
    extra strict checks recorded in the same certificate.
    """
    cert = Certificate(claim_id)
    opposite = (g_lo.hi < 0.0 and g_hi.lo > 0.0) or (g_lo.lo > 0.0 and g_hi.hi < 0.0)
    cert.add("g at lower bracket endpoint excludes 0", g_lo, "!=0",
             0.0, g_lo.hi < 0.0 or g_lo.lo > 0.0)
    cert.add("g at upper bracket endpoint excludes 0", g_hi, "!=0",
             0.0, g_hi.hi < 0.0 or g_hi.lo > 0.0)
    cert.add("endpoint signs are opposite",
             Interval(min(g_lo.lo, g_hi.lo), max(g_lo.hi, g_hi.hi)),
             "opposite-signs", 0.0, opposite)
    for desc, bound, op, thr in side_conditions:
        if op == "<":
            ok = bound.hi < thr
        elif op == ">":
            ok = bound.lo > thr
        else:
            raise ValueError(f"unsupported op {op!r}")
        cert.add(desc, bound, op, thr, ok)
    return cert


def covering_check(claim_id: str, edges, evaluate: Callable,
                   depth_limit: int = 12) -> Certificate:
    """Strict one-sided image inequalities over subdividable edges.

    edges: list of dicts {name, lo, hi, inequality ('<' or '>'), threshold}
    parameterizing each edge by a scalar in [lo, hi].  evaluate(name, a, b)
    must return the Interval bound of the projected image of the edge piece
    [a, b], or raise; failures trigger bisection up to depth_limit.
    """
    cert = Certificate(claim_id)
    for edge in edges:
        name = edge["name"]
        op = edge["inequality"]
        thr = edge["threshold"]
        stack = [(edge["lo"], edge["hi"], 0)]
        pieces = 0
        worst = None
        ok = True
        while stack:
            a, b, depth = stack.pop()
            try:
                bound = evaluate(name, a, b)
            except Exception:
                bound = None
            if bound is not None:
                if worst is None:
                    worst = bound
                else:
                    worst = worst.hull(bound)
                if (op == "<" and bound.hi < thr) or (op == ">" and bound.lo > thr):
                    pieces += 1
                    continue
            if depth >= depth_limit:
                ok = False
                if bound is not None:
                    worst = bound
                break
            m = 0.5 * (a + b)
            stack.append((a, m, depth + 1))
            stack.append((m, b, depth + 1))
        if worst is None:
            worst = Interval.entire()
        cert.add(f"edge {name}: image {op} {thr!r} ({pieces} pieces)",
                 worst, op, thr, ok)
    return cert


def cone_condition(claim_id: str, piece_derivatives, lam: float, mu: float) -> Certificate:
    """Positive definiteness of DP^T diag(lam,mu) DP - diag(lam,mu) per piece.

    piece_derivatives: iterable of (piece name, 2x2 IntervalMatrix).
    """
    if not (lam > 0.0 > mu):
        raise ValueError("need lambda > 0 > mu")
    cert = Certificate(claim_id)
    Q = IntervalMatrix([[Interval(lam), Interval(0.0)],
                        [Interval(0.0), Interval(mu)]])
    for name, DP in piece_derivatives:
        M = DP.transpose().matmul(Q).matmul(DP) - Q
        # symmetrize the off-diagonal by hull before the Sylvester test
        off = M[0, 1].hull(M[1, 0])
        Msym = IntervalMatrix([[M[0, 0], off], [off, M[1, 1]]])
        ok = posdef_sym_2x2(Msym)
        det_low = Msym[0, 0] * Msym[1, 1] - off.sqr()
        cert.add(f"piece {name}: DP^T Q DP - Q positive definite",
                 det_low, "posdef", 0.0, ok)
        if not ok:
            break
    return cert


def saddle_verdict(claim_id: str, DP: IntervalMatrix) -> Certificate:
    """Real eigenvalue pair with |lam1| > 1 > |lam2| (strict)."""
    cert = Certificate(claim_id)
    eb = eig_bounds_2x2(DP)
    cert.add("eigenvalues verifiably real", Interval(0.0) if eb.kind != "real"
             else Interval(1.0), "real-pair", None, eb.kind == "real")
    if eb.kind == "real":
        mags = sorted([eb.lam1, eb.lam2], key=lambda e: e.mag(), reverse=True)
        big, small = mags
        big_abs = Interval(big.mig(), big.mag())
        small_abs = Interval(small.mig(), small.mag())
        cert.add("dominant eigenvalue magnitude > 1", big_abs, ">", 1.0,
                 big_abs.lo > 1.0)
        cert.add("second eigenvalue magnitude < 1", small_abs, "<", 1.0,
                 small_abs.hi < 1.0)
    return cert


def disjoint_enclosures(claim_id: str, named_boxes) -> Certificate:
    """Pairwise disjointness of refined enclosures (distinctness proof)."""
    cert = Certificate(claim_id)
    items = list(named_boxes)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            na, a = items[i]
            nb, b = items[j]
            disjoint = not a.intersects(b)
            gap = min(
                max(x.lo - y.hi, y.lo - x.hi) for x, y in zip(a, b)
            )
            cert.add(f"enclosures {na} and {nb} disjoint",
                     Interval(gap), "disjoint", 0.0, disjoint)
    return cert
