"""Structured set representations and their affine propagation.

A plain interval box wraps badly under rotation (the wrapping effect).
The doubleton ``x + C*r0 + Q*q`` keeps the initial-condition spread in
its own frame C and accumulates local errors q in a frame Q that is kept
near-orthogonal by QR at every step (Lohner's strategy).  The tripleton
additionally maintains a second, non-orthogonal frame B*r intersected
with Q*q.  C1 sets carry an enclosure of the derivative with respect to
initial conditions, decomposed the same way.
"""

from __future__ import annotations

import json

import numpy as np

from .compensated import Ball, BallVector
from .errors import DimensionMismatch, RankDeficient, SingularPivot
from .intervals import Interval
from .linalg import (
    IntervalMatrix,
    IntervalVector,
    near_orthogonalize,
    solve_gauss,
    solve_gauss_multi,
)

__all__ = ["BoxSet", "DoubletonSet", "SharpDoubletonSet", "TripletonSet",
           "C1DoubletonSet", "from_affine"]

_B_COND_LIMIT = 1e6


def _point_vec(values) -> IntervalVector:
    return IntervalVector([v if isinstance(v, Interval) else Interval(float(v)) for v in values])


def _mid_point_vec(v: IntervalVector) -> IntervalVector:
    return IntervalVector([Interval(e.mid()) for e in v])


def _mid_matrix(M: IntervalMatrix) -> np.ndarray:
    return M.mid()


def _solve_in_frame(Q: np.ndarray, resid: IntervalVector) -> IntervalVector:
    """Enclosure of Q^{-1} resid; Q a near-orthogonal point matrix."""
    return solve_gauss(IntervalMatrix.from_point(Q), resid)


def _frame_transition(Q: np.ndarray, AQ: IntervalMatrix, extras: IntervalVector):
    """One shared elimination for (Q^{-1} AQ, Q^{-1} extras)."""
    n = AQ.shape[1]
    Qi = IntervalMatrix.from_point(Q)
    sols = solve_gauss_multi(Qi, [AQ.column(j) for j in range(n)] + [extras])
    T = IntervalMatrix([[sols[j][i] for j in range(n)] for i in range(AQ.shape[0])])
    return T, sols[n]


def _advance_frames(A: IntervalMatrix, C: IntervalMatrix, r0: IntervalVector,
                    Q: np.ndarray, q: IntervalVector, shift: IntervalVector):
    """Shared Lohner rearrangement of the C*r0 and Q*q parts through A.

    shift is whatever centre residue must be absorbed into the error term.
    Returns (Cn, Qn, qn).
    """
    AC = A.matmul(C)
    Cn_pt = _mid_matrix(AC)
    Cn = IntervalMatrix.from_point(Cn_pt)
    c_resid = (AC - Cn).matvec(r0)

    AQ = A.matmul(IntervalMatrix.from_point(Q))
    extras = c_resid + shift
    try:
        Qn = near_orthogonalize(_mid_matrix(AQ))
        # transition Qn^{-1}*A*Q is near identity; applying it to q
        # directly avoids wrapping q through two rotations
        T, qe = _frame_transition(Qn, AQ, extras)
        qn = T.matvec(q) + qe
    except (RankDeficient, SingularPivot):
        # rigorous fallback: standard frame
        Qn = np.eye(A.shape[0])
        qn = AQ.matvec(q) + extras
    return Cn, Qn, qn


class BoxSet:
    """Plain interval-vector enclosure; the wrapping-prone baseline."""

    __slots__ = ("box",)

    def __init__(self, box: IntervalVector):
        self.box = box

    @property
    def dim(self) -> int:
        return self.box.dim

    def hull(self) -> IntervalVector:
        return self.box

    def center(self) -> IntervalVector:
        return _mid_point_vec(self.box)

    def affine_advance(self, A: IntervalMatrix, remainder: IntervalVector,
                       center_image: IntervalVector) -> "BoxSet":
        dev = self.box - self.center()
        return BoxSet(center_image + remainder + A.matvec(dev))

    def hull_after_affine(self, A: IntervalMatrix, remainder: IntervalVector,
                          center_image: IntervalVector) -> IntervalVector:
        dev = self.box - self.center()
        return center_image + remainder + A.matvec(dev)

    def linear_image(self, A: np.ndarray) -> "BoxSet":
        return BoxSet(IntervalMatrix.from_point(A).matvec(self.box))

    def debug_parts(self) -> dict:
        return {"kind": "box", "box": _vec_json(self.box)}


class DoubletonSet:
    """Set {x + C*r0 + Q*q} with x point-like and Q near-orthogonal."""

    __slots__ = ("x", "C", "r0", "Q", "q")

    def __init__(self, x: IntervalVector, C: IntervalMatrix, r0: IntervalVector,
                 Q: np.ndarray, q: IntervalVector):
        n = x.dim
        if C.shape[0] != n or C.shape[1] != r0.dim:
            raise DimensionMismatch("C/r0 shape")
        if Q.shape != (n, n) or q.dim != n:
            raise DimensionMismatch("Q/q shape")
        self.x = x
        self.C = C
        self.r0 = r0
        self.Q = Q
        self.q = q

    @property
    def dim(self) -> int:
        return self.x.dim

    def hull(self) -> IntervalVector:
        h = self.x + self.C.matvec(self.r0)
        return h + IntervalMatrix.from_point(self.Q).matvec(self.q)

    def center(self) -> IntervalVector:
        return self.x

    def affine_advance(self, A: IntervalMatrix, remainder: IntervalVector,
                       center_image: IntervalVector) -> "DoubletonSet":
        """Lohner rearrangement: propagate parts through A, re-orthogonalize Q."""
        v = center_image + remainder
        new_x = _mid_point_vec(v)
        shift = v - new_x
        Cn, Qn, qn = _advance_frames(A, self.C, self.r0, self.Q, self.q, shift)
        return DoubletonSet(new_x, Cn, self.r0, Qn, qn)

    def hull_after_affine(self, A: IntervalMatrix, remainder: IntervalVector,
                          center_image: IntervalVector) -> IntervalVector:
        """Hull of affine_advance's result without the QR bookkeeping."""
        h = center_image + remainder + A.matmul(self.C).matvec(self.r0)
        return h + A.matmul(IntervalMatrix.from_point(self.Q)).matvec(self.q)

    def linear_image(self, A: np.ndarray) -> "DoubletonSet":
        """Representation-level image under a point matrix."""
        Ai = IntervalMatrix.from_point(A)
        new_x = Ai.matvec(self.x)
        new_C = Ai.matmul(self.C)
        AQ = Ai.matmul(IntervalMatrix.from_point(self.Q))
        try:
            Qn = near_orthogonalize(_mid_matrix(AQ))
            qn = _solve_matrix_in_frame(Qn, AQ).matvec(self.q)
        except (RankDeficient, SingularPivot):
            Qn = np.eye(self.dim)
            qn = AQ.matvec(self.q)
        return DoubletonSet(new_x, new_C, self.r0, Qn, qn)

    def debug_parts(self) -> dict:
        return {
            "kind": "doubleton",
            "x": _vec_json(self.x),
            "C": _mat_json(self.C),
            "r0": _vec_json(self.r0),
            "Q": self.Q.tolist(),
            "q": _vec_json(self.q),
        }


class SharpDoubletonSet:
    """Doubleton whose centre is a compensated double-double point.

    Binary64 intervals quantize widths at one ulp of the value, so a
    plain doubleton injects ulp-level noise into q at every step just by
    re-rounding its centre.  Here the centre is a BallVector: its
    double-double part is carried exactly from step to step and only the
    u^2-level ball radii are folded into q.  The one-ulp cost of reading
    the centre as an interval is paid once per hull query, never
    accumulated.  Used for long point runs where the answer's diameter
    must undercut the interval representation floor.
    """

    __slots__ = ("xb", "C", "r0", "Q", "q")

    def __init__(self, xb: BallVector, C: IntervalMatrix, r0: IntervalVector,
                 Q: np.ndarray, q: IntervalVector):
        n = len(xb)
        if C.shape[0] != n or C.shape[1] != r0.dim:
            raise DimensionMismatch("C/r0 shape")
        if Q.shape != (n, n) or q.dim != n:
            raise DimensionMismatch("Q/q shape")
        self.xb = xb
        self.C = C
        self.r0 = r0
        self.Q = Q
        self.q = q

    @property
    def dim(self) -> int:
        return len(self.xb)

    @property
    def x(self) -> IntervalVector:
        return self.xb.to_interval_vector()

    def hull(self) -> IntervalVector:
        h = self.x + self.C.matvec(self.r0)
        return h + IntervalMatrix.from_point(self.Q).matvec(self.q)

    def center(self) -> BallVector:
        return self.xb

    def affine_advance(self, A: IntervalMatrix, remainder: IntervalVector,
                       center_image):
        """Lohner rearrangement with the centre kept in balls.

        An interval center_image (interval-time step, section projection)
        degrades the result to a plain DoubletonSet.
        """
        if isinstance(center_image, BallVector):
            new_xb = BallVector([Ball(b.hi, b.lo) for b in center_image])
            rads = IntervalVector([Interval(-b.rad, b.rad) for b in center_image])
            shift = rads + remainder
            Cn, Qn, qn = _advance_frames(A, self.C, self.r0, self.Q, self.q, shift)
            return SharpDoubletonSet(new_xb, Cn, self.r0, Qn, qn)
        v = center_image + remainder
        new_x = _mid_point_vec(v)
        shift = v - new_x
        Cn, Qn, qn = _advance_frames(A, self.C, self.r0, self.Q, self.q, shift)
        return DoubletonSet(new_x, Cn, self.r0, Qn, qn)

    def hull_after_affine(self, A: IntervalMatrix, remainder: IntervalVector,
                          center_image) -> IntervalVector:
        if isinstance(center_image, BallVector):
            center_image = center_image.to_interval_vector()
        h = center_image + remainder + A.matmul(self.C).matvec(self.r0)
        return h + A.matmul(IntervalMatrix.from_point(self.Q)).matvec(self.q)

    def debug_parts(self) -> dict:
        return {
            "kind": "sharp-doubleton",
            "x": _vec_json(self.x),
            "C": _mat_json(self.C),
            "r0": _vec_json(self.r0),
            "Q": self.Q.tolist(),
            "q": _vec_json(self.q),
        }


class TripletonSet:
    """Set {x + C*r0 + v : v in B*r intersected with Q*q}."""

    __slots__ = ("x", "C", "r0", "B", "r", "Q", "q")

    def __init__(self, x, C, r0, B, r, Q, q):
        self.x = x
        self.C = C
        self.r0 = r0
        self.B = B
        self.r = r
        self.Q = Q
        self.q = q

    @property
    def dim(self) -> int:
        return self.x.dim

    def _error_hull(self) -> IntervalVector:
        eb = IntervalMatrix.from_point(self.B).matvec(self.r)
        eq = IntervalMatrix.from_point(self.Q).matvec(self.q)
        return eb.intersect(eq)

    def hull(self) -> IntervalVector:
        return self.x + self.C.matvec(self.r0) + self._error_hull()

    def center(self) -> IntervalVector:
        return self.x

    def affine_advance(self, A: IntervalMatrix, remainder: IntervalVector,
                       center_image: IntervalVector) -> "TripletonSet":
        v = center_image + remainder
        new_x = _mid_point_vec(v)
        shift = v - new_x

        AC = A.matmul(self.C)
        Cn_pt = _mid_matrix(AC)
        Cn = IntervalMatrix.from_point(Cn_pt)
        extras = (AC - Cn).matvec(self.r0) + shift

        AQ = A.matmul(IntervalMatrix.from_point(self.Q))
        try:
            Qn = near_orthogonalize(_mid_matrix(AQ))
            T, qe = _frame_transition(Qn, AQ, extras)
            qn = T.matvec(self.q) + qe
        except (RankDeficient, SingularPivot):
            Qn = np.eye(self.dim)
            qn = AQ.matvec(self.q) + extras

        AB = A.matmul(IntervalMatrix.from_point(self.B))
        Bn = _mid_matrix(AB)
        if not np.all(np.isfinite(Bn)) or np.linalg.cond(Bn) > _B_COND_LIMIT:
            Bn = np.eye(self.dim)
        try:
            Tb, re_ = _frame_transition(Bn, AB, extras)
            rn = Tb.matvec(self.r) + re_
        except SingularPivot:
            Bn = np.eye(self.dim)
            rn = AB.matvec(self.r) + extras
        return TripletonSet(new_x, Cn, self.r0, Bn, rn, Qn, qn)

    def hull_after_affine(self, A: IntervalMatrix, remainder: IntervalVector,
                          center_image: IntervalVector) -> IntervalVector:
        h = center_image + remainder + A.matmul(self.C).matvec(self.r0)
        return h + A.matvec(self._error_hull())

    def linear_image(self, A: np.ndarray) -> "TripletonSet":
        Ai = IntervalMatrix.from_point(A)
        new_x = Ai.matvec(self.x)
        new_C = Ai.matmul(self.C)
        AQ = Ai.matmul(IntervalMatrix.from_point(self.Q))
        AB = Ai.matmul(IntervalMatrix.from_point(self.B))
        try:
            Qn = near_orthogonalize(_mid_matrix(AQ))
            qn = _solve_matrix_in_frame(Qn, AQ).matvec(self.q)
        except (RankDeficient, SingularPivot):
            Qn = np.eye(self.dim)
            qn = AQ.matvec(self.q)
        Bn = _mid_matrix(AB)
        if not np.all(np.isfinite(Bn)) or np.linalg.cond(Bn) > _B_COND_LIMIT:
            Bn = np.eye(self.dim)
        try:
            rn = _solve_matrix_in_frame(Bn, AB).matvec(self.r)
        except SingularPivot:
            Bn = np.eye(self.dim)
            rn = AB.matvec(self.r)
        return TripletonSet(new_x, new_C, self.r0, Bn, rn, Qn, qn)

    def debug_parts(self) -> dict:
        return {
            "kind": "tripleton",
            "x": _vec_json(self.x),
            "C": _mat_json(self.C),
            "r0": _vec_json(self.r0),
            "B": self.B.tolist(),
            "r": _vec_json(self.r),
            "Q": self.Q.tolist(),
            "q": _vec_json(self.q),
        }


class C1DoubletonSet:
    """Doubleton for the trajectory plus a doubleton-decomposed enclosure
    of the derivative with respect to initial conditions.

    V is enclosed as Vc + Qv*Vq with Vc a point matrix; Qv is kept
    near-orthogonal the same way as the base set's error frame.
    """

    __slots__ = ("base", "Vc", "Qv", "Vq")

    def __init__(self, base: DoubletonSet, Vc: np.ndarray, Qv: np.ndarray,
                 Vq: IntervalMatrix):
        self.base = base
        self.Vc = Vc
        self.Qv = Qv
        self.Vq = Vq

    @staticmethod
    def from_doubleton(base: DoubletonSet, V0: IntervalMatrix | None = None) -> "C1DoubletonSet":
        n = base.dim
        if V0 is None:
            V0 = IntervalMatrix.identity(n)
        Vc = V0.mid()
        Vq = V0 - IntervalMatrix.from_point(Vc)
        return C1DoubletonSet(base, Vc, np.eye(n), Vq)

    @property
    def dim(self) -> int:
        return self.base.dim

    def hull(self) -> IntervalVector:
        return self.base.hull()

    def center(self) -> IntervalVector:
        return self.base.center()

    def hull_after_affine(self, A: IntervalMatrix, remainder: IntervalVector,
                          center_image: IntervalVector) -> IntervalVector:
        return self.base.hull_after_affine(A, remainder, center_image)

    def v_enclosure(self) -> IntervalMatrix:
        return IntervalMatrix.from_point(self.Vc) + IntervalMatrix.from_point(self.Qv).matmul(self.Vq)

    def affine_advance(self, A: IntervalMatrix, remainder: IntervalVector,
                       center_image: IntervalVector) -> "C1DoubletonSet":
        new_base = self.base.affine_advance(A, remainder, center_image)
        AVc = A.matmul(IntervalMatrix.from_point(self.Vc))
        Vc_new = AVc.mid()
        AQv = A.matmul(IntervalMatrix.from_point(self.Qv))
        c_resid = AVc - IntervalMatrix.from_point(Vc_new)
        try:
            Qv_new = near_orthogonalize(AQv.mid())
            n = self.dim
            Qi = IntervalMatrix.from_point(Qv_new)
            sols = solve_gauss_multi(
                Qi,
                [AQv.column(j) for j in range(n)] + [c_resid.column(j) for j in range(n)],
            )
            T = IntervalMatrix([[sols[j][i] for j in range(n)] for i in range(n)])
            R = IntervalMatrix([[sols[n + j][i] for j in range(n)] for i in range(n)])
            Vq_new = T.matmul(self.Vq) + R
        except (RankDeficient, SingularPivot):
            Qv_new = np.eye(self.dim)
            Vq_new = AQv.matmul(self.Vq) + c_resid
        return C1DoubletonSet(new_base, Vc_new, Qv_new, Vq_new)

    def debug_parts(self) -> dict:
        d = self.base.debug_parts()
        d["kind"] = "c1doubleton"
        d["Vc"] = self.Vc.tolist()
        d["Qv"] = self.Qv.tolist()
        d["Vq"] = _mat_json(self.Vq)
        return d


def _solve_matrix_in_frame(Q: np.ndarray, M: IntervalMatrix) -> IntervalMatrix:
    Qi = IntervalMatrix.from_point(Q)
    cols = solve_gauss_multi(Qi, [M.column(j) for j in range(M.shape[1])])
    return IntervalMatrix(
        [[cols[j][i] for j in range(M.shape[1])] for i in range(M.shape[0])]
    )


def from_affine(x0, C: IntervalMatrix, r0: IntervalVector) -> DoubletonSet:
    """Doubleton x0 + C*r0 with fresh error frame (Q=I, q=0)."""
    x = _point_vec(x0)
    n = x.dim
    if C.shape != (n, r0.dim):
        raise DimensionMismatch(f"C shape {C.shape} vs x dim {n}, r0 dim {r0.dim}")
    return DoubletonSet(x, C, r0, np.eye(n), IntervalVector.zeros(n))


def _vec_json(v: IntervalVector):
    return [[e.lo, e.hi] for e in v]


def _mat_json(M: IntervalMatrix):
    return [[[e.lo, e.hi] for e in row] for row in M.rows]


def debug_json(s) -> str:
    return json.dumps(s.debug_parts(), sort_keys=True)
