"""Rigorous Poincare map evaluation.

The map is computed by integrating until the section function S changes
sign strictly in an admissible direction, after the trajectory has first
left a neighbourhood of the section (an escape threshold keeps a start
lying on the section from retriggering).  The crossing time is bracketed
by one validated step and refined by an interval Newton iteration on
g(tau) = S(phi(tau, .)); the image is the set advanced by the resulting
time interval, so it contains every trajectory's true crossing point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    NoCrossing,
    StepTooSmall,
    TransversalityFailure,
)
from .intervals import Interval
from .linalg import IntervalMatrix, IntervalVector, near_orthogonalize
from .sets import C1DoubletonSet, DoubletonSet
from .solver import Solver, SolverConfig
from .vectorfield import VectorField

__all__ = ["Section", "PoincareResult", "poincare_map", "poincare_derivative"]


class Section:
    """Hyperplane section S(x)=0 with a crossing direction.

    Coordinate sections fix one coordinate (S(x) = x_i - c); affine
    sections use S(x) = <n, x - offset>.  The chart of a coordinate
    section drops coordinate i; an affine section gets an orthonormal
    basis of the normal's complement, fixed at construction.
    """

    def __init__(self, kind: str, *, index: int | None = None, value: float = 0.0,
                 normal=None, offset=None, direction: str = "both"):
        if direction not in ("positive", "negative", "both"):
            raise ValueError(f"bad direction {direction!r}")
        if kind not in ("coordinate", "affine"):
            raise ValueError(f"bad section kind {kind!r}")
        self.kind = kind
        self.direction = direction
        if kind == "coordinate":
            if index is None:
                raise ValueError("coordinate section needs index")
            self.index = index
            self.value = float(value)
            self.normal = None
            self.offset = None
            self._basis = None
        else:
            n = np.asarray(normal, dtype=float)
            if not np.linalg.norm(n) > 0.0:
                raise ValueError("affine section needs a nonzero normal")
            self.index = None
            self.value = 0.0
            self.normal = n
            self.offset = np.asarray(offset, dtype=float) if offset is not None else np.zeros(n.shape)
            # complement basis: QR of [n | I] minus the normal's own column
            q, _ = np.linalg.qr(np.column_stack([n] + [e for e in np.eye(len(n))]))
            self._basis = q[:, 1:len(n)]

    @staticmethod
    def coordinate(index: int, value: float = 0.0, direction: str = "both") -> "Section":
        return Section("coordinate", index=index, value=value, direction=direction)

    @staticmethod
    def affine(normal, offset=None, direction: str = "both") -> "Section":
        return Section("affine", normal=normal, offset=offset, direction=direction)

    def s_value(self, x: IntervalVector) -> Interval:
        if self.kind == "coordinate":
            return x[self.index] - Interval(self.value)
        acc = Interval(0.0)
        for i, ni in enumerate(self.normal):
            acc = acc + (x[i] - Interval(self.offset[i])) * Interval(float(ni))
        return acc

    def gradient_dot(self, v: IntervalVector) -> Interval:
        """<grad S, v>; grad S is a constant point vector."""
        if self.kind == "coordinate":
            return v[self.index]
        acc = Interval(0.0)
        for i, ni in enumerate(self.normal):
            acc = acc + v[i] * Interval(float(ni))
        return acc

    def grad_array(self, n: int) -> np.ndarray:
        if self.kind == "coordinate":
            g = np.zeros(n)
            g[self.index] = 1.0
            return g
        return self.normal.copy()

    def tangent_basis(self, n: int) -> np.ndarray:
        """n x (n-1) point matrix whose columns span the section."""
        if self.kind == "coordinate":
            cols = [j for j in range(n) if j != self.index]
            E = np.zeros((n, n - 1))
            for k, j in enumerate(cols):
                E[j, k] = 1.0
        else:
            E = self._basis
        return E

    def clamp(self, x: IntervalVector) -> IntervalVector:
        """Intersect the normal coordinate with the exact section value.

        Valid for points known to lie on the section (crossing points).
        Only coordinate sections support exact clamping.
        """
        if self.kind != "coordinate":
            return x
        vals = list(x)
        vals[self.index] = vals[self.index].intersect(Interval(self.value))
        return IntervalVector(vals)

    def project_hull(self, x: IntervalVector) -> IntervalVector:
        """Chart coordinates of an on-section enclosure."""
        n = x.dim
        if self.kind == "coordinate":
            return IntervalVector([x[j] for j in range(n) if j != self.index])
        E = self._basis
        shifted = [x[i] - Interval(self.offset[i]) for i in range(n)]
        out = []
        for k in range(E.shape[1]):
            acc = Interval(0.0)
            for i in range(n):
                acc = acc + shifted[i] * Interval(float(E[i, k]))
            out.append(acc)
        return IntervalVector(out)

    def project_set(self, s: DoubletonSet) -> DoubletonSet:
        """Chart-coordinate doubleton of an on-section set.

        The x and C parts project exactly; the error frame is folded into
        a fresh q, which only costs wrapping of the (small) error term.
        """
        n = s.dim
        E = self.tangent_basis(n)
        Et = IntervalMatrix.from_point(E.T)
        sx = s.x if self.kind == "coordinate" else s.x - IntervalVector(
            [Interval(float(o)) for o in self.offset])
        new_x = Et.matvec(sx)
        new_C = Et.matmul(s.C)
        err = Et.matmul(IntervalMatrix.from_point(s.Q)).matvec(s.q)
        xm = IntervalVector([Interval(e.mid()) for e in new_x])
        err = err + (new_x - xm)
        Cm = IntervalMatrix.from_point(new_C.mid())
        err = err + (new_C - Cm).matvec(s.r0)
        return DoubletonSet(xm, Cm, s.r0, np.eye(n - 1), err)


@dataclass
class PoincareResult:
    image: DoubletonSet  # tightest on-section enclosure
    return_time: Interval
    DP: Optional[IntervalMatrix] = None
    crossing_signs: tuple = ()
    flow_image: Optional[DoubletonSet] = None  # interval-time enclosure


def _strict_sign(iv: Interval) -> int:
    if iv.lo > 0.0:
        return 1
    if iv.hi < 0.0:
        return -1
    return 0


def _admissible(section: Section, from_side: int) -> bool:
    # positive direction means S goes from negative to positive
    if section.direction == "both":
        return True
    if section.direction == "positive":
        return from_side < 0
    return from_side > 0


class _Crossing:
    """Internal driver shared by the C0 and C1 entry points."""

    def __init__(self, f: VectorField, section: Section, cfg: SolverConfig | None,
                 t_max: float):
        self.f = f
        self.section = section
        self.solver = Solver(f, cfg)
        self.t_max = t_max

    def _transversal(self, tspan: Interval, Z: IntervalVector, from_side: int) -> bool:
        gp = self.section.gradient_dot(self.f.eval(tspan, Z))
        sgn = _strict_sign(gp)
        if sgn == 0:
            return False
        # crossing from negative side requires S increasing, and conversely
        return sgn == -from_side

    def run(self, set_, n_iter: int):
        section = self.section
        s0 = section.s_value(set_.hull())
        threshold = 10.0 * s0.diam() + 1e-6
        t = Interval(0.0)
        armed = False
        side = 0
        crossings = 0
        signs = []
        stall = 0
        while t.hi < self.t_max:
            prep = self.solver.prepare(set_, t)
            h = prep.h
            s_new = section.s_value(prep.advance_hull(set_, h))
            sgn = _strict_sign(s_new)
            if not armed:
                set_, t = prep.advance(set_, h), t + h
                if sgn != 0 and s_new.mig() >= threshold:
                    armed, side = True, sgn
                continue
            if sgn == side:
                set_, t = prep.advance(set_, h), t + h
                stall = 0
                continue
            # the section is reached inside (t, t+h]; a strict opposite
            # sign gives a bracket, a straddle means the step landed on
            # the crossing and we back off to just before it
            if sgn == -side:
                tspan = t + Interval(0.0, h)
                if not self._transversal(tspan, prep.Z, side):
                    h2 = self._shrink_transversal(set_, t, side)
                    if h2 is None:
                        raise TransversalityFailure(
                            "flow not transversal to the section at the crossing")
                    prep, h = h2
                    s_new = section.s_value(prep.advance_hull(set_, h))
                    if _strict_sign(s_new) != -side:
                        set_, t = prep.advance(set_, h), t + h
                        continue
                if _admissible(section, side):
                    crossings += 1
                    signs.append(-side)
                    if crossings == n_iter:
                        return self._resolve(set_, t, prep, h, side, signs)
                set_, t = prep.advance(set_, h), t + h
                armed, side = False, 0
                continue
            # straddle: find a shorter sub-step that stays strictly on the
            # current side, advancing as close to the crossing as possible
            h_back = self._largest_same_side(set_, prep, h, side)
            if h_back is None:
                # cannot keep a strict sign anywhere in (0,h]; counting
                # crossings would no longer be reliable
                raise StepTooSmall("set too wide to resolve the section crossing")
            set_ = prep.advance(set_, h_back)
            t = t + h_back
            stall += 1
            if stall > 60:
                raise StepTooSmall("no strict sign change across the section")
        raise NoCrossing(f"no section crossing before t={self.t_max}")

    def _largest_same_side(self, set_, prep, h: float, side: int):
        section = self.section
        lo, hi = 0.0, h
        best = None
        for _ in range(24):
            mid = 0.5 * (lo + hi)
            if mid <= 0.0:
                break
            s = section.s_value(prep.advance_hull(set_, mid))
            if _strict_sign(s) == side:
                best = mid
                lo = mid
            else:
                hi = mid
        return best

    def _shrink_transversal(self, set_, t, side):
        """Retry the step with smaller h until f is transversal on Z."""
        h_goal = None
        for _ in range(20):
            prep = self.solver.prepare(set_, t, h_goal=h_goal)
            tspan = t + Interval(0.0, prep.h)
            if self._transversal(tspan, prep.Z, side):
                return prep, prep.h
            h_goal = prep.h * 0.5
            if h_goal < self.solver.cfg.h_min:
                return None
        return None

    def _resolve(self, set_, t, prep, h: float, side: int, signs):
        """Newton refinement of the crossing time inside [0, h]."""
        section = self.section
        delta = Interval(0.0, h)
        for _ in range(30):
            x_delta = prep.advance_hull(set_, delta)
            gp = section.gradient_dot(self.f.eval(t + delta, x_delta))
            if _strict_sign(gp) == 0:
                break
            tau0 = delta.mid()
            g0 = section.s_value(prep.advance_hull(set_, tau0))
            new_delta = (Interval(tau0) - g0 / gp).intersect(delta)
            if new_delta.diam() > 0.99 * delta.diam():
                delta = new_delta
                break
            delta = new_delta
        image = prep.advance(set_, delta)
        projected = self._project_to_section(set_, t, prep, delta, image)
        return image, projected, t + delta, signs

    def _project_to_section(self, set_, t, prep, delta: Interval, image):
        """Affine projection of the fixed-time set onto the section.

        Each trajectory point satisfies P(u) = w(u) - f(xi_u) S(w(u)) / gp
        with w(u) the state at the midpoint time and xi_u on the segment
        swept during [0, diam(delta)].  Applying the interval affine map
        M = I - f grad(S)^T / gp to the representation cancels the
        first-order widening caused by the spread of crossing times.
        """
        section = self.section
        useg = image.hull()
        fs = self.f.eval(t + delta, useg)
        gp = section.gradient_dot(fs)
        if _strict_sign(gp) == 0:
            return None
        base = set_.base if isinstance(set_, C1DoubletonSet) else set_
        fixed = prep.advance(base, delta.mid())
        n = base.dim
        grad = section.grad_array(n)
        one, zero = Interval(1.0), Interval(0.0)
        M = IntervalMatrix(
            [[(one if i == j else zero) - fs[i] * Interval(float(grad[j])) / gp
              for j in range(n)] for i in range(n)]
        )
        if section.kind == "coordinate":
            s_off = Interval(section.value)
        else:
            s_off = Interval(0.0)
            for i, ni in enumerate(section.normal):
                s_off = s_off + Interval(float(ni)) * Interval(float(section.offset[i]))
        b = IntervalVector([fs[i] * s_off / gp for i in range(n)])
        center_img = M.matvec(fixed.x) + b
        return fixed.affine_advance(M, IntervalVector.zeros(n), center_img)


def poincare_map(f: VectorField, section: Section, set_, n_iter: int = 1,
                 cfg: SolverConfig | None = None, t_max: float = 200.0) -> PoincareResult:
    """Enclosure of the n_iter-th return of set_ to the section."""
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    image, projected, rt, signs = _Crossing(f, section, cfg, t_max).run(set_, n_iter)
    base = image.base if isinstance(image, C1DoubletonSet) else image
    return PoincareResult(image=projected if projected is not None else base,
                          return_time=rt, crossing_signs=tuple(signs),
                          flow_image=base)


def poincare_derivative(f: VectorField, section: Section, c1set: C1DoubletonSet,
                        n_iter: int = 1, cfg: SolverConfig | None = None,
                        t_max: float = 200.0) -> PoincareResult:
    """Return map image plus its derivative in the section chart.

    DP encloses the derivative of the chart-to-chart return map: the flow
    derivative V is corrected for the state-dependent return time,
    DP = E^T (I - f(y) grad(S)^T / <grad(S), f(y)>) V(tau) E,
    with E the section's tangent basis and y the crossing enclosure.
    """
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    image, projected, rt, signs = _Crossing(f, section, cfg, t_max).run(c1set, n_iter)
    if not isinstance(image, C1DoubletonSet):
        raise TypeError("poincare_derivative needs a C1DoubletonSet")
    n = image.dim
    y = image.hull()
    if projected is not None:
        y = y.intersect(projected.hull())
    y = section.clamp(y)
    fy = f.eval(rt, y)
    gp = section.gradient_dot(fy)
    if _strict_sign(gp) == 0:
        raise TransversalityFailure("0 in <grad S, f> at the crossing")
    grad = section.grad_array(n)
    # correction matrix I - f(y) grad^T / gp
    corr = IntervalMatrix(
        [[(Interval(1.0) if i == j else Interval(0.0))
          - fy[i] * Interval(float(grad[j])) / gp
          for j in range(n)] for i in range(n)]
    )
    V = image.v_enclosure()
    E = section.tangent_basis(n)
    full = corr.matmul(V)
    chart = IntervalMatrix.from_point(E.T).matmul(full).matmul(IntervalMatrix.from_point(E))
    return PoincareResult(image=projected if projected is not None else image.base,
                          return_time=rt, DP=chart, crossing_signs=tuple(signs),
                          flow_image=image.base)
