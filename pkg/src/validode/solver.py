"""Validated Taylor-method integration with Lohner set propagation.

One step works as follows.  A rough enclosure Z of the flow over [0,h]
is produced by Picard iteration with candidate inflation.  The Taylor
polynomial of the flow is evaluated at the set's centre; the Jacobian of
the step map is the variational Taylor polynomial over the current hull
plus a Lagrange remainder evaluated on Z (with a rough enclosure of the
variational solution obtained from a logarithmic-norm bound).  The
structured set is then advanced through affine_advance, which performs
the Lohner QR rearrangement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .compensated import BallVector
from .errors import MaxStepsExceeded, StepTooSmall
from .intervals import Interval
from .linalg import IntervalMatrix, IntervalVector
from .sets import C1DoubletonSet
from .vectorfield import TaylorJet, VectorField

__all__ = ["SolverConfig", "FlowEnclosure", "Solver", "integrate_to", "integrate_c1"]


@dataclass
class SolverConfig:
    order: int = 20
    tolerance: float = 1e-10
    h_min: float = 1e-8
    h_max: float = 0.5
    max_steps: int = 100000

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("order must be >= 2")
        if not (0.0 < self.h_min < self.h_max):
            raise ValueError("need 0 < h_min < h_max")


@dataclass
class FlowEnclosure:
    Z: IntervalVector  # rough enclosure valid on [0, h]
    h: float
    jet: TaylorJet  # Taylor jet at the step's start (centre part)


class PreparedStep:
    """All step data needed to advance a set by any h' in [0, h]."""

    __slots__ = (
        "t", "h", "Z", "center_jet", "var_poly", "var_rem",
        "state_rem", "order",
    )

    def __init__(self, t, h, Z, center_jet, var_poly, var_rem, state_rem, order):
        self.t = t
        self.h = h
        self.Z = Z
        self.center_jet = center_jet
        self.var_poly = var_poly  # list of IntervalMatrix, orders 0..p
        self.var_rem = var_rem  # IntervalMatrix, order p+1 coefficient on Z
        self.state_rem = state_rem  # IntervalVector, order p+1 coefficient on Z
        self.order = order

    def step_jacobian(self, h: Interval) -> IntervalMatrix:
        """A(h) = sum h^k V_[k], plus h^{p+1} V_[p+1](Z) when the full flow
        derivative is required (C1 propagation)."""
        if self.var_rem is not None:
            acc = self.var_rem.scale(h)
        else:
            acc = self.var_poly[self.order].scale(h)
        start = self.order if self.var_rem is not None else self.order - 1
        for k in range(start, 0, -1):
            acc = (self.var_poly[k] + acc).scale(h)
        return self.var_poly[0] + acc

    def remainder(self, h: Interval) -> IntervalVector:
        hp = h.pow_int(self.order + 1)
        return self.state_rem.scale(hp)

    def advance(self, set_, h) -> tuple:
        """Advance the set by a (possibly interval) step h <= validated h."""
        h = h if isinstance(h, Interval) else Interval(float(h))
        A = self.step_jacobian(h)
        rem = self.remainder(h)
        center = self.center_jet.poly_eval(h)
        return set_.affine_advance(A, rem, center)

    def advance_hull(self, set_, h) -> IntervalVector:
        """Hull of the advanced set without building its representation.

        Much cheaper than advance() (no QR, no linear solves); used for
        section-sign monitoring where only the hull matters.
        """
        h = h if isinstance(h, Interval) else Interval(float(h))
        A = self.step_jacobian(h)
        rem = self.remainder(h)
        center = self.center_jet.poly_eval(h)
        return set_.hull_after_affine(A, rem, center)


class Solver:
    """One-step validated solver bound to a vector field and a config."""

    def __init__(self, f: VectorField, cfg: SolverConfig | None = None):
        self.f = f
        self.cfg = cfg or SolverConfig()

    # -- rough enclosures ----------------------------------------------------

    def rough_enclosure(self, t, hullbox: IntervalVector, h: float):
        """First-order (Picard) enclosure of the flow of hullbox over [0,h].

        Returns (Z, h_accepted); h is halved on validation failure, down to
        h_min, below which StepTooSmall is raised.
        """
        cfg = self.cfg
        t = t if isinstance(t, Interval) else Interval(float(t))
        while True:
            tspan = t + Interval(0.0, h)
            span = Interval(0.0, h)
            # first-order predictor, inflated; validated by one Picard sweep
            Zi = _inflate(hullbox + self.f.eval(tspan, hullbox).scale(span), 0.5)
            ok = False
            for _ in range(8):
                cand = hullbox + self.f.eval(tspan, Zi).scale(span)
                if not all(math.isfinite(c.lo) and math.isfinite(c.hi) for c in cand):
                    break
                if Zi.contains(cand):
                    ok = True
                    break
                Zi = _inflate(cand, 0.5)
            if ok:
                # containment proved; extra Picard sweeps only tighten
                for _ in range(3):
                    cand = hullbox + self.f.eval(tspan, cand).scale(span)
                return cand, h
            h *= 0.5
            if h < cfg.h_min:
                raise StepTooSmall(f"no validated enclosure above h_min={cfg.h_min}")

    def _variational_rough(self, t, Z: IntervalVector, h: float) -> IntervalMatrix:
        """Entrywise enclosure of V(s), s in [0,h], V(0)=I, via log-norm bound."""
        tspan = (t if isinstance(t, Interval) else Interval(float(t))) + Interval(0.0, h)
        J = self.f.jacobian(tspan, Z)
        n = J.shape[0]
        # logarithmic max-norm of J over the enclosure
        mu = max(
            J[i, i].hi + sum(J[i, j].mag() for j in range(n) if j != i)
            for i in range(n)
        )
        norm = max(sum(J[i, j].mag() for j in range(n)) for i in range(n))
        growth = math.exp(max(mu, 0.0) * h) * (1.0 + 1e-12)
        r = h * norm * growth
        off = Interval(-r, r)
        return IntervalMatrix(
            [[Interval(1.0) + off if i == j else off for j in range(n)] for i in range(n)]
        )

    # -- stepping ----------------------------------------------------------------

    def propose_step(self, center_jet: TaylorJet) -> float:
        cfg = self.cfg
        p = cfg.order
        scale = center_jet[p].norm_max()
        if scale <= 0.0 or not math.isfinite(scale):
            return cfg.h_max
        h = (cfg.tolerance / scale) ** (1.0 / p)
        return min(max(h, cfg.h_min), cfg.h_max)

    def prepare(self, set_, t, h_goal: float | None = None) -> PreparedStep:
        """Compute jets, enclosures and remainders for one step from set_."""
        cfg = self.cfg
        p = cfg.order
        center = set_.center()
        if isinstance(center, BallVector):
            center_jet = self.f.ode_taylor_sharp(center, p)
        else:
            center_jet = self.f.ode_taylor(t, center, p)
        h = self.propose_step(center_jet)
        if h_goal is not None:
            h = min(h, h_goal)
        h = max(h, cfg.h_min)
        hull = set_.hull()
        ti = t if isinstance(t, Interval) else Interval(float(t))
        need_c1 = isinstance(set_, C1DoubletonSet)
        while True:
            Z, h = self.rough_enclosure(t, hull, h)
            tspan = ti + Interval(0.0, h)
            if need_c1:
                z_jet, z_var = self.f.variational_taylor(
                    tspan, Z, self._variational_rough(t, Z, h), p + 1
                )
                state_rem = z_jet[p + 1]
                var_rem = z_var[p + 1]
            else:
                state_rem = self.f.ode_taylor(tspan, Z, p + 1)[p + 1]
                var_rem = None
            realized = state_rem.norm_max() * h ** (p + 1)
            if realized <= cfg.tolerance or h * 0.5 < cfg.h_min:
                break
            # Lagrange term over Z is too wide; shorter steps shrink both h
            # and Z, so retry rather than accept the loss
            h *= 0.5
        V0 = IntervalMatrix.identity(self.f.dim)
        _, var_poly = self.f.variational_taylor(t, hull, V0, p)
        return PreparedStep(t, h, Z, center_jet, var_poly, var_rem, state_rem, p)

    def step(self, set_, t, h_goal: float | None = None):
        """One full validated step; returns (new_set, new_t, prepared)."""
        prep = self.prepare(set_, t, h_goal)
        new_set = prep.advance(set_, prep.h)
        t = t if isinstance(t, Interval) else Interval(float(t))
        new_t = t + prep.h
        return new_set, new_t, prep


def _inflate(v: IntervalVector, rel: float) -> IntervalVector:
    out = []
    for e in v:
        c = e.mid()
        r = 0.5 * e.diam()
        pad = rel * r + 1e-15 * max(1.0, abs(c))
        out.append(Interval(c).inflate(r + pad))
    return IntervalVector(out)


def integrate_to(f: VectorField, set_, T, cfg: SolverConfig | None = None,
                 t0=0.0):
    """Propagate set_ from t0 to exactly T; returns the set at time T.

    T may be an Interval (e.g. an enclosure of 2*pi); the final partial
    step is then taken over that interval of end times.
    """
    solver = Solver(f, cfg)
    cfg = solver.cfg
    t = t0 if isinstance(t0, Interval) else Interval(float(t0))
    Ti = T if isinstance(T, Interval) else Interval(float(T))
    if not Ti.lo > t.hi:
        raise ValueError("T must exceed the current time")
    for _ in range(cfg.max_steps):
        rest = Ti - t
        prep = solver.prepare(set_, t, h_goal=rest.hi)
        if prep.h >= rest.hi:
            # final partial step lands exactly on T
            set_ = prep.advance(set_, rest)
            return set_
        set_ = prep.advance(set_, prep.h)
        t = t + prep.h
    raise MaxStepsExceeded(f"did not reach T={Ti.hi} in {cfg.max_steps} steps")


def integrate_c1(f: VectorField, c1set: C1DoubletonSet, T,
                 cfg: SolverConfig | None = None, t0=0.0) -> C1DoubletonSet:
    """C1 variant of integrate_to; the set carries its derivative enclosure."""
    return integrate_to(f, c1set, T, cfg, t0)
