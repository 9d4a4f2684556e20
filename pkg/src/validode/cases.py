"""Seven ready-made verification case studies.

Each case wires a vector field, structured initial sets, the validated
solver, and the proof rules from verify into one rigorous claim, and
returns a certificate plus enclosure rectangles for reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidodeError
from .intervals import Interval, PI, TWO_PI, from_decimal
from .linalg import IntervalMatrix, IntervalVector, posdef_sym_2x2
from .poincare import Section, poincare_derivative, poincare_map
from .compensated import Ball, BallVector
from .sets import BoxSet, C1DoubletonSet, DoubletonSet, SharpDoubletonSet, from_affine
from .solver import SolverConfig, integrate_c1, integrate_to
from .vectorfield import parse
from .verify import (
    Certificate,
    covering_check,
    cone_condition,
    disjoint_enclosures,
    field_hash,
    interval_newton,
    saddle_verdict,
    sign_change_existence,
)

__all__ = ["CaseOutcome", "CASES", "run_case"]

ROSSLER_SRC = "par:a,b;var:x,y,z;fun:-(y+z),x+b*y,b+z*(x-a);"
# the parameter c rides along as a constant fourth state so structured
# sets keep the correlation between c and the trajectory instead of
# re-wrapping the parameter interval at every step
MICHELSON_SRC = "var:x,y,z,c;fun:y,z,c^2-y-x^2/2,0;"
# the odd substitution x -> -x maps the damped-cubic forced oscillator
# with forcing -0.4464 cos(t) onto the same equation with +0.4464 cos(t);
# the latter places the boundary-value zero on the negative half-axis
NAKAO_SRC = "time:t;var:x,y;fun:y,-0.1*x-0.1*x^3+0.4464*cos(t);"
LORENZ_SRC = "par:s,r,b;var:x,y,z;fun:s*(y-x),x*(r-z)-y,x*y-b*z;"
PENDULUM_SRC = "var:x,y;fun:y,-sin(x);"

# Rossler constants
A_ROSSLER = from_decimal("5.7")
B_ROSSLER = from_decimal("0.2")
W_Y = Interval(from_decimal("-10.7").lo, from_decimal("-2.7").hi)
W_Z = Interval(from_decimal("0.028").lo, from_decimal("0.034").hi)
# inner bounds: image strictly below/above these is strictly inside W
W_Y_IN = Interval(from_decimal("-10.7").hi, from_decimal("-2.7").lo)
W_Z_IN = Interval(from_decimal("0.028").hi, from_decimal("0.034").lo)

U_PERIODIC = {
    1: ("-8.3809417428298762873487630431", "0.029590060630667102951494027735"),
    2: ("-5.4240738226652043515673025463", "0.031081210807876445187367377796"),
    3: ("-6.2331586285379749515076479411", "0.030640111658160569478006226700"),
}

L_M = from_decimal("-8.4")
R_M = from_decimal("-7.6")
L_N = from_decimal("-5.7")
R_N = from_decimal("-4.6")
CONE_LAMBDA = 1.0
CONE_MU = -100.0

MICHELSON_C = Interval(1.0 - 1.0 / 128.0, 1.0 + 1.0 / 128.0)

NAKAO_X0 = from_decimal("-0.5072")
NAKAO_RADIUS = 1e-4

LORENZ_SIGMA = from_decimal("10")
LORENZ_RHO = from_decimal("28")
LORENZ_BETA = from_decimal("8") / from_decimal("3")
LORENZ_ALPHA = PI * 7.0 / 18.0
LORENZ_S = Interval(from_decimal("0.625").lo, from_decimal("0.675").hi)
LORENZ_BOUND = 3.6


@dataclass
class CaseOutcome:
    certificate: Certificate
    rows: list = field(default_factory=list)
    frame: tuple | None = None
    axis_labels: tuple = ("", "")


def _cfg(order, tolerance, default_order, default_tol, **kw) -> SolverConfig:
    return SolverConfig(order=order or default_order,
                        tolerance=tolerance or default_tol, **kw)


def _chart3_embed(index: int):
    """3xn point frame whose columns span the complement of coordinate index."""
    cols = [j for j in range(3) if j != index]
    E = np.zeros((3, 2))
    for k, j in enumerate(cols):
        E[j, k] = 1.0
    return IntervalMatrix.from_point(E)


def _section_piece(y_iv: Interval, z_iv: Interval, sec_index: int = 0,
                   sec_value: float = 0.0) -> DoubletonSet:
    """Doubleton covering {sec_value} x y_iv x z_iv on a coordinate section."""
    yc, zc = y_iv.mid(), z_iv.mid()
    point = [0.0, 0.0, 0.0]
    point[sec_index] = sec_value
    chart = [j for j in range(3) if j != sec_index]
    point[chart[0]] = yc
    point[chart[1]] = zc
    r0 = IntervalVector([y_iv - Interval(yc), z_iv - Interval(zc)])
    return from_affine(point, _chart3_embed(sec_index), r0)


def _apply_affine(s, M: IntervalMatrix, b: IntervalVector | None = None):
    """Image of a structured set under an interval affine map u -> M u + b."""
    center = M.matvec(s.center())
    if b is not None:
        center = center + b
    return s.affine_advance(M, IntervalVector.zeros(M.shape[0]), center)


def _rossler_field():
    f = parse(ROSSLER_SRC)
    # decimal strings keep the constants at u^2 accuracy in sharp centre jets
    f.set_param("a", "5.7")
    f.set_param("b", "0.2")
    return f


def _sharp_section_point(y_iv: Interval, z_iv: Interval) -> SharpDoubletonSet:
    """Near-point doubleton on the section with a compensated centre.

    The input intervals are at most a few ulps wide (decimal-literal
    enclosures); their deviation from the midpoint rides in r0 while the
    centre itself propagates at sub-ulp accuracy.
    """
    ym, zm = y_iv.mid(), z_iv.mid()
    xb = BallVector([Ball(0.0), Ball(ym), Ball(zm)])
    r0 = IntervalVector([y_iv - Interval(ym), z_iv - Interval(zm)])
    return SharpDoubletonSet(xb, _chart3_embed(0), r0, np.eye(3),
                             IntervalVector.zeros(3))


# -- Rossler trapping region ---------------------------------------------------


def rossler_trap(order=None, tolerance=None, subdivisions=None) -> CaseOutcome:
    """The planar return map sends W = Y x Z strictly into its interior."""
    cfg = _cfg(order, tolerance, 7, 1e-5)
    n_pieces = subdivisions or 200
    f = _rossler_field()
    sec = Section.coordinate(0, 0.0, direction="positive")
    cert = Certificate("rossler-trap")
    cert.config = {"order": cfg.order, "tolerance": cfg.tolerance,
                   "subdivisions": n_pieces}
    cert.field_hash = field_hash(f.render())

    # on {0} x W the flow satisfies x' > 0, so W lies in the section's domain
    wbox = IntervalVector([Interval(0.0), W_Y, W_Z])
    xdot = f.eval(Interval(0.0), wbox)[0]
    cert.add("x' > 0 on the section over W", xdot, ">", 0.0, xdot.lo > 0.0)

    rows = []
    ys = np.linspace(W_Y.lo, W_Y.hi, n_pieces + 1)
    for i in range(n_pieces):
        y_iv = Interval(ys[i], ys[i + 1])
        piece = _section_piece(y_iv, W_Z)
        desc = f"piece {i}: image of [{ys[i]:.6g},{ys[i+1]:.6g}]xZ inside W"
        try:
            res = poincare_map(f, sec, piece, cfg=cfg)
            h = sec.project_hull(res.image.hull())
            ok = (h[0].lo > W_Y_IN.lo and h[0].hi < W_Y_IN.hi
                  and h[1].lo > W_Z_IN.lo and h[1].hi < W_Z_IN.hi)
            margin = min(h[0].lo - W_Y_IN.lo, W_Y_IN.hi - h[0].hi,
                         h[1].lo - W_Z_IN.lo, W_Z_IN.hi - h[1].hi)
            cert.add(desc, Interval(margin), ">", 0.0, ok)
            rows.append(("rossler-trap", i, h[0].lo, h[0].hi, h[1].lo, h[1].hi))
        except ValidodeError as exc:
            cert.add(desc + f" (integration failed: {exc})",
                     Interval.entire(), ">", 0.0, False)
    return CaseOutcome(cert, rows, frame=(W_Y.lo, W_Y.hi, W_Z.lo, W_Z.hi),
                       axis_labels=("y", "z"))


# -- Michelson symmetric periodic orbits -----------------------------------------


def _michelson_shoot(y0: float, c: float = 1.0):
    """Nonrigorous first return of (0, y0, 0) to the plane x = 0."""
    from scipy.integrate import solve_ivp

    def rhs(t, u):
        x, y, z = u
        return [y, z, c * c - y - 0.5 * x * x]

    eps = 1e-8
    u0 = [y0 * eps, y0, (c * c - y0) * eps]

    def ev(t, u):
        return u[0]

    ev.terminal = True
    ev.direction = 0
    sol = solve_ivp(rhs, [eps, 200.0], u0, rtol=1e-11, atol=1e-12,
                    events=ev, max_step=0.5)
    if sol.t_events[0].size == 0:
        return None
    return sol.y_events[0][0]


def _michelson_piece(y_iv: Interval) -> DoubletonSet:
    """Doubleton covering {0} x y_iv x {0} x C in the extended state space."""
    ym = y_iv.mid()
    E = np.zeros((4, 2))
    E[1, 0] = 1.0  # y direction
    E[3, 1] = 1.0  # c direction
    r0 = IntervalVector([y_iv - Interval(ym), MICHELSON_C - Interval(1.0)])
    return from_affine([0.0, ym, 0.0, 1.0], IntervalMatrix.from_point(E), r0)


def _michelson_rigorous_g(f, sec, y_iv: Interval, cfg) -> IntervalVector:
    """Chart image (y, z, c) of {0} x y_iv x {0} x C under the return map."""
    res = poincare_map(f, sec, _michelson_piece(y_iv), cfg=cfg)
    return sec.project_hull(res.image.hull())


def michelson_symmetric(order=None, tolerance=None, subdivisions=None) -> CaseOutcome:
    """Two parameter-uniform families of reversor-symmetric periodic orbits.

    A point (0, y, 0) lies on the fixed set of the reversor; if its return
    again has z = 0 the orbit is symmetric-periodic.  Existence follows
    from a sign change of the z-image across a bracket, verified with the
    full parameter interval at once.  The brackets themselves are located
    by nonrigorous shooting and recorded in the certificate.
    """
    cfg = _cfg(order, tolerance, 10, 1e-8)
    f = parse(MICHELSON_SRC)
    sec = Section.coordinate(0, 0.0, direction="both")

    # nonrigorous scan for sign changes of the z-image on the positive axis
    grid = np.arange(0.1, 2.6, 0.1)
    vals = []
    for y0 in grid:
        r = _michelson_shoot(float(y0))
        vals.append(math.nan if r is None else r[2])
    brackets = []
    for i in range(len(grid) - 1):
        if math.isnan(vals[i]) or math.isnan(vals[i + 1]):
            continue
        if vals[i] * vals[i + 1] < 0.0:
            brackets.append((float(grid[max(i - 1, 0)]),
                             float(grid[min(i + 2, len(grid) - 1)])))

    cert = Certificate("michelson-symmetric")
    cert.config = {"order": cfg.order, "tolerance": cfg.tolerance,
                   "parameter": [MICHELSON_C.lo, MICHELSON_C.hi],
                   "brackets": brackets}
    cert.field_hash = field_hash(f.render())
    cert.add("two disjoint brackets found on the positive semi-axis",
             Interval(float(len(brackets))), ">", 1.0, len(brackets) >= 2)

    rows = []
    for k, (ylo, yhi) in enumerate(brackets[:2], start=1):
        family = f"family {k} (bracket [{ylo:.4g},{yhi:.4g}])"
        try:
            g_lo = _michelson_rigorous_g(f, sec, Interval(ylo), cfg)
            g_hi = _michelson_rigorous_g(f, sec, Interval(yhi), cfg)
        except ValidodeError as exc:
            cert.add(f"{family}: return map evaluation failed: {exc}",
                     Interval.entire(), "!=0", 0.0, False)
            continue
        # side condition: the y-image is negative over the whole bracket,
        # which keeps the two families' periodic points distinct
        n_sub = subdivisions or 4
        ygrid = np.linspace(ylo, yhi, n_sub + 1)
        y_img = None
        ok_side = True
        for j in range(n_sub):
            try:
                gj = _michelson_rigorous_g(f, sec, Interval(ygrid[j], ygrid[j + 1]), cfg)
            except ValidodeError:
                ok_side = False
                break
            y_img = gj[0] if y_img is None else y_img.hull(gj[0])
            rows.append(("michelson-symmetric", len(rows),
                         gj[0].lo, gj[0].hi, gj[1].lo, gj[1].hi))
        side = []
        if ok_side and y_img is not None:
            side.append(("y-image negative on the bracket", y_img, "<", 0.0))
        sub = sign_change_existence(f"{family}", g_lo[1], g_hi[1],
                                    side_conditions=side)
        for c in sub.checks:
            c.description = f"{family}: {c.description}"
        cert.checks.extend(sub.checks)
        if not ok_side:
            cert.add(f"{family}: y-image evaluation failed",
                     Interval.entire(), "<", 0.0, False)
    return CaseOutcome(cert, rows, axis_labels=("y", "z"))


# -- Rossler periodic orbits -----------------------------------------------------


def rossler_periodic(order=None, tolerance=None, subdivisions=None) -> CaseOutcome:
    """Three saddle periodic points of periods 1, 2, 3 on the attractor."""
    cfg = _cfg(order, tolerance, 20, 3e-17)
    f = _rossler_field()
    sec = Section.coordinate(0, 0.0, direction="positive")
    cert = Certificate("rossler-periodic")
    cert.config = {"order": cfg.order, "tolerance": cfg.tolerance}
    cert.field_hash = field_hash(f.render())

    rows = []
    refined = []
    for m, (ys, zs) in sorted(U_PERIODIC.items()):
        u = IntervalVector([from_decimal(ys), from_decimal(zs)])
        X = u.inflate(1e-10)
        dp_holder = {}

        def F(x0, Xbox, m=m, dp_holder=dp_holder):
            point = _sharp_section_point(x0[0], x0[1])
            res = poincare_map(f, sec, point, n_iter=m, cfg=cfg)
            val = sec.project_hull(res.image.hull()) - x0
            boxset = _section_piece(Xbox[0], Xbox[1])
            c1 = C1DoubletonSet.from_doubleton(boxset)
            resx = poincare_derivative(f, sec, c1, n_iter=m, cfg=cfg)
            dp_holder["DP"] = resx.DP
            eye = IntervalMatrix.identity(2)
            return val, resx.DP - eye

        try:
            verdict = interval_newton(F, u, X)
        except ValidodeError as exc:
            cert.add(f"period {m}: interval Newton failed: {exc}",
                     Interval.entire(), "subset", None, False)
            continue
        ok = verdict.status == "unique_zero"
        dmax = max(verdict.N.diam()) if verdict.N is not None else math.inf
        cert.add(f"period {m}: unique fixed point of the {m}-th return map "
                 f"in u{m} + 1e-10 box", Interval(dmax), "<", 1e-12,
                 ok and dmax < 1e-12)
        if verdict.N is not None:
            rows.append(("rossler-periodic", m,
                         verdict.N[0].lo, verdict.N[0].hi,
                         verdict.N[1].lo, verdict.N[1].hi))
        if ok:
            refined.append((f"u{m}", verdict.N))
            sv = saddle_verdict(f"period {m}", dp_holder["DP"])
            for c in sv.checks:
                c.description = f"period {m}: {c.description}"
            cert.checks.extend(sv.checks)
    if len(refined) == 3:
        dj = disjoint_enclosures("distinct", refined)
        cert.checks.extend(dj.checks)
    else:
        cert.add("three refined enclosures available for disjointness",
                 Interval(float(len(refined))), ">", 2.0, False)
    return CaseOutcome(cert, rows, axis_labels=("y", "z"))


# -- Rossler horseshoe -----------------------------------------------------------


def rossler_horseshoe(order=None, tolerance=None, subdivisions=None) -> CaseOutcome:
    """Covering relations and cone condition for the second return map."""
    cfg = _cfg(order, tolerance, 8, 1e-6)
    f = _rossler_field()
    sec = Section.coordinate(0, 0.0, direction="positive")
    cert = Certificate("rossler-horseshoe")
    cert.config = {"order": cfg.order, "tolerance": cfg.tolerance,
                   "lambda": CONE_LAMBDA, "mu": CONE_MU}
    cert.field_hash = field_hash(f.render())
    rows = []

    edge_y = {
        "left edge of M": (L_M, "<", L_M.lo),
        "right edge of M": (R_M, ">", R_N.hi),
        "right edge of N": (R_N, "<", L_M.lo),
        "left edge of N": (L_N, ">", R_N.hi),
    }

    def evaluate(name, a, b):
        yv, _, _ = edge_y[name]
        piece = _section_piece(yv, Interval(a, b))
        res = poincare_map(f, sec, piece, n_iter=2, cfg=cfg)
        h = sec.project_hull(res.image.hull())
        rows.append(("rossler-horseshoe", len(rows),
                     h[0].lo, h[0].hi, h[1].lo, h[1].hi))
        return h[0]

    edges = [{"name": name, "lo": W_Z.lo, "hi": W_Z.hi,
              "inequality": op, "threshold": thr}
             for name, (_, op, thr) in edge_y.items()]
    cov = covering_check("covering", edges, evaluate)
    cert.checks.extend(cov.checks)

    # adaptive cover of M union N for the cone condition; the defaults
    # start at the empirically needed resolution so few pieces re-split
    n0_m = subdivisions or 128
    n0_n = subdivisions or 64
    lam, mu = CONE_LAMBDA, CONE_MU
    Q = IntervalMatrix([[Interval(lam), Interval(0.0)],
                        [Interval(0.0), Interval(mu)]])

    def cone_ok(DP):
        M = DP.transpose().matmul(Q).matmul(DP) - Q
        off = M[0, 1].hull(M[1, 0])
        return posdef_sym_2x2(IntervalMatrix([[M[0, 0], off], [off, M[1, 1]]]))

    pieces = []
    cover_ok = True
    for box_name, lo, hi, n0 in (("M", L_M.lo, R_M.hi, n0_m),
                                 ("N", L_N.lo, R_N.hi, n0_n)):
        grid = np.linspace(lo, hi, n0 + 1)
        stack = [(grid[i], grid[i + 1], 0) for i in range(n0)]
        while stack:
            a, b, depth = stack.pop()
            name = f"{box_name} y in [{a:.6g},{b:.6g}]"
            try:
                c1 = C1DoubletonSet.from_doubleton(
                    _section_piece(Interval(a, b), W_Z))
                res = poincare_derivative(f, sec, c1, n_iter=2, cfg=cfg)
                good = cone_ok(res.DP)
            except ValidodeError:
                good = False
            if good:
                pieces.append((name, res.DP))
                continue
            if depth >= 6:
                cover_ok = False
                cert.add(f"cone condition piece {name} verified",
                         Interval.entire(), "posdef", 0.0, False)
                break
            m = 0.5 * (a + b)
            stack.append((a, m, depth + 1))
            stack.append((m, b, depth + 1))
        if not cover_ok:
            break
    if cover_ok:
        cone = cone_condition("cone", pieces, lam, mu)
        cert.checks.extend(cone.checks)
    return CaseOutcome(cert, rows, axis_labels=("y", "z"))


# -- Nakao boundary value problem --------------------------------------------------


def bvp_nakao(order=None, tolerance=None, subdivisions=None) -> CaseOutcome:
    """A forced oscillator trajectory with zero velocity at both 0 and 2 pi."""
    cfg = _cfg(order, tolerance, 14, 1e-12)
    f = parse(NAKAO_SRC)
    cert = Certificate("bvp-nakao")
    cert.config = {"order": cfg.order, "tolerance": cfg.tolerance}
    cert.field_hash = field_hash(f.render())
    eye2 = IntervalMatrix.from_point(np.eye(2))

    def F(x0, X):
        point = from_affine([x0[0], Interval(0.0)], eye2, IntervalVector.zeros(2))
        out = integrate_to(f, point, TWO_PI, cfg)
        val = IntervalVector([out.hull()[1]])
        box = from_affine([X[0].mid(), 0.0], eye2,
                          IntervalVector([X[0] - Interval(X[0].mid()), Interval(0.0)]))
        c1 = integrate_c1(f, C1DoubletonSet.from_doubleton(box), TWO_PI, cfg)
        V = c1.v_enclosure()
        return val, IntervalMatrix([[V[1, 0]]])

    x0 = IntervalVector([NAKAO_X0])
    X = IntervalVector([NAKAO_X0.inflate(NAKAO_RADIUS)])
    try:
        verdict = interval_newton(F, x0, X, max_enlarge=0)
        ok = verdict.status == "unique_zero"
        enc = verdict.N[0] if verdict.N is not None else Interval.entire()
    except ValidodeError as exc:
        ok = False
        enc = Interval.entire()
        cert.add(f"integration failed: {exc}", enc, "subset", None, False)
    cert.add("unique zero of the terminal-velocity map in -0.5072 +- 1e-4",
             enc, "subset", None, ok)
    if ok:
        dist = (enc - NAKAO_X0).mag()
        cert.add("zero within 1e-4 of the reference value",
                 Interval(dist), "<", NAKAO_RADIUS, dist <= NAKAO_RADIUS)
        rows = [("bvp-nakao", 0, enc.lo, enc.hi, 0.0, 0.0)]
    else:
        rows = []
    return CaseOutcome(cert, rows, axis_labels=("x(0)", ""))


# -- Lorenz chart composition -------------------------------------------------------


def lorenz_coords(order=None, tolerance=None, subdivisions=None) -> CaseOutcome:
    """A rotated-chart bound on the second return, composed two ways.

    The claim |pi_y (Q^-1 o P^2)(Q (s,0))| < 3.6 holds when the rotation
    is applied to the structured representation; re-boxing the image hull
    before rotating (the pipelined variant) provably reports a wider bound.
    """
    cfg = _cfg(order, tolerance, 10, 1e-9)
    f = parse(LORENZ_SRC)
    f.set_param("s", LORENZ_SIGMA)
    f.set_param("r", LORENZ_RHO)
    f.set_param("b", LORENZ_BETA)
    sec = Section.coordinate(2, 27.0, direction="negative")
    cert = Certificate("lorenz-coords")
    cert.field_hash = field_hash(f.render())

    ca, sa = LORENZ_ALPHA.cos(), LORENZ_ALPHA.sin()
    Qinv = IntervalMatrix([[ca, sa], [-sa, ca]])
    # the second return stretches initial spread by ~4 linearly but the
    # enclosure overwidth decays superlinearly with piece width; ~1e-3
    # wide pieces keep the composed bound well inside 3.6
    n_sub = subdivisions or 100
    cert.config = {"order": cfg.order, "tolerance": cfg.tolerance,
                   "subdivisions": n_sub}

    rows = []
    composed = None
    pipelined = None
    ok = True
    sgrid = np.linspace(LORENZ_S.lo, LORENZ_S.hi, n_sub + 1)
    for j in range(n_sub):
        s_iv = Interval(sgrid[j], sgrid[j + 1])
        s_mid = s_iv.mid()
        # u = Q_alpha (s, 0): a rotated segment on the section z = 27
        col = IntervalMatrix([[ca, Interval(0.0)],
                              [sa, Interval(0.0)],
                              [Interval(0.0), Interval(0.0)]])
        x0 = [ca * Interval(s_mid), sa * Interval(s_mid), Interval(27.0)]
        piece = from_affine(x0, col,
                            IntervalVector([s_iv - Interval(s_mid), Interval(0.0)]))
        try:
            res = poincare_map(f, sec, piece, n_iter=2, cfg=cfg)
        except ValidodeError as exc:
            cert.add(f"segment {j}: integration failed: {exc}",
                     Interval.entire(), "<", LORENZ_BOUND, False)
            ok = False
            continue
        chart = sec.project_set(res.image)
        rot = _apply_affine(chart, Qinv)
        comp_y = rot.hull()[1]
        pipe_y = Qinv.matvec(sec.project_hull(res.image.hull()))[1]
        composed = comp_y if composed is None else composed.hull(comp_y)
        pipelined = pipe_y if pipelined is None else pipelined.hull(pipe_y)
        rows.append(("lorenz-coords", j, rot.hull()[0].lo, rot.hull()[0].hi,
                     comp_y.lo, comp_y.hi))
    if composed is not None:
        cert.add("|rotated-chart y| of the composed second return < 3.6",
                 composed, "<", LORENZ_BOUND,
                 ok and composed.mag() < LORENZ_BOUND)
        cert.add("pipelined (hull-then-rotate) bound is strictly wider",
                 pipelined, ">", composed.diam(),
                 pipelined.diam() > composed.diam())
    else:
        cert.add("no segment produced a bound", Interval.entire(), "<",
                 LORENZ_BOUND, False)
    return CaseOutcome(cert, rows, axis_labels=("chart x", "chart y"))


# -- Pendulum representation comparison ----------------------------------------------


def pendulum_repr(order=None, tolerance=None, subdivisions=None) -> CaseOutcome:
    """Structured propagation beats plain box propagation on a sheared set."""
    cfg = _cfg(order, tolerance, 20, 1e-10)
    f = parse(PENDULUM_SRC)
    cert = Certificate("pendulum-repr")
    cert.config = {"order": cfg.order, "tolerance": cfg.tolerance, "T": 2.0}
    cert.field_hash = field_hash(f.render())

    C = IntervalMatrix.from_point(np.array([[1.0, 1.0], [-1.0, 1.0]]))
    r0 = IntervalVector([Interval(-0.5, 0.5), Interval(0.0)])
    dbl = from_affine([2.5, 2.5], C, r0)
    box = BoxSet(dbl.hull())
    rows = []
    try:
        dbl_out = integrate_to(f, dbl, 2.0, cfg).hull()
        box_out = integrate_to(f, box, 2.0, cfg).hull()
    except ValidodeError as exc:
        cert.add(f"integration failed: {exc}", Interval.entire(), "<", None, False)
        return CaseOutcome(cert, rows, axis_labels=("x", "x'"))
    for i, name in enumerate(("angle", "velocity")):
        cert.add(f"doubleton {name} diameter strictly below box diameter "
                 f"({dbl_out[i].diam():.3g} vs {box_out[i].diam():.3g})",
                 Interval(dbl_out[i].diam()), "<", box_out[i].diam(),
                 dbl_out[i].diam() < box_out[i].diam())
    rows.append(("pendulum-repr", 0, dbl_out[0].lo, dbl_out[0].hi,
                 dbl_out[1].lo, dbl_out[1].hi))
    rows.append(("pendulum-repr", 1, box_out[0].lo, box_out[0].hi,
                 box_out[1].lo, box_out[1].hi))
    return CaseOutcome(cert, rows, axis_labels=("x", "x'"))


CASES = {
    "rossler-trap": rossler_trap,
    "michelson-symmetric": michelson_symmetric,
    "rossler-periodic": rossler_periodic,
    "rossler-horseshoe": rossler_horseshoe,
    "bvp-nakao": bvp_nakao,
    "lorenz-coords": lorenz_coords,
    "pendulum-repr": pendulum_repr,
}


def run_case(name: str, order=None, tolerance=None, subdivisions=None) -> CaseOutcome:
    if name not in CASES:
        raise KeyError(f"unknown case {name!r}; choose from {sorted(CASES)}")
    if subdivisions is not None and subdivisions < 1:
        raise ValueError("subdivisions must be >= 1")
    return CASES[name](order=order, tolerance=tolerance, subdivisions=subdivisions)
