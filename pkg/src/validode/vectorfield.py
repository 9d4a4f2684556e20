"""Vector fields parsed from text, with automatic differentiation.

The source grammar follows the section syntax
``par:a,b;time:t;var:x,y;fun:e1,e2;`` where ``par`` and ``time`` are
optional.  Expressions use infix ``+ - * / ^`` (integer powers only),
calls ``sin cos exp sqrt``, parentheses, and decimal literals.  Literals
are converted to outward-rounded intervals, so e.g. ``0.1`` denotes the
tightest interval enclosing one tenth.

The parsed DAG drives four evaluators: plain interval evaluation,
forward-mode Jacobians, ODE Taylor coefficient recurrences, and Taylor
coefficients of the first variational equation (tangent jets).  Powers
``e^n`` are rewritten into a square-and-multiply chain at parse time so
no recurrence ever divides by a coefficient that may contain zero.
"""

from __future__ import annotations

import re
from typing import Optional, Sequence

from .compensated import Ball, BallVector
from .errors import (
    ArityMismatch,
    DimensionMismatch,
    ExpressionSyntaxError,
    UnknownIdentifier,
)
from .intervals import Interval, from_decimal
from .intervals import _add_down, _add_up, _mul_bounds, _new
from .linalg import IntervalMatrix, IntervalVector

__all__ = ["VectorField", "TaylorJet", "SharpJet", "parse"]

# node kinds
K_CONST, K_PARAM, K_VAR, K_TIME, K_ADD, K_SUB, K_MUL, K_DIV, K_SQR, K_SIN, \
    K_COS, K_EXP, K_SQRT, K_NEG = range(14)

_FUNCTIONS = {"sin": K_SIN, "cos": K_COS, "exp": K_EXP, "sqrt": K_SQRT}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^(),;:]))"
)

_ZERO = Interval(0.0)
_ONE = Interval(1.0)


class TaylorJet:
    """Taylor coefficients x_[0..p] of a solution (normalized derivatives)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: list[IntervalVector]):
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> IntervalVector:
        return self.coeffs[k]

    def poly_eval(self, h: Interval) -> IntervalVector:
        """Horner evaluation of the truncated series at step h."""
        acc = self.coeffs[-1]
        for k in range(len(self.coeffs) - 2, -1, -1):
            acc = IntervalVector([a * h + c for a, c in zip(acc, self.coeffs[k])])
        return acc


class SharpJet:
    """Taylor coefficients of a point solution in compensated balls.

    Same role as TaylorJet but for the centre of a sharp set: widths stay
    near u^2 per step instead of the one-ulp interval floor.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: list[BallVector]):
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> BallVector:
        return self.coeffs[k]

    def poly_eval(self, h):
        """Horner evaluation; balls for a point step, intervals otherwise."""
        if isinstance(h, Interval) and not h.is_point():
            acc = self.coeffs[-1].to_interval_vector()
            for k in range(len(self.coeffs) - 2, -1, -1):
                ck = self.coeffs[k].to_interval_vector()
                acc = IntervalVector([a * h + c for a, c in zip(acc, ck)])
            return acc
        hf = h.lo if isinstance(h, Interval) else float(h)
        acc = list(self.coeffs[-1])
        for k in range(len(self.coeffs) - 2, -1, -1):
            acc = [a.mul_d(hf).add(c) for a, c in zip(acc, self.coeffs[k])]
        return BallVector(acc)


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tok = None
        self.kind = None
        self.tok_pos = 0
        self.advance()

    def advance(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        self.tok_pos = self.pos
        if self.pos >= len(self.text):
            self.tok, self.kind = None, "end"
            return
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            raise ExpressionSyntaxError(self.pos, f"unexpected character {self.text[self.pos]!r}")
        self.pos = m.end()
        for kind in ("num", "ident", "op"):
            if m.group(kind) is not None:
                self.tok, self.kind = m.group(kind), kind
                return

    def expect_op(self, op: str):
        if self.kind != "op" or self.tok != op:
            raise ExpressionSyntaxError(self.tok_pos, f"expected {op!r}, got {self.tok!r}")
        self.advance()


class VectorField:
    """Expression DAG for a (possibly parametric, non-autonomous) vector field."""

    def __init__(self, source: str):
        self.source = source
        self.param_names: list[str] = []
        self.time_name: Optional[str] = None
        self.var_names: list[str] = []
        # parallel node arrays
        self._kind: list[int] = []
        self._a: list[int] = []
        self._b: list[int] = []
        self._payload: list = []  # Interval for const, index for param/var
        self._partner: list[int] = []  # sin <-> cos coupling
        self._ctext: dict[int, str] = {}  # const node -> literal text, for render
        self._memo: dict = {}
        self.outputs: list[int] = []
        self._params = None  # IntervalVector once set
        self._param_balls: dict[int, Ball] = {}
        self._const_balls: dict[int, Ball] = {}
        self._parse(source)
        if self.param_names:
            self._params = IntervalVector([_ZERO] * len(self.param_names))
        self._unset_params = set(self.param_names)

    # -- construction ------------------------------------------------------

    def _node(self, kind: int, a: int = -1, b: int = -1, payload=None) -> int:
        key = (kind, a, b, payload if not isinstance(payload, Interval) else (payload.lo, payload.hi))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        idx = len(self._kind)
        self._kind.append(kind)
        self._a.append(a)
        self._b.append(b)
        self._payload.append(payload)
        self._partner.append(-1)
        self._memo[key] = idx
        if kind == K_SIN or kind == K_COS:
            other = K_COS if kind == K_SIN else K_SIN
            okey = (other, a, b, None)
            oidx = self._memo.get(okey)
            if oidx is None:
                oidx = len(self._kind)
                self._kind.append(other)
                self._a.append(a)
                self._b.append(b)
                self._payload.append(None)
                self._partner.append(idx)
                self._memo[okey] = oidx
            else:
                self._partner[oidx] = idx
            self._partner[idx] = oidx
        return idx

    def _pow(self, base: int, n: int, pos: int) -> int:
        if n < 0:
            raise ExpressionSyntaxError(pos, "negative exponents are not supported")
        if n == 0:
            one = self._node(K_CONST, payload=_ONE)
            self._ctext.setdefault(one, "1")
            return one
        if n == 1:
            return base
        if n % 2 == 0:
            return self._node(K_SQR, self._pow(base, n // 2, pos))
        return self._node(K_MUL, base, self._pow(base, n - 1, pos))

    def _parse(self, text: str):
        sections: dict[str, tuple[str, int]] = {}
        pos = 0
        for chunk in text.split(";"):
            if chunk.strip() == "":
                pos += len(chunk) + 1
                continue
            if ":" not in chunk:
                raise ExpressionSyntaxError(pos, f"section {chunk!r} has no ':'")
            name, body = chunk.split(":", 1)
            name = name.strip()
            if name not in ("par", "time", "var", "fun"):
                raise ExpressionSyntaxError(pos, f"unknown section {name!r}")
            if name in sections:
                raise ExpressionSyntaxError(pos, f"duplicate section {name!r}")
            sections[name] = (body, pos + chunk.index(":") + 1)
            pos += len(chunk) + 1
        if "var" not in sections or "fun" not in sections:
            raise ExpressionSyntaxError(0, "sections 'var' and 'fun' are required")

        def idents(body: str, at: int) -> list[str]:
            names = [s.strip() for s in body.split(",")]
            for s in names:
                if not re.fullmatch(r"[A-Za-z_]\w*", s):
                    raise ExpressionSyntaxError(at, f"bad identifier {s!r}")
            return names

        if "par" in sections:
            self.param_names = idents(*sections["par"])
        if "time" in sections:
            tn = idents(*sections["time"])
            if len(tn) != 1:
                raise ExpressionSyntaxError(sections["time"][1], "time section takes one name")
            self.time_name = tn[0]
        self.var_names = idents(*sections["var"])
        all_names = self.param_names + self.var_names + ([self.time_name] if self.time_name else [])
        if len(set(all_names)) != len(all_names):
            raise ExpressionSyntaxError(0, "names must be unique")

        body, at = sections["fun"]
        tz = _Tokenizer(body)
        exprs = [self._expr(tz)]
        while tz.kind == "op" and tz.tok == ",":
            tz.advance()
            exprs.append(self._expr(tz))
        if tz.kind != "end":
            raise ExpressionSyntaxError(at + tz.tok_pos, f"trailing input {tz.tok!r}")
        if len(exprs) != len(self.var_names):
            raise ArityMismatch(
                f"{len(exprs)} fun expressions for {len(self.var_names)} variables"
            )
        self.outputs = exprs

    def _expr(self, tz: _Tokenizer) -> int:
        node = self._term(tz)
        while tz.kind == "op" and tz.tok in "+-":
            op = tz.tok
            tz.advance()
            rhs = self._term(tz)
            node = self._node(K_ADD if op == "+" else K_SUB, node, rhs)
        return node

    def _term(self, tz: _Tokenizer) -> int:
        node = self._unary(tz)
        while tz.kind == "op" and tz.tok in "*/":
            op = tz.tok
            tz.advance()
            rhs = self._unary(tz)
            node = self._node(K_MUL if op == "*" else K_DIV, node, rhs)
        return node

    def _unary(self, tz: _Tokenizer) -> int:
        if tz.kind == "op" and tz.tok == "-":
            tz.advance()
            return self._node(K_NEG, self._unary(tz))
        if tz.kind == "op" and tz.tok == "+":
            tz.advance()
            return self._unary(tz)
        return self._power(tz)

    def _power(self, tz: _Tokenizer) -> int:
        base = self._atom(tz)
        if tz.kind == "op" and tz.tok == "^":
            pos = tz.tok_pos
            tz.advance()
            if tz.kind != "num" or not re.fullmatch(r"\d+", tz.tok):
                raise ExpressionSyntaxError(
                    tz.tok_pos, "exponent must be a non-negative integer literal"
                )
            n = int(tz.tok)
            tz.advance()
            return self._pow(base, n, pos)
        return base

    def _atom(self, tz: _Tokenizer) -> int:
        if tz.kind == "num":
            node = self._node(K_CONST, payload=from_decimal(tz.tok))
            self._ctext.setdefault(node, tz.tok)
            tz.advance()
            return node
        if tz.kind == "ident":
            name = tz.tok
            pos = tz.tok_pos
            tz.advance()
            if tz.kind == "op" and tz.tok == "(":
                fk = _FUNCTIONS.get(name)
                if fk is None:
                    raise UnknownIdentifier(pos, f"unknown function {name!r}")
                tz.advance()
                arg = self._expr(tz)
                tz.expect_op(")")
                return self._node(fk, arg)
            if name in self.var_names:
                return self._node(K_VAR, payload=self.var_names.index(name))
            if name in self.param_names:
                return self._node(K_PARAM, payload=self.param_names.index(name))
            if name == self.time_name:
                return self._node(K_TIME)
            raise UnknownIdentifier(pos, f"unknown identifier {name!r}")
        if tz.kind == "op" and tz.tok == "(":
            tz.advance()
            node = self._expr(tz)
            tz.expect_op(")")
            return node
        raise ExpressionSyntaxError(tz.tok_pos, f"unexpected token {tz.tok!r}")

    # -- parameters ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.var_names)

    def set_param(self, name: str, value) -> None:
        """Set a parameter from an Interval, a number, or a decimal string.

        A decimal string additionally stores a compensated ball so sharp
        centre jets see the constant at u^2 accuracy rather than one ulp.
        """
        i = self.param_names.index(name)
        vals = list(self._params) if self._params is not None else []
        if isinstance(value, str):
            vals[i] = from_decimal(value)
            self._param_balls[i] = Ball.from_decimal(value)
        else:
            vals[i] = value if isinstance(value, Interval) else Interval(float(value))
            self._param_balls[i] = Ball.from_interval(vals[i])
        self._params = IntervalVector(vals)
        self._unset_params.discard(name)

    def param(self, name: str) -> Interval:
        return self._params[self.param_names.index(name)]

    # -- rendering -------------------------------------------------------------

    def render(self) -> str:
        """Regenerate source text; reparsing yields an identical DAG."""
        parts = []
        if self.param_names:
            parts.append("par:" + ",".join(self.param_names))
        if self.time_name:
            parts.append("time:" + self.time_name)
        parts.append("var:" + ",".join(self.var_names))
        parts.append("fun:" + ",".join(self._render_node(o, 0) for o in self.outputs))
        return ";".join(parts) + ";"

    def _render_node(self, i: int, parent_prec: int) -> str:
        k = self._kind[i]
        if k == K_CONST:
            s = self._ctext.get(i) or repr(self._payload[i].lo)
            return s
        if k == K_VAR:
            return self.var_names[self._payload[i]]
        if k == K_PARAM:
            return self.param_names[self._payload[i]]
        if k == K_TIME:
            return self.time_name
        if k in (K_SIN, K_COS, K_EXP, K_SQRT):
            name = {K_SIN: "sin", K_COS: "cos", K_EXP: "exp", K_SQRT: "sqrt"}[k]
            return f"{name}({self._render_node(self._a[i], 0)})"
        if k == K_SQR:
            return f"({self._render_node(self._a[i], 3)})^2"
        if k == K_NEG:
            s = f"-{self._render_node(self._a[i], 2)}"
            return f"({s})" if parent_prec >= 2 else s
        op, prec = {K_ADD: ("+", 1), K_SUB: ("-", 1), K_MUL: ("*", 2), K_DIV: ("/", 2)}[k]
        s = (
            self._render_node(self._a[i], prec)
            + op
            + self._render_node(self._b[i], prec + 1)
        )
        return f"({s})" if prec < parent_prec else s

    # -- evaluation --------------------------------------------------------------

    def eval(self, t, x: IntervalVector) -> IntervalVector:
        """Interval enclosure of f(params, t, x)."""
        vals = self._forward(t, list(x))
        return IntervalVector([vals[o] for o in self.outputs])

    def _require_params(self) -> None:
        if self._unset_params:
            missing = ", ".join(sorted(self._unset_params))
            raise ValueError(f"parameters not set: {missing}")

    def _forward(self, t, xvals: list) -> list:
        self._require_params()
        t = t if isinstance(t, Interval) else Interval(float(t))
        n = len(self._kind)
        vals = [None] * n
        kind, a, b, payload, partner = self._kind, self._a, self._b, self._payload, self._partner
        for i in range(n):
            k = kind[i]
            if k == K_CONST:
                vals[i] = payload[i]
            elif k == K_PARAM:
                vals[i] = self._params[payload[i]]
            elif k == K_VAR:
                vals[i] = xvals[payload[i]]
            elif k == K_TIME:
                vals[i] = t
            elif k == K_ADD:
                vals[i] = vals[a[i]] + vals[b[i]]
            elif k == K_SUB:
                vals[i] = vals[a[i]] - vals[b[i]]
            elif k == K_NEG:
                vals[i] = -vals[a[i]]
            elif k == K_MUL:
                vals[i] = vals[a[i]] * vals[b[i]]
            elif k == K_DIV:
                vals[i] = vals[a[i]] / vals[b[i]]
            elif k == K_SQR:
                vals[i] = vals[a[i]].sqr()
            elif k == K_SIN:
                vals[i] = vals[a[i]].sin()
            elif k == K_COS:
                vals[i] = vals[a[i]].cos()
            elif k == K_EXP:
                vals[i] = vals[a[i]].exp()
            elif k == K_SQRT:
                vals[i] = vals[a[i]].sqrt()
        return vals

    def eval_float(self, t: float, x: Sequence[float]) -> list[float]:
        """Nonrigorous point evaluation with midpoint parameters."""
        self._require_params()
        import math

        n = len(self._kind)
        vals = [0.0] * n
        kind, a, b, payload = self._kind, self._a, self._b, self._payload
        for i in range(n):
            k = kind[i]
            if k == K_CONST:
                vals[i] = payload[i].mid()
            elif k == K_PARAM:
                vals[i] = self._params[payload[i]].mid()
            elif k == K_VAR:
                vals[i] = float(x[payload[i]])
            elif k == K_TIME:
                vals[i] = t
            elif k == K_ADD:
                vals[i] = vals[a[i]] + vals[b[i]]
            elif k == K_SUB:
                vals[i] = vals[a[i]] - vals[b[i]]
            elif k == K_NEG:
                vals[i] = -vals[a[i]]
            elif k == K_MUL:
                vals[i] = vals[a[i]] * vals[b[i]]
            elif k == K_DIV:
                vals[i] = vals[a[i]] / vals[b[i]]
            elif k == K_SQR:
                vals[i] = vals[a[i]] * vals[a[i]]
            elif k == K_SIN:
                vals[i] = math.sin(vals[a[i]])
            elif k == K_COS:
                vals[i] = math.cos(vals[a[i]])
            elif k == K_EXP:
                vals[i] = math.exp(vals[a[i]])
            elif k == K_SQRT:
                vals[i] = math.sqrt(vals[a[i]])
        return [vals[o] for o in self.outputs]

    def jacobian(self, t, x: IntervalVector) -> IntervalMatrix:
        """Entrywise enclosure of D_x f(params, t, x) by forward-mode AD."""
        _, tang = self._forward_tangent(t, list(x), None)
        nv = self.dim
        return IntervalMatrix(
            [[tang[o][j] for j in range(nv)] for o in self.outputs]
        )

    def _forward_tangent(self, t, xvals: list, seeds: Optional[list[list[Interval]]]):
        """Forward pass carrying tangent rows; seeds default to identity."""
        self._require_params()
        t = t if isinstance(t, Interval) else Interval(float(t))
        nv = self.dim
        if seeds is None:
            seeds = [
                [_ONE if i == j else _ZERO for j in range(nv)] for i in range(nv)
            ]
        ncols = len(seeds[0])
        zrow = [_ZERO] * ncols
        n = len(self._kind)
        vals = [None] * n
        tang = [None] * n
        kind, a, b, payload = self._kind, self._a, self._b, self._payload
        for i in range(n):
            k = kind[i]
            if k == K_CONST:
                vals[i] = payload[i]
                tang[i] = zrow
            elif k == K_PARAM:
                vals[i] = self._params[payload[i]]
                tang[i] = zrow
            elif k == K_VAR:
                vals[i] = xvals[payload[i]]
                tang[i] = seeds[payload[i]]
            elif k == K_TIME:
                vals[i] = t
                tang[i] = zrow
            elif k == K_ADD:
                vals[i] = vals[a[i]] + vals[b[i]]
                tang[i] = [u + v for u, v in zip(tang[a[i]], tang[b[i]])]
            elif k == K_SUB:
                vals[i] = vals[a[i]] - vals[b[i]]
                tang[i] = [u - v for u, v in zip(tang[a[i]], tang[b[i]])]
            elif k == K_NEG:
                vals[i] = -vals[a[i]]
                tang[i] = [-u for u in tang[a[i]]]
            elif k == K_MUL:
                va, vb = vals[a[i]], vals[b[i]]
                vals[i] = va * vb
                tang[i] = [u * vb + va * v for u, v in zip(tang[a[i]], tang[b[i]])]
            elif k == K_DIV:
                va, vb = vals[a[i]], vals[b[i]]
                q = va / vb
                vals[i] = q
                tang[i] = [(u - q * v) / vb for u, v in zip(tang[a[i]], tang[b[i]])]
            elif k == K_SQR:
                va = vals[a[i]]
                vals[i] = va.sqr()
                two_va = va * 2.0
                tang[i] = [two_va * u for u in tang[a[i]]]
            elif k == K_SIN:
                va = vals[a[i]]
                vals[i] = va.sin()
                c = va.cos()
                tang[i] = [c * u for u in tang[a[i]]]
            elif k == K_COS:
                va = vals[a[i]]
                vals[i] = va.cos()
                s = -va.sin()
                tang[i] = [s * u for u in tang[a[i]]]
            elif k == K_EXP:
                va = vals[a[i]].exp()
                vals[i] = va
                tang[i] = [va * u for u in tang[a[i]]]
            elif k == K_SQRT:
                r = vals[a[i]].sqrt()
                vals[i] = r
                inv = Interval(0.5) / r
                tang[i] = [inv * u for u in tang[a[i]]]
        return vals, tang

    # -- Taylor coefficients ---------------------------------------------------

    def ode_taylor(self, t0, x0: IntervalVector, p: int) -> TaylorJet:
        """Taylor coefficients x_[0..p] of x' = f at (t0, x0)."""
        coeffs, _ = self._ode_taylor_impl(t0, x0, None, p)
        return TaylorJet(coeffs)

    def _const_ball(self, i: int) -> Ball:
        ball = self._const_balls.get(i)
        if ball is None:
            text = self._ctext.get(i)
            ball = (Ball.from_decimal(text) if text is not None
                    else Ball.from_interval(self._payload[i]))
            self._const_balls[i] = ball
        return ball

    def ode_taylor_sharp(self, x0: BallVector, p: int) -> SharpJet:
        """Compensated-ball Taylor coefficients of an autonomous polynomial
        field at the point x0; widths stay near u^2 per coefficient.

        Raises ValueError for fields with time dependence, division, or
        transcendental calls; callers fall back to interval jets.
        """
        self._require_params()
        if p < 1:
            raise ValueError("order must be >= 1")
        nv = self.dim
        if len(x0) != nv:
            raise DimensionMismatch(f"state dim {len(x0)}, field dim {nv}")
        n = len(self._kind)
        kind, a, b, payload = self._kind, self._a, self._b, self._payload
        zero = Ball(0.0)
        c = [[None] * (p + 1) for _ in range(n)]
        xc = [[None] * (p + 1) for _ in range(nv)]
        for j in range(nv):
            xc[j][0] = x0[j]
        for k in range(p + 1):
            for i in range(n):
                kd = kind[i]
                if kd == K_CONST:
                    c[i][k] = self._const_ball(i) if k == 0 else zero
                elif kd == K_PARAM:
                    if k == 0:
                        ball = self._param_balls.get(payload[i])
                        if ball is None:
                            raise ValueError(f"parameter "
                                             f"{self.param_names[payload[i]]!r} unset")
                        c[i][k] = ball
                    else:
                        c[i][k] = zero
                elif kd == K_VAR:
                    c[i][k] = xc[payload[i]][k]
                elif kd == K_ADD:
                    c[i][k] = c[a[i]][k].add(c[b[i]][k])
                elif kd == K_SUB:
                    c[i][k] = c[a[i]][k].sub(c[b[i]][k])
                elif kd == K_NEG:
                    c[i][k] = -c[a[i]][k]
                elif kd == K_MUL:
                    ca, cb = c[a[i]], c[b[i]]
                    acc = ca[0].mul(cb[k])
                    for j in range(1, k + 1):
                        acc = acc.add(ca[j].mul(cb[k - j]))
                    c[i][k] = acc
                elif kd == K_SQR:
                    ca = c[a[i]]
                    if k == 0:
                        c[i][0] = ca[0].sqr()
                    else:
                        acc = None
                        for j in range((k - 1) // 2 + 1):
                            term = ca[j].mul(ca[k - j])
                            acc = term if acc is None else acc.add(term)
                        acc = acc.mul_d(2.0)
                        if k % 2 == 0:
                            acc = acc.add(ca[k // 2].sqr())
                        c[i][k] = acc
                else:
                    raise ValueError(
                        "sharp jets support autonomous polynomial fields only"
                    )
            if k < p:
                for j, o in enumerate(self.outputs):
                    xc[j][k + 1] = c[o][k].div_d(float(k + 1))
        return SharpJet([BallVector([xc[j][k] for j in range(nv)])
                         for k in range(p + 1)])

    def variational_taylor(
        self, t0, x0: IntervalVector, V0: IntervalMatrix, p: int
    ) -> tuple[TaylorJet, list[IntervalMatrix]]:
        """Taylor coefficients of x and of V solving V' = Df(x(t)) V, V(0)=V0."""
        coeffs, vcoeffs = self._ode_taylor_impl(t0, x0, V0, p)
        return TaylorJet(coeffs), vcoeffs

    def _ode_taylor_impl(self, t0, x0: IntervalVector, V0, p: int):
        if p < 1:
            raise ValueError("order must be >= 1")
        self._require_params()
        t0 = t0 if isinstance(t0, Interval) else Interval(float(t0))
        nv = self.dim
        if x0.dim != nv:
            raise DimensionMismatch(f"state dim {x0.dim}, field dim {nv}")
        with_var = V0 is not None
        ncols = V0.shape[1] if with_var else 0

        n = len(self._kind)
        kind, a, b, payload, partner = (
            self._kind,
            self._a,
            self._b,
            self._payload,
            self._partner,
        )
        # c[i][k]: order-k coefficient of node i; d[i][k]: its tangent row
        c = [[None] * (p + 1) for _ in range(n)]
        d = [[None] * (p + 1) for _ in range(n)] if with_var else None
        # var coefficient storage indexed by variable
        xc = [[None] * (p + 1) for _ in range(nv)]
        xd = [[None] * (p + 1) for _ in range(nv)] if with_var else None
        for j in range(nv):
            xc[j][0] = x0[j]
            if with_var:
                xd[j][0] = [V0[j, col] for col in range(ncols)]
        zrow = [_ZERO] * ncols

        for k in range(p + 1):
            for i in range(n):
                kd = kind[i]
                if kd == K_CONST:
                    c[i][k] = payload[i] if k == 0 else _ZERO
                    if with_var:
                        d[i][k] = zrow
                elif kd == K_PARAM:
                    c[i][k] = self._params[payload[i]] if k == 0 else _ZERO
                    if with_var:
                        d[i][k] = zrow
                elif kd == K_VAR:
                    c[i][k] = xc[payload[i]][k]
                    if with_var:
                        d[i][k] = xd[payload[i]][k]
                elif kd == K_TIME:
                    c[i][k] = t0 if k == 0 else (_ONE if k == 1 else _ZERO)
                    if with_var:
                        d[i][k] = zrow
                elif kd == K_ADD:
                    c[i][k] = c[a[i]][k] + c[b[i]][k]
                    if with_var:
                        d[i][k] = [u + v for u, v in zip(d[a[i]][k], d[b[i]][k])]
                elif kd == K_SUB:
                    c[i][k] = c[a[i]][k] - c[b[i]][k]
                    if with_var:
                        d[i][k] = [u - v for u, v in zip(d[a[i]][k], d[b[i]][k])]
                elif kd == K_NEG:
                    c[i][k] = -c[a[i]][k]
                    if with_var:
                        d[i][k] = [-u for u in d[a[i]][k]]
                elif kd == K_MUL:
                    # Cauchy convolutions accumulate raw endpoints to avoid
                    # one object allocation per term
                    ca, cb = c[a[i]], c[b[i]]
                    lo = hi = 0.0
                    for j in range(k + 1):
                        x, y = ca[j], cb[k - j]
                        pl, ph = _mul_bounds(x.lo, x.hi, y.lo, y.hi)
                        lo = _add_down(lo, pl)
                        hi = _add_up(hi, ph)
                    c[i][k] = _new(lo, hi)
                    if with_var:
                        da, db = d[a[i]], d[b[i]]
                        row = []
                        for col in range(ncols):
                            lo = hi = 0.0
                            for j in range(k + 1):
                                u, y = da[j][col], cb[k - j]
                                pl, ph = _mul_bounds(u.lo, u.hi, y.lo, y.hi)
                                lo = _add_down(lo, pl)
                                hi = _add_up(hi, ph)
                                x, v = ca[j], db[k - j][col]
                                pl, ph = _mul_bounds(x.lo, x.hi, v.lo, v.hi)
                                lo = _add_down(lo, pl)
                                hi = _add_up(hi, ph)
                            row.append(_new(lo, hi))
                        d[i][k] = row
                elif kd == K_SQR:
                    ca = c[a[i]]
                    half = k // 2
                    if k == 0:
                        c[i][0] = ca[0].sqr()
                    else:
                        lo = hi = 0.0
                        for j in range((k - 1) // 2 + 1):
                            x, y = ca[j], ca[k - j]
                            pl, ph = _mul_bounds(x.lo, x.hi, y.lo, y.hi)
                            lo = _add_down(lo, pl)
                            hi = _add_up(hi, ph)
                        acc = _new(lo, hi) * 2.0
                        if k % 2 == 0:
                            acc = acc + ca[half].sqr()
                        c[i][k] = acc
                    if with_var:
                        da = d[a[i]]
                        row = []
                        for col in range(ncols):
                            lo = hi = 0.0
                            for j in range(k + 1):
                                x, u = ca[j], da[k - j][col]
                                pl, ph = _mul_bounds(x.lo, x.hi, u.lo, u.hi)
                                lo = _add_down(lo, pl)
                                hi = _add_up(hi, ph)
                            row.append(_new(lo, hi) * 2.0)
                        d[i][k] = row
                elif kd == K_DIV:
                    ca, cb = c[a[i]], c[b[i]]
                    ci = c[i]
                    lo = hi = 0.0
                    for j in range(1, k + 1):
                        x, y = cb[j], ci[k - j]
                        pl, ph = _mul_bounds(x.lo, x.hi, y.lo, y.hi)
                        lo = _add_down(lo, pl)
                        hi = _add_up(hi, ph)
                    c[i][k] = (ca[k] - _new(lo, hi)) / cb[0]
                    if with_var:
                        da, db, di = d[a[i]], d[b[i]], d[i]
                        cik = c[i][k]
                        db0 = db[0]
                        out = []
                        for col in range(ncols):
                            lo = hi = 0.0
                            for j in range(1, k + 1):
                                u, y = db[j][col], ci[k - j]
                                pl, ph = _mul_bounds(u.lo, u.hi, y.lo, y.hi)
                                lo = _add_down(lo, pl)
                                hi = _add_up(hi, ph)
                                x, v = cb[j], di[k - j][col]
                                pl, ph = _mul_bounds(x.lo, x.hi, v.lo, v.hi)
                                lo = _add_down(lo, pl)
                                hi = _add_up(hi, ph)
                            num = da[k][col] - _new(lo, hi) - cik * db0[col]
                            out.append(num / cb[0])
                        d[i][k] = out
                elif kd == K_EXP:
                    ca, ci = c[a[i]], c[i]
                    if k == 0:
                        c[i][0] = ca[0].exp()
                    else:
                        acc = ca[1] * ci[k - 1]
                        for j in range(2, k + 1):
                            acc = acc + (ca[j] * float(j)) * ci[k - j]
                        c[i][k] = acc / float(k)
                    if with_var:
                        da, di = d[a[i]], d[i]
                        if k == 0:
                            e0 = c[i][0]
                            d[i][0] = [e0 * u for u in da[0]]
                        else:
                            row = zrow
                            for j in range(1, k + 1):
                                fj = float(j)
                                caj, cikj = ca[j], ci[k - j]
                                daj, dikj = da[j], di[k - j]
                                row = [
                                    r + fj * (daj[col] * cikj + caj * dikj[col])
                                    for col, r in enumerate(row)
                                ]
                            d[i][k] = [r / float(k) for r in row]
                elif kd == K_SIN or kd == K_COS:
                    # the partner node holds the coupled series
                    pa = partner[i]
                    ca = c[a[i]]
                    if k == 0:
                        c[i][0] = ca[0].sin() if kd == K_SIN else ca[0].cos()
                    else:
                        cp = c[pa]
                        acc = ca[1] * cp[k - 1]
                        for j in range(2, k + 1):
                            acc = acc + (ca[j] * float(j)) * cp[k - j]
                        acc = acc / float(k)
                        c[i][k] = acc if kd == K_SIN else -acc
                    if with_var:
                        da = d[a[i]]
                        if k == 0:
                            # d sin = cos * da, d cos = -sin * da; partner order 0
                            # may not be computed yet, so evaluate directly
                            g = ca[0].cos() if kd == K_SIN else -ca[0].sin()
                            d[i][0] = [g * u for u in da[0]]
                        else:
                            cp, dp = c[pa], d[pa]
                            row = zrow
                            for j in range(1, k + 1):
                                fj = float(j)
                                caj, cpkj = ca[j], cp[k - j]
                                daj, dpkj = da[j], dp[k - j]
                                row = [
                                    r + fj * (daj[col] * cpkj + caj * dpkj[col])
                                    for col, r in enumerate(row)
                                ]
                            row = [r / float(k) for r in row]
                            d[i][k] = row if kd == K_SIN else [-r for r in row]
                elif kd == K_SQRT:
                    ca, ci = c[a[i]], c[i]
                    if k == 0:
                        c[i][0] = ca[0].sqrt()
                    else:
                        acc = ca[k]
                        for j in range(1, (k - 1) // 2 + 1):
                            acc = acc - (ci[j] * ci[k - j]) * 2.0
                        if k % 2 == 0 and k > 1:
                            acc = acc - ci[k // 2].sqr()
                        c[i][k] = acc / (ci[0] * 2.0)
                    if with_var:
                        da, di = d[a[i]], d[i]
                        if k == 0:
                            inv = Interval(0.5) / c[i][0]
                            d[i][0] = [inv * u for u in da[0]]
                        else:
                            row = list(da[k])
                            for j in range(1, k):
                                cij, dikj = ci[j], di[k - j]
                                row = [
                                    r - (cij * dikj[col]) * 2.0
                                    for col, r in enumerate(row)
                                ]
                            cik, di0 = c[i][k], d[i][0]
                            # subtract 2*r_k*dr_0 and divide by 2 r_0
                            twor0 = ci[0] * 2.0
                            d[i][k] = [
                                (r - (cik * 2.0) * di0[col]) / twor0
                                for col, r in enumerate(row)
                            ]
            if k < p:
                inv = 1.0 / (k + 1) if ((k + 1) & k) == 0 else None
                for j, o in enumerate(self.outputs):
                    fk = c[o][k]
                    xc[j][k + 1] = fk * inv if inv is not None else fk / float(k + 1)
                    if with_var:
                        dk = d[o][k]
                        if inv is not None:
                            xd[j][k + 1] = [u * inv for u in dk]
                        else:
                            xd[j][k + 1] = [u / float(k + 1) for u in dk]

        coeffs = [IntervalVector([xc[j][k] for j in range(nv)]) for k in range(p + 1)]
        vcoeffs = None
        if with_var:
            vcoeffs = [
                IntervalMatrix(
                    [[xd[j][k][col] for col in range(ncols)] for j in range(nv)]
                )
                for k in range(p + 1)
            ]
        return coeffs, vcoeffs


def parse(source: str) -> VectorField:
    """Parse a field specification string into a VectorField."""
    return VectorField(source)
