"""Validated ODE integration and computer-assisted proof toolkit.

Interval arithmetic with outward rounding, structured enclosure sets that
tame the wrapping effect, a Taylor-method solver with rigorous remainder
bounds, Poincare return maps with derivatives, and proof rules (interval
Newton, covering relations, cone conditions) that turn enclosures into
certificates.
"""

from .errors import ValidodeError
from .intervals import Interval, from_decimal, PI, TWO_PI
from .linalg import IntervalMatrix, IntervalVector, solve_gauss
from .vectorfield import VectorField, parse
from .sets import BoxSet, C1DoubletonSet, DoubletonSet, TripletonSet, from_affine
from .solver import Solver, SolverConfig, integrate_c1, integrate_to
from .poincare import PoincareResult, Section, poincare_derivative, poincare_map
from .verify import (
    Certificate,
    NewtonVerdict,
    cone_condition,
    covering_check,
    interval_newton,
    saddle_verdict,
    sign_change_existence,
)
from .cases import CASES, CaseOutcome, run_case

__version__ = "1.0.0"

__all__ = [
    "ValidodeError",
    "Interval", "from_decimal", "PI", "TWO_PI",
    "IntervalMatrix", "IntervalVector", "solve_gauss",
    "VectorField", "parse",
    "BoxSet", "DoubletonSet", "TripletonSet", "C1DoubletonSet", "from_affine",
    "Solver", "SolverConfig", "integrate_to", "integrate_c1",
    "Section", "PoincareResult", "poincare_map", "poincare_derivative",
    "Certificate", "NewtonVerdict", "interval_newton", "sign_change_existence",
    "covering_check", "cone_condition", "saddle_verdict",
    "CASES", "CaseOutcome", "run_case",
    "__version__",
]
