"""Shared fixtures and nonrigorous reference oracles for the test suite.

The references here are deliberately independent of the library: plain
float RHS functions fed to scipy's adaptive integrator, mpmath for
high-precision scalar checks, and numpy for sampling.
"""

import numpy as np
import pytest
from scipy.integrate import solve_ivp


def rossler_rhs(t, u, a=5.7, b=0.2):
    x, y, z = u
    return [-(y + z), x + b * y, b + z * (x - a)]


def lorenz_rhs(t, u, s=10.0, r=28.0, b=8.0 / 3.0):
    x, y, z = u
    return [s * (y - x), x * (r - z) - y, x * y - b * z]


def pendulum_rhs(t, u):
    x, y = u
    return [y, -np.sin(x)]


def nakao_rhs(t, u):
    x, y = u
    return [y, -0.1 * x - 0.1 * x ** 3 + 0.4464 * np.cos(t)]


def michelson_rhs(t, u, c=1.0):
    x, y, z = u
    return [y, z, c * c - y - 0.5 * x * x]


def reference_flow(rhs, u0, T, rtol=1e-12, atol=1e-13):
    """High-accuracy nonrigorous trajectory endpoint."""
    sol = solve_ivp(rhs, [0.0, T], list(u0), rtol=rtol, atol=atol,
                    dense_output=False, method="DOP853")
    assert sol.success
    return sol.y[:, -1]


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
