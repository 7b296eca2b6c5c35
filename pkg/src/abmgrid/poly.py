"""Quartic-derivative test problem with a closed-form solution.

The problem is

    y'(x) = (x - 1)(x - 2)(x - 3)(x - 4),   y(0.5) = 1,

whose exact solution is the quintic

    y(x) = x^5/5 - 5x^4/2 + 35x^3/3 - 25x^2 + 24x - 727/120.

Because the derivative depends on x only, every integration error is a
pure quadrature error, which makes this problem a sharp probe of the
engine: convergence orders, the bootstrap ramp, and the adaptive
controller's behavior are all measurable against the analytic curve.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .integrator import IntegratorConfig, Mode, Trajectory, integrate

__all__ = ["poly_rhs", "poly_exact", "PolyCase", "PolyResult",
           "run_poly_case", "fit_error_degree"]


def poly_rhs(x: float) -> float:
    """Derivative of the test problem: (x-1)(x-2)(x-3)(x-4)."""
    return (x - 1.0) * (x - 2.0) * (x - 3.0) * (x - 4.0)


def poly_exact(x):
    """Closed-form solution through y(0.5) = 1."""
    x = np.asarray(x, dtype=float)
    return (x ** 5 / 5.0 - 5.0 * x ** 4 / 2.0 + 35.0 * x ** 3 / 3.0
            - 25.0 * x ** 2 + 24.0 * x - 727.0 / 120.0)


@dataclass(frozen=True)
class PolyCase:
    """One configured run of the test problem.

    The fixed-grid default of h = 0.25 is deliberately coarse so the
    per-order error curves are visible well above roundoff.
    """

    mode: Mode = Mode.ABM_ADAPTIVE
    order: int = 4
    dx: float = 0.25
    tolerance: float = 1e-8
    x0: float = 0.5
    y0: float = 1.0
    x_end: float = 5.0

    def __post_init__(self):
        if not self.x_end > self.x0:
            raise ValueError("x_end must exceed x0")

    def config(self, max_steps: int = 1_000_000) -> IntegratorConfig:
        return IntegratorConfig(order_ab=self.order,
                                target_correction=self.tolerance,
                                dx_initial=self.dx, mode=self.mode,
                                max_steps=max_steps)


@dataclass(frozen=True)
class PolyResult:
    """Trajectory plus its accumulated error against the exact curve."""

    case: PolyCase
    trajectory: Trajectory
    y_exact: np.ndarray   # exact solution at each accepted abscissa
    error: np.ndarray     # y_numeric - y_exact, per accepted step

    @property
    def final_error(self) -> float:
        return float(self.error[-1])


def run_poly_case(case: PolyCase, sink=None) -> PolyResult:
    """Integrate the test problem and attach the accumulated error."""

    def system(x, y):
        return np.array([poly_rhs(x)])

    trajectory = integrate(system, [case.y0], case.x0, case.config(),
                           x_end=case.x_end, sink=sink)
    exact = poly_exact(trajectory.x)
    error = trajectory.y[:, 0] - exact
    return PolyResult(case=case, trajectory=trajectory, y_exact=exact,
                      error=error)


def fit_error_degree(x, error, *, skip: int = 0, max_degree: int = 4,
                     rel_tol: float = 1e-3):
    """Polynomial degree that explains an accumulated-error curve.

    Least-squares fits of degree 0..max_degree are tried on the points
    after the first ``skip`` (the bootstrap prefix); the answer is the
    lowest degree whose RMS residual falls below ``rel_tol`` of the
    curve's peak magnitude.  On this problem the gulf between "wrong
    degree" (residuals of order 10%) and "right degree" (residuals at
    roundoff) is many decades wide, so the threshold is not delicate.

    Returns (degree, residuals) where residuals[d] is the relative RMS
    residual of the degree-d fit.
    """
    x = np.asarray(x, dtype=float)[skip:]
    error = np.asarray(error, dtype=float)[skip:]
    if x.size < max_degree + 2:
        raise ValueError("not enough points beyond the bootstrap prefix")
    scale = float(np.max(np.abs(error)))
    if scale == 0.0:
        return 0, np.zeros(max_degree + 1)
    residuals = np.empty(max_degree + 1)
    for degree in range(max_degree + 1):
        coeffs = np.polyfit(x, error, degree)
        misfit = error - np.polyval(coeffs, x)
        residuals[degree] = np.sqrt(np.mean(misfit ** 2)) / scale
    below = np.nonzero(residuals < rel_tol)[0]
    degree = int(below[0]) if below.size else int(np.argmin(residuals))
    return degree, residuals
