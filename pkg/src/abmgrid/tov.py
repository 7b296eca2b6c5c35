"""Relativistic stellar structure for a degenerate neutron gas (CGS).

The hydrostatic equilibrium of a static, spherically symmetric star in
general relativity is

    dm/dr = (4 pi / c^2) r^2 rho
    dP/dr = - G / (c^2 r^2) * (rho + P) * (m + (4 pi / c^2) r^3 P)
            / (1 - 2 G m / (c^2 r))

with m(0) = 0 and a chosen central pressure; rho(P) comes from the
degenerate-gas equation of state.  Integration proceeds outward from
the regular center (both derivatives vanish at r = 0) and stops at the
first accepted step whose pressure is zero or below: that step's mass
and radius ARE the star's M and R, with no surface interpolation.

The maximum-mass hunt exploits that M(P_central) is unimodal over the
physical range: a ternary search (two interior probes per iteration,
discarding the outer third on the losing side) narrows the central
pressure bracket geometrically.
"""
from __future__ import annotations

import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .eos import (CONSTANTS, PhysicalConstants, energy_density_from_x,
                  invert_pressure_to_x)
from .integrator import (IntegrationError, IntegratorConfig, Mode, Trajectory,
                         CallbackFailure, integrate)

__all__ = ["HorizonError", "StarSolution", "SieveResult", "SweepCell",
           "tov_derivatives", "star_config", "integrate_star",
           "ternary_maximize", "trinary_sieve", "parameter_sweep"]


class HorizonError(RuntimeError):
    """2Gm/(c^2 r) reached 1: the configuration is inside its own horizon."""


def tov_derivatives(r: float, m: float, P: float,
                    constants: PhysicalConstants = CONSTANTS):
    """(dm/dr, dP/dr) at one point of the stellar interior.

    At the regular center r = 0 both derivatives vanish.  At or below
    zero pressure the gas is absent and both derivatives are zero as
    well, which lets the step that crosses the surface complete and be
    recorded.  A configuration at or inside its own horizon raises
    :class:`HorizonError`.
    """
    if r < 0.0:
        raise ValueError("radius must be non-negative")
    if r == 0.0 or P <= 0.0:
        return 0.0, 0.0
    c2 = constants.c ** 2
    metric = 1.0 - 2.0 * constants.G * m / (c2 * r)
    if metric <= 0.0:
        raise HorizonError(
            f"2Gm/(c^2 r) >= 1 at r={r!r} cm, m={m!r} g")
    x = invert_pressure_to_x(P, constants)
    rho = energy_density_from_x(x, constants)
    four_pi_c2 = 4.0 * math.pi / c2
    dm_dr = four_pi_c2 * r * r * rho
    dP_dr = (-(constants.G / (c2 * r * r)) * (rho + P)
             * (m + four_pi_c2 * r ** 3 * P) / metric)
    return dm_dr, dP_dr


@dataclass(frozen=True)
class StarSolution:
    """One integrated star.

    M and R are the final accepted values of m and r — the step that
    crossed the surface is kept as-is (its pressure may be slightly
    negative in the trajectory record; it is flagged, never used as a
    physical pressure).
    """

    P_central: float          # erg/cm^3
    M: float                  # g
    R: float                  # cm
    steps: int
    trajectory: Trajectory
    constants: PhysicalConstants

    @property
    def M_msun(self) -> float:
        return self.M / self.constants.M_sun

    @property
    def R_km(self) -> float:
        return self.R / 1e5


def star_config(order: int, tolerance: float, dx_initial: float = 10.0,
                dx_min: float = 10.0, max_steps: int = 200_000
                ) -> IntegratorConfig:
    """Stellar defaults: start and floor at 10 cm, adaptive stepping.

    The floor guarantees termination: near the surface the pressure
    scale height collapses and the controller would otherwise shrink dx
    indefinitely instead of crossing P = 0.
    """
    return IntegratorConfig(order_ab=order, target_correction=tolerance,
                            dx_initial=dx_initial, dx_min=dx_min,
                            mode=Mode.ABM_ADAPTIVE, max_steps=max_steps)


def integrate_star(P_central: float, config: IntegratorConfig,
                   constants: PhysicalConstants = CONSTANTS,
                   sink=None) -> StarSolution:
    """Integrate one star outward from its center.

    The state vector is (m, P); integration halts at the first accepted
    step with P <= 0.  Raises :class:`HorizonError` if the enclosed
    mass traps the radius, or the engine's errors for step-budget and
    non-finite failures (each carrying the partial trajectory).
    """
    if not (P_central > 0.0 and math.isfinite(P_central)):
        raise ValueError("central pressure must be positive and finite")

    def system(r, state):
        return np.array(tov_derivatives(r, state[0], state[1], constants))

    try:
        trajectory = integrate(system, [0.0, P_central], 0.0, config,
                               halt=lambda r, state: state[1] <= 0.0,
                               sink=sink)
    except CallbackFailure as failure:
        cause = failure.__cause__
        if isinstance(cause, HorizonError):
            cause.trajectory = failure.trajectory
            raise cause from None
        raise
    final = trajectory.records[-1]
    return StarSolution(P_central=P_central, M=float(final.y_am[0]),
                        R=float(final.x_next), steps=len(trajectory),
                        trajectory=trajectory, constants=constants)


def ternary_maximize(f, lo: float, hi: float, rel_tol: float = 1e-3,
                     map_fn=map):
    """Maximum of a unimodal function by interior-third probing.

    Each iteration evaluates the two points one third in from either
    end and discards the outer third on the side of the smaller value,
    shrinking the bracket by 2/3 per iteration.  Stops when the bracket
    width falls below ``rel_tol`` of its midpoint; returns (x_star,
    iterations, evaluations) with x_star the final midpoint.
    Evaluations are memoized; the not-yet-known probes of an iteration
    are computed through ``map_fn``, so a pool's map lets the two
    probes run concurrently.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    memo = {}
    iterations = 0
    while (hi - lo) > rel_tol * abs(0.5 * (lo + hi)):
        third = (hi - lo) / 3.0
        a, b = lo + third, hi - third
        missing = [p for p in (a, b) if p not in memo]
        memo.update(zip(missing, map_fn(f, missing)))
        if memo[a] < memo[b]:
            lo = a
        else:
            hi = b
        iterations += 1
    return 0.5 * (lo + hi), iterations, len(memo)


def stable_plateau(trajectory: Trajectory, tolerance: float,
                   order_ab: int) -> slice:
    """Index slice of a star run's stable mid-body.

    A stellar integration has three regimes: a bootstrap head (ramping
    order, floored steps, and the controller's recovery overshoot), a
    long plateau where the controller holds epsilon_max near the target
    E, and a terminal dive where the collapsing pressure scale height
    drags dx monotonically down to the floor at the surface.  The
    plateau is delimited here as: from the first step at full order
    whose epsilon_max has risen to at least E/10, up to (excluding) the
    maximal terminal suffix over which dx never increases.
    """
    eps = trajectory.epsilon_max
    dxs = trajectory.dx
    n = len(dxs)
    suffix = n - 1
    while suffix > 0 and dxs[suffix] <= dxs[suffix - 1]:
        suffix -= 1
    start = None
    for index in range(order_ab, n):
        if eps[index] >= tolerance / 10.0:
            start = index
            break
    if start is None or start >= suffix:
        return slice(0, 0)
    return slice(start, suffix)


@dataclass(frozen=True)
class SieveResult:
    """Outcome of the maximum-mass hunt."""

    P_c: float                # erg/cm^3, bracket midpoint at convergence
    star: StarSolution        # the star integrated at P_c
    iterations: int
    evaluations: int          # distinct star integrations performed

    @property
    def M_msun(self) -> float:
        return self.star.M_msun

    @property
    def R_km(self) -> float:
        return self.star.R_km


def _star_mass(P_c: float, config: IntegratorConfig,
               constants: PhysicalConstants) -> float:
    """Worker for sieve probes; top-level so process pools can pickle it."""
    return integrate_star(P_c, config, constants).M


def trinary_sieve(P_lo: float, P_hi: float, config: IntegratorConfig,
                  constants: PhysicalConstants = CONSTANTS,
                  bracket_tolerance: float = 1e-3,
                  jobs: int = 1) -> SieveResult:
    """Central pressure of the maximum-mass star on [P_lo, P_hi].

    Assumes M(P_central) is unimodal on the bracket, which holds for
    this gas over the physical range.  The returned star is integrated
    at the converged bracket midpoint.  With ``jobs`` > 1 the two
    probes of each iteration run in parallel worker processes.
    """
    if not 0.0 < P_lo < P_hi:
        raise ValueError("need 0 < P_lo < P_hi")
    mass = functools.partial(_star_mass, config=config, constants=constants)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, 2)) as pool:
            P_star, iterations, evaluations = ternary_maximize(
                mass, P_lo, P_hi, bracket_tolerance, map_fn=pool.map)
    else:
        P_star, iterations, evaluations = ternary_maximize(
            mass, P_lo, P_hi, bracket_tolerance)
    star = integrate_star(P_star, config, constants)
    return SieveResult(P_c=P_star, star=star, iterations=iterations,
                       evaluations=evaluations + 1)


@dataclass(frozen=True)
class SweepCell:
    """One (order, tolerance) cell of the efficiency sweep."""

    order: int
    tolerance: float
    steps: int
    M_msun: float
    R_km: float
    rel_dM: float
    rel_dR: float
    status: str               # "ok" or a short failure tag

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _sweep_cell(args) -> SweepCell:
    """Worker for one sweep cell; top-level so process pools can pickle it."""
    order, tolerance, P_central, M_ref, R_ref, constants, dx0, dxmin = args
    config = star_config(order, tolerance, dx0, dxmin)
    try:
        star = integrate_star(P_central, config, constants)
    except (HorizonError, IntegrationError) as failure:
        tag = {"HorizonError": "horizon",
               "MaxStepsExceeded": "max-steps",
               "NonFiniteState": "non-finite"}.get(
                   type(failure).__name__, "failed")
        steps = len(getattr(failure, "trajectory", []) or [])
        return SweepCell(order=order, tolerance=tolerance, steps=steps,
                         M_msun=math.nan, R_km=math.nan, rel_dM=math.nan,
                         rel_dR=math.nan, status=tag)
    return SweepCell(order=order, tolerance=tolerance, steps=star.steps,
                     M_msun=star.M_msun, R_km=star.R_km,
                     rel_dM=abs(star.M - M_ref) / M_ref,
                     rel_dR=abs(star.R - R_ref) / R_ref,
                     status="ok")


def parameter_sweep(orders, tolerances, P_central: float,
                    reference, constants: PhysicalConstants = CONSTANTS,
                    dx_initial: float = 10.0, dx_min: float = 10.0,
                    jobs: int = 1) -> list[SweepCell]:
    """Steps-and-accuracy table over an order x tolerance grid.

    ``reference`` is (M_ref grams, R_ref cm), normally from a
    high-order, tight-tolerance run.  Cells that fail to integrate are
    reported with a failure status; the sweep continues.
    """
    M_ref, R_ref = reference
    if not (M_ref > 0.0 and R_ref > 0.0):
        raise ValueError("reference mass and radius must be positive")
    tasks = [(order, tolerance, P_central, M_ref, R_ref, constants,
              dx_initial, dx_min)
             for order in orders for tolerance in tolerances]
    if not tasks:
        raise ValueError("sweep grid is empty")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, tasks))
    return [_sweep_cell(task) for task in tasks]
