"""Stellar-structure tests: derivatives, single stars, sieve, sweep.

Reference values at the two probe points come from the 50-digit EOS
oracle (tests/oracles/gen_eos_oracle.py); star-level numbers were
measured once with this package and frozen as regression pins.
"""
import math

import numpy as np
import pytest

import abmgrid.tov as tov
from abmgrid import (
    CONSTANTS,
    HorizonError,
    MaxStepsExceeded,
    SieveResult,
    StarSolution,
    Trajectory,
    integrate_star,
    parameter_sweep,
    stable_plateau,
    star_config,
    ternary_maximize,
    tov_derivatives,
    trinary_sieve,
)
from abmgrid.eos import energy_density_from_x, invert_pressure_to_x

P_CENTRAL = 3.631382e35        # erg/cm^3, near the maximum-mass star

# oracle state at x = 0.5 (clean double-precision regime)
P_X05 = CONSTANTS.pressure_scale * 0.046092989241441782238
RHO_X05 = (CONSTANTS.m_n * CONSTANTS.c ** 2
           * (0.5 / CONSTANTS.x_coefficient) ** 3
           + CONSTANTS.pressure_scale * 0.071940999508453065967)

# oracle state at x = 1e-3 (Newtonian-limit probe)
P_NEWT = 1.097660212593822725e+21
DPDR_NEWT_ORACLE = -40817661933222105634.0
RATIO_GR_ORACLE = 1.001487641546617288


@pytest.fixture(scope="module")
def reference_star():
    return integrate_star(P_CENTRAL, star_config(4, 1e-8))


# --- structure derivatives --------------------------------------------

def test_center_is_regular():
    assert tov_derivatives(0.0, 0.0, P_CENTRAL) == (0.0, 0.0)


def test_vacuum_has_no_gradients():
    assert tov_derivatives(1e6, 1e33, 0.0) == (0.0, 0.0)
    assert tov_derivatives(1e6, 1e33, -1e20) == (0.0, 0.0)


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        tov_derivatives(-1.0, 0.0, P_CENTRAL)


def test_trapped_configuration_raises():
    # 2Gm/(c^2 r) > 1 for m = 1e33 g inside r = 1e5 cm
    with pytest.raises(HorizonError):
        tov_derivatives(1e5, 1e33, 1e30)


def test_mass_gradient_matches_oracle_density():
    # at x = 0.5 the pressure inversion is clean, so dm/dr agrees with
    # 4 pi r^2 rho / c^2 built from the oracle density to ~1e-13
    dm, _ = tov_derivatives(1e5, 1e30, P_X05)
    expected = 4.0 * math.pi / CONSTANTS.c ** 2 * 1e10 * RHO_X05
    assert dm == pytest.approx(expected, rel=1e-12)


def test_newtonian_point_against_oracle():
    # at x = 1e-3 the closed-form brackets lose ~4 digits to
    # cancellation, which bounds the achievable agreement here
    dm, dP = tov_derivatives(1e5, 1e30, P_NEWT)
    assert dP == pytest.approx(DPDR_NEWT_ORACLE, rel=5e-4)
    rho_oracle = 5.4883046695668056631e+27
    expected_dm = 4.0 * math.pi / CONSTANTS.c ** 2 * 1e10 * rho_oracle
    assert dm == pytest.approx(expected_dm, rel=5e-4)


def test_relativistic_correction_factor():
    # dividing out the Newtonian gradient built from the same density
    # isolates the three GR correction factors; at this point the
    # metric term dominates and the oracle puts the ratio at 1.0014876
    r, m = 1e5, 1e30
    _, dP = tov_derivatives(r, m, P_NEWT)
    rho = energy_density_from_x(invert_pressure_to_x(P_NEWT))
    newtonian = -CONSTANTS.G * m * (rho / CONSTANTS.c ** 2) / r ** 2
    assert dP / newtonian == pytest.approx(RATIO_GR_ORACLE, rel=1e-9)


def test_gravity_pulls_inward():
    dm, dP = tov_derivatives(2e5, 5e32, 1e33)
    assert dm > 0.0
    assert dP < 0.0


# --- single-star integration ------------------------------------------

def test_star_config_defaults():
    config = star_config(6, 1e-8)
    assert config.order_ab == 6
    assert config.target_correction == 1e-8
    assert config.dx_initial == 10.0
    assert config.dx_min == 10.0
    assert config.max_steps == 200_000


def test_central_pressure_validation():
    config = star_config(4, 1e-6)
    for bad in (0.0, -1e35, math.inf, math.nan):
        with pytest.raises(ValueError):
            integrate_star(bad, config)


def test_reference_star_regression(reference_star):
    # frozen from this package: the half-solar-mass-scale star at the
    # maximum-mass central pressure
    star = reference_star
    assert star.M_msun == pytest.approx(0.7099981422145849, rel=1e-10)
    assert star.R_km == pytest.approx(9.16154809371068, rel=1e-10)
    assert star.steps == 519
    assert star.P_central == P_CENTRAL
    assert star.R == star.trajectory.final_x
    assert star.M == star.trajectory.final_y[0]


def test_star_costs_two_evaluations_per_step(reference_star):
    trajectory = reference_star.trajectory
    assert trajectory.n_evals == 2 * len(trajectory) + 1


def test_star_halts_by_crossing_the_surface(reference_star):
    trajectory = reference_star.trajectory
    assert trajectory.halted
    pressures = trajectory.y[:, 1]
    assert pressures[-1] <= 0.0
    # interior pressure decreases strictly until the terminal record
    assert np.all(np.diff(pressures[:-1]) < 0.0)


def test_star_mass_profile_is_monotone(reference_star):
    masses = reference_star.trajectory.y[:, 0]
    assert np.all(np.diff(masses) >= 0.0)
    assert masses[0] >= 0.0


def test_star_stays_outside_its_horizon(reference_star):
    trajectory = reference_star.trajectory
    compactness = (2.0 * CONSTANTS.G * trajectory.y[:, 0]
                   / (CONSTANTS.c ** 2 * trajectory.x))
    assert np.max(compactness) < 1.0
    # the profile peaks in the interior, then relaxes to the surface value
    assert np.max(compactness) == pytest.approx(0.2848, rel=1e-2)
    assert compactness[-1] == pytest.approx(0.22892855918488236, rel=1e-9)


def test_first_step_hits_the_floor(reference_star):
    # the m component starts at zero, so the first fractional
    # correction is measured absolutely and is enormous; the floor is
    # what keeps the controller from collapsing dx
    first = reference_star.trajectory.records[0]
    assert first.floored
    assert first.dx == 10.0


def test_unit_conversions(reference_star):
    star = reference_star
    assert star.M_msun == star.M / CONSTANTS.M_sun
    assert star.R_km == star.R / 1e5


def test_coarse_floor_star_regression():
    # 100x coarser floor: same physics to ~1e-5, far fewer steps
    star = integrate_star(P_CENTRAL, star_config(4, 1e-6, dx_initial=1000.0,
                                                 dx_min=1000.0))
    assert star.steps == 149
    assert star.M_msun == pytest.approx(0.70999821, rel=1e-6)
    assert star.R_km == pytest.approx(9.15942, rel=1e-6)


def test_extreme_pressure_star_is_one_step():
    # at 1e42 erg/cm^3 the pressure scale height is far below the
    # floor, so the very first accepted step crosses the surface
    star = integrate_star(1e42, star_config(4, 1e-6, dx_initial=1000.0,
                                            dx_min=1000.0))
    assert star.steps == 1
    assert star.trajectory.halted
    assert star.R == 1000.0


def test_horizon_failure_carries_partial_trajectory(monkeypatch):
    real = tov.tov_derivatives

    def trapped(r, m, P, constants=CONSTANTS):
        if r > 5000.0:
            raise HorizonError("synthetic horizon")
        return real(r, m, P, constants)

    monkeypatch.setattr(tov, "tov_derivatives", trapped)
    with pytest.raises(HorizonError) as excinfo:
        integrate_star(P_CENTRAL, star_config(4, 1e-6, dx_initial=1000.0,
                                              dx_min=1000.0))
    assert len(excinfo.value.trajectory) >= 1


# --- plateau diagnostics ----------------------------------------------

def test_plateau_of_loose_tolerance_star():
    star = integrate_star(P_CENTRAL, star_config(4, 1e-2))
    window = stable_plateau(star.trajectory, 1e-2, 4)
    assert window == slice(9, 23)
    eps = star.trajectory.epsilon_max[window]
    assert np.all(eps >= 1e-3)
    assert np.all(eps <= 1e-1)
    # beyond the window the terminal dive never grows dx again
    dx = star.trajectory.dx
    assert np.all(np.diff(dx[window.stop:]) <= 0.0)


def test_plateau_entry_requires_full_order():
    star = integrate_star(P_CENTRAL, star_config(4, 1e-2))
    window = stable_plateau(star.trajectory, 1e-2, 4)
    assert window.start >= 4


def test_plateau_is_empty_when_target_is_never_approached():
    star = integrate_star(P_CENTRAL, star_config(4, 1e-2))
    # against an absurdly large target the run never rises to E/10
    window = stable_plateau(star.trajectory, 1e25, 4)
    assert window == slice(0, 0)


# --- maximum-mass sieve -----------------------------------------------

def test_ternary_maximize_on_a_quadratic():
    x_star, iterations, evaluations = ternary_maximize(
        lambda x: -(x - 2.0) ** 2, 0.0, 5.0)
    assert abs(x_star - 2.0) <= 2e-3
    assert iterations == 20   # 5 * (2/3)^k <= 1e-3 * midpoint
    assert evaluations == 40  # two fresh probes per iteration


def test_ternary_maximize_evaluation_accounting():
    calls = []

    def probe(x):
        calls.append(x)
        return -(x - 2.0) ** 2

    _, iterations, evaluations = ternary_maximize(probe, 0.0, 5.0)
    assert evaluations == len(calls)
    assert len(set(calls)) == len(calls)  # memo never recomputes


def test_ternary_maximize_batches_probes_through_map_fn():
    batches = []

    def batch_map(f, xs):
        xs = list(xs)
        batches.append(len(xs))
        return [f(x) for x in xs]

    _, iterations, _ = ternary_maximize(lambda x: -(x - 2.0) ** 2,
                                        0.0, 5.0, map_fn=batch_map)
    assert len(batches) == iterations
    assert all(1 <= size <= 2 for size in batches)


def test_ternary_maximize_rejects_bad_bracket():
    with pytest.raises(ValueError):
        ternary_maximize(lambda x: x, 1.0, 1.0)


@pytest.fixture(scope="module")
def fast_sieve():
    config = star_config(4, 1e-6, dx_initial=1000.0, dx_min=1000.0)
    return trinary_sieve(2e35, 6e35, config, bracket_tolerance=0.02)


def test_sieve_finds_the_mass_peak(fast_sieve):
    result = fast_sieve
    assert result.P_c == pytest.approx(3.624278e35, rel=1e-6)
    assert abs(result.P_c / P_CENTRAL - 1.0) < 2.5e-3
    assert result.M_msun == pytest.approx(0.70999813, rel=1e-6)
    assert result.iterations == 10
    assert result.evaluations == 21  # 2 per iteration + the final star
    assert result.star.P_central == result.P_c


def test_sieve_parallel_probes_match_serial(fast_sieve):
    config = star_config(4, 1e-6, dx_initial=1000.0, dx_min=1000.0)
    parallel = trinary_sieve(2e35, 6e35, config, bracket_tolerance=0.02,
                             jobs=2)
    assert parallel.P_c == fast_sieve.P_c
    assert parallel.star.M == fast_sieve.star.M
    assert parallel.evaluations == fast_sieve.evaluations


def test_sieve_rejects_bad_bracket():
    config = star_config(4, 1e-6)
    with pytest.raises(ValueError):
        trinary_sieve(0.0, 1e36, config)
    with pytest.raises(ValueError):
        trinary_sieve(1e36, 1e35, config)


# --- order/tolerance sweep --------------------------------------------

def test_sweep_reports_steps_and_agreement(reference_star):
    reference = (reference_star.M, reference_star.R)
    cells = parameter_sweep([4], [1e-4, 1e-6], P_CENTRAL, reference,
                            dx_initial=1000.0, dx_min=1000.0)
    assert [(cell.order, cell.tolerance) for cell in cells] == [
        (4, 1e-4), (4, 1e-6)]
    for cell in cells:
        assert cell.ok
        assert cell.steps > 0
        assert cell.rel_dM < 1e-4
        assert cell.rel_dR < 1e-3


def test_sweep_continues_past_failed_cells():
    # a central pressure beyond float range for the EOS overflows the
    # density on the first evaluation and is reported, not raised
    cells = parameter_sweep([4], [1e-6], 1e308, (1.0, 1.0),
                            dx_initial=1000.0, dx_min=1000.0)
    assert cells[0].status == "non-finite"
    assert not cells[0].ok
    assert math.isnan(cells[0].M_msun)
    assert cells[0].steps == 0


def test_sweep_tags_horizon_and_step_budget(monkeypatch):
    def claustrophobic(P_c, config, constants, sink=None):
        raise HorizonError("synthetic")

    monkeypatch.setattr(tov, "integrate_star", claustrophobic)
    cells = parameter_sweep([4], [1e-6], P_CENTRAL, (1.0, 1.0))
    assert cells[0].status == "horizon"

    def exhausted(P_c, config, constants, sink=None):
        raise MaxStepsExceeded("synthetic", Trajectory(0.0, np.zeros(2)))

    monkeypatch.setattr(tov, "integrate_star", exhausted)
    cells = parameter_sweep([4], [1e-6], P_CENTRAL, (1.0, 1.0))
    assert cells[0].status == "max-steps"


def test_sweep_validates_inputs():
    with pytest.raises(ValueError):
        parameter_sweep([4], [1e-6], P_CENTRAL, (0.0, 1.0))
    with pytest.raises(ValueError):
        parameter_sweep([], [1e-6], P_CENTRAL, (1.0, 1.0))


def test_sweep_parallel_matches_serial(reference_star):
    reference = (reference_star.M, reference_star.R)
    serial = parameter_sweep([3, 4], [1e-4], P_CENTRAL, reference,
                             dx_initial=1000.0, dx_min=1000.0)
    parallel = parameter_sweep([3, 4], [1e-4], P_CENTRAL, reference,
                               dx_initial=1000.0, dx_min=1000.0, jobs=2)
    assert [(c.order, c.steps, c.M_msun) for c in serial] == [
        (c.order, c.steps, c.M_msun) for c in parallel]
