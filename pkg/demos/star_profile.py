"""Integrate one neutron star and print its interior profile.

The state vector is (m, P): enclosed gravitational mass and pressure of
a zero-temperature degenerate neutron gas.  Integration starts at the
regular center and halts at the first accepted step with P <= 0 — the
stellar surface.  The printed profile shows the three regimes of the
step-size controller: the bootstrap ramp at small radius, the settled
plateau where the correction holds near the target, and the surface
approach where the collapsing pressure scale height drives dx down to
the floor.
"""
import numpy as np

from abmgrid import integrate_star, stable_plateau, star_config

P_CENTRAL = 3.631382e35   # erg/cm^3: the maximum-mass configuration
ORDER = 4
TOLERANCE = 1e-8


def main() -> None:
    star = integrate_star(P_CENTRAL, star_config(ORDER, TOLERANCE))
    trajectory = star.trajectory
    print(f"central pressure {P_CENTRAL:.6e} erg/cm^3, order {ORDER}, "
          f"target correction {TOLERANCE:.0e}")
    print()
    print(f"{'i':>5} {'r [km]':>10} {'dr [cm]':>12} {'m [M_sun]':>12} "
          f"{'P [erg/cm^3]':>14} {'epsilon':>10}")
    stride = max(len(trajectory) // 20, 1)
    picks = sorted(set(range(0, len(trajectory), stride))
                   | {len(trajectory) - 1})
    M_sun = star.constants.M_sun
    for i in picks:
        record = trajectory.records[i]
        print(f"{i:>5} {record.x_next / 1e5:>10.4f} {record.dx:>12.4e} "
              f"{record.y_am[0] / M_sun:>12.6f} {record.y_am[1]:>14.4e} "
              f"{record.epsilon_max:>10.2e}")
    print()
    window = stable_plateau(trajectory, TOLERANCE, ORDER)
    eps = trajectory.epsilon_max[window]
    m = trajectory.y[:, 0]
    r = trajectory.x
    constants = star.constants
    compactness = 2.0 * constants.G * m / (constants.c ** 2 * r)
    print(f"M = {star.M_msun:.6f} M_sun   R = {star.R_km:.4f} km   "
          f"steps = {star.steps}   evaluations = {trajectory.n_evals}")
    print(f"controller plateau: records {window.start}..{window.stop - 1}, "
          f"correction in [{eps.min():.2e}, {eps.max():.2e}] "
          f"(target {TOLERANCE:.0e})")
    print(f"peak compactness 2Gm/(c^2 r) = {compactness.max():.4f} "
          f"at r = {r[np.argmax(compactness)] / 1e5:.3f} km")


if __name__ == "__main__":
    main()
