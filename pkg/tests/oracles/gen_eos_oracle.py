"""High-precision degenerate-neutron-gas EOS values for frozen test data.

Evaluates the pressure and kinetic-energy brackets, the pressure scale
K = pi m_n^4 c^5 / 3 h^3, and selected inversions at 50 significant
digits with mpmath, independently of the package implementation.

Run:  python tests/oracles/gen_eos_oracle.py
"""
import mpmath as mp

mp.mp.dps = 50

M_N = mp.mpf("1.67492749804e-24")
C = mp.mpf("2.99792458e10")
H = mp.mpf("6.62607015e-27")
G = mp.mpf("6.67430e-8")

K = mp.pi * M_N ** 4 * C ** 5 / (3 * H ** 3)
X_OF_N = (H / (2 * M_N * C))  # times (3n/pi)^(1/3)


def pressure_bracket(x):
    return x * (2 * x ** 2 - 3) * mp.sqrt(x ** 2 + 1) + 3 * mp.asinh(x)


def kinetic_bracket(x):
    return 3 * x * (2 * x ** 2 + 1) * mp.sqrt(x ** 2 + 1) - 8 * x ** 3 - 3 * mp.asinh(x)


def n_of_x(x):
    return (mp.pi / 3) * (2 * M_N * C * x / H) ** 3


def pressure(x):
    return K * pressure_bracket(x)


def rho(x):
    return M_N * C ** 2 * n_of_x(x) + K * kinetic_bracket(x)


if __name__ == "__main__":
    print(f"K = {mp.nstr(K, 20)} erg/cm^3")
    print(f"n(x=1) = {mp.nstr(n_of_x(1), 20)} cm^-3")
    print(f"P(x=1) = {mp.nstr(pressure(1), 20)} erg/cm^3")
    print(f"rho(x=1) = {mp.nstr(rho(1), 20)} erg/cm^3")
    print()
    for xs in ("1e-4", "1e-3", "1e-2", "0.1", "0.5", "1", "2", "10", "100", "1000"):
        x = mp.mpf(xs)
        pb = pressure_bracket(x)
        kb = kinetic_bracket(x)
        print(f"x={xs}: P-bracket={mp.nstr(pb, 20)}  U-bracket={mp.nstr(kb, 20)}"
              f"  U/P={mp.nstr(kb / pb, 20)}")
    print()
    # small-x leading terms
    for xs in ("1e-4", "1e-3"):
        x = mp.mpf(xs)
        print(f"x={xs}: P-bracket/(8/5 x^5) = "
              f"{mp.nstr(pressure_bracket(x) / (mp.mpf(8) / 5 * x ** 5), 20)}  "
              f"U-bracket/(12/5 x^5) = "
              f"{mp.nstr(kinetic_bracket(x) / (mp.mpf(12) / 5 * x ** 5), 20)}")
    print()
    # inversion targets
    for p_str, x0 in (("3.631382e35", "0.8"), ("1e30", "0.06"), ("1e38", "2.4")):
        p = mp.mpf(p_str)
        x = mp.findroot(lambda x: pressure(x) / p - 1, mp.mpf(x0))
        print(f"P={p_str}: x={mp.nstr(x, 20)} n={mp.nstr(n_of_x(x), 20)} "
              f"rho={mp.nstr(rho(x), 20)}")
    print()
    # Newtonian-limit test point: x = 1e-3, r = 1e5 cm, m = 1e30 g
    x = mp.mpf("1e-3")
    r = mp.mpf("1e5")
    m = mp.mpf("1e30")
    p = pressure(x)
    rh = rho(x)
    full = (-(G / (C ** 2 * r ** 2)) * (rh + p)
            * (m + 4 * mp.pi / C ** 2 * r ** 3 * p)
            / (1 - 2 * G * m / (C ** 2 * r)))
    newt = -G * rh * m / (C ** 2 * r ** 2)
    print(f"Newtonian point: P={mp.nstr(p, 20)} rho={mp.nstr(rh, 20)}")
    print(f"  dP/dr full = {mp.nstr(full, 20)}")
    print(f"  dP/dr newt = {mp.nstr(newt, 20)}  ratio={mp.nstr(full / newt, 20)}")
