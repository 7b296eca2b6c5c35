"""Exact rational values of the quartic-derivative test problem.

The problem is y'(x) = (x-1)(x-2)(x-3)(x-4) with y(1/2) = 1; its exact
solution is the quintic

    y(x) = x^5/5 - 5x^4/2 + 35x^3/3 - 25x^2 + 24x - 727/120.

This script evaluates y and y' at reference points with fractions.Fraction
so the frozen test constants are independent of any float evaluation
order in the package.

Run:  python tests/oracles/gen_poly_oracle.py
"""
from fractions import Fraction as F

COEFFS = [F(-727, 120), F(24), F(-25), F(35, 3), F(-5, 2), F(1, 5)]  # ascending


def y_exact(x):
    acc = F(0)
    for c in reversed(COEFFS):
        acc = acc * x + c
    return acc


def y_prime(x):
    return (x - 1) * (x - 2) * (x - 3) * (x - 4)


if __name__ == "__main__":
    assert y_exact(F(1, 2)) == 1
    for xs in (F(1, 2), F(1), F(3, 2), F(2), F(5, 2), F(3), F(4), F(5)):
        y = y_exact(xs)
        dy = y_prime(xs)
        print(f"x={xs}: y={y} = {float(y)!r}   y'={dy} = {float(dy)!r}")
