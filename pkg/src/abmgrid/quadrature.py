"""Lagrange quadrature weights on arbitrarily spaced nodes.

An Adams step advances y through the integral of an interpolating
polynomial built on the recent derivative history.  Writing the node
abscissae relative to the current point (the most recent accepted node
sits at 0; explicit histories lie at negative offsets, and an implicit
stencil adds one node at +dx), the weight of node j is

    w_j = integral_0^dx  phi_j(t) dt / phi_j(t_j)

where phi_j(t) = prod_{k != j} (t - t_k) is the master product
Phi(t) = prod_k (t - t_k) with the (t - t_j) factor divided out.

The division is done by synthetic division of the dense coefficient
array, which is exact up to roundoff because t_j is a root of Phi; the
remainder is asserted to be negligible relative to the coefficient
scale.  Weights are recomputed from scratch for whatever node spacing
the step-size controller produced, so nothing here assumes a uniform
grid.
"""
import numpy as np

__all__ = ["quadrature_weights"]


def _poly_from_roots(roots):
    """Ascending coefficients of prod_k (t - roots[k])."""
    coeffs = np.array([1.0])
    for r in roots:
        coeffs = np.convolve(coeffs, np.array([-r, 1.0]))
    return coeffs


def _deflate(coeffs, root):
    """Divide the polynomial by (t - root) via synthetic division.

    Returns the quotient's ascending coefficients.  The remainder must
    vanish because ``root`` is a root of the polynomial; a remainder
    above 1e-9 of the coefficient scale indicates corrupted input
    (e.g. duplicated nodes) and trips the assertion.
    """
    n = len(coeffs) - 1
    quotient = np.empty(n)
    acc = coeffs[n]
    magnitude = abs(acc)  # running bound on the Horner term sizes
    for k in range(n - 1, -1, -1):
        quotient[k] = acc
        acc = coeffs[k] + root * acc
        magnitude = abs(coeffs[k]) + abs(root) * magnitude
    remainder = acc
    assert abs(remainder) <= 1e-9 * max(1.0, magnitude), (
        f"synthetic division remainder {remainder!r} exceeds 1e-9 of "
        f"evaluation scale {magnitude!r}")
    return quotient


def quadrature_weights(offsets, dx):
    """Integration weights for derivative nodes at ``offsets``.

    Parameters
    ----------
    offsets : array_like
        Node positions relative to the current point, strictly
        increasing.  An explicit (predictor) stencil ends at 0; an
        implicit (corrector) stencil ends at ``dx``.
    dx : float
        Upper integration limit; the step being taken.

    Returns
    -------
    numpy.ndarray
        One weight per node, in node order.  The weights reproduce the
        integral of any polynomial of degree < len(offsets) exactly, so
        they always sum to dx (the integral of 1).
    """
    offsets = np.asarray(offsets, dtype=float)
    if offsets.ndim != 1 or offsets.size == 0:
        raise ValueError("offsets must be a non-empty 1-D array")
    if np.any(np.diff(offsets) <= 0.0):
        raise ValueError("offsets must be strictly increasing")
    master = _poly_from_roots(offsets)
    weights = np.empty(offsets.size)
    for j, t_j in enumerate(offsets):
        basis = _deflate(master, t_j)
        # integral of sum c_k t^k from 0 to dx
        powers = dx ** np.arange(1, basis.size + 1)
        integral = float(np.sum(basis * powers / np.arange(1, basis.size + 1)))
        denom = float(np.polyval(basis[::-1], t_j))
        weights[j] = integral / denom
    return weights
