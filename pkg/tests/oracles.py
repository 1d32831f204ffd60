"""Independent reference computations used by the tests.

Nothing here calls into the code paths under test beyond constructing W.
"""
import numpy as np


def u_r_grid(W, r, u):
    """U_r on a numpy grid straight from the defining formula."""
    u = np.asarray(u, float)
    safe = np.where(u == 0, 1.0, u)
    v = np.where(u == 0, 0.0, (1 - np.sqrt(1 - u * u)) / safe)
    if W.kind == "lagrange":
        w = np.sqrt(1 - u * u)
    elif W.kind == "kirchhoff":
        w = W.c + (1 - W.c) * u * u
    else:
        w = np.polynomial.polynomial.polyval(u * u, W.coeffs)
    return 0.5 * r * r * v * v + w + W.offset


def grid_local_minima(W, r, u_max, n=100_001):
    """Interior strict local minima of U_r on a symmetric uniform grid."""
    u = np.linspace(-u_max, u_max, n)
    vals = u_r_grid(W, r, u)
    inner = (vals[1:-1] < vals[:-2]) & (vals[1:-1] <= vals[2:])
    return u[1:-1][inner]


def lagrange_branch(r):
    """Nonzero critical point of U_r for W(t) = sqrt(1-t), valid for 1 < r < 2."""
    return np.sqrt(r * (2 - r))


def central(func, x, h):
    return (func(x + h) - func(x - h)) / (2 * h)


def v_series(u):
    return u / 2 + u**3 / 8 + u**5 / 16
