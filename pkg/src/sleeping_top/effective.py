"""Effective potential of the reduced one degree of freedom system.

For spin rate r the relative equilibria of the symmetric top near the upright
position are the critical points of

    U_r(u) = r^2/2 * v(u)^2 + W(u^2),     v(u) = (1 - sqrt(1 - u^2)) / u,

on (-1, 1).  With u = k(v) = 2v/(1+v^2) this becomes
S(r, v) = r^2 v^2 / 2 + f(v^2), and dS/dv = v (r^2 + 2 f'(v^2)), so the
nonzero critical points are the roots of the bracketed factor.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .potential import DomainError, PotentialW, f_transform

CLASSIFY_TOL = 1e-9
ROOT_TOL = 1e-12
DEFAULT_V_MAX = 0.95
MERGE_V = 1e-7

MIN, MAX, DEGENERATE = "Min", "Max", "Degenerate"


def _check_u(u: float) -> float:
    u = float(u)
    if not abs(u) < 1.0:
        raise DomainError(f"|u| must be < 1, got u={u}")
    return u


def _check_v(v: float) -> float:
    v = float(v)
    if not abs(v) < 1.0:
        raise DomainError(f"|v| must be < 1, got v={v}")
    return v


def v_of_u(u: float) -> float:
    """(1 - sqrt(1-u^2))/u extended by v(0) = 0.

    Evaluated in the rationalized form u / (1 + sqrt(1-u^2)), which has no
    cancellation near u = 0.
    """
    u = _check_u(u)
    return u / (1.0 + math.sqrt(1.0 - u * u))


def k_of_v(v: float) -> float:
    """Inverse of :func:`v_of_u` on |v| < 1."""
    v = float(v)
    return 2.0 * v / (1.0 + v * v)


def _v_derivs(u: float) -> Tuple[float, float, float]:
    c = math.sqrt(1.0 - u * u)
    q = 1.0 + c
    return u / q, 1.0 / (c * q), u * (1.0 + 2.0 * c) / (c**3 * q * q)


@dataclass(frozen=True)
class EffectivePotential:
    W: PotentialW
    r: float

    def __post_init__(self):
        # the sign of r is immaterial, only r^2 enters
        object.__setattr__(self, "r", abs(float(self.r)))

    def __call__(self, u: float, order: int = 0) -> float:
        return u_eval(self, u, order)


def u_eval(ep: EffectivePotential, u: float, order: int = 0) -> float:
    """U_r(u) and its first two u-derivatives (exact chain rule, also at u=0)."""
    u = _check_u(u)
    r2 = ep.r * ep.r
    t = u * u
    v, v1, v2 = _v_derivs(u)
    if order == 0:
        return 0.5 * r2 * v * v + ep.W._derivs(t, 0)
    if order == 1:
        return r2 * v * v1 + 2.0 * u * ep.W._derivs(t, 1)
    if order == 2:
        return r2 * (v1 * v1 + v * v2) + 2.0 * ep.W._derivs(t, 1) + 4.0 * t * ep.W._derivs(t, 2)
    raise ValueError(f"order must be 0, 1 or 2, got {order}")


def s_eval(W: PotentialW, r: float, v: float, order: int = 0) -> float:
    """S(r, v) = U_r(k(v)) and its v-derivatives."""
    v = _check_v(v)
    r2 = float(r) ** 2
    s = v * v
    if order == 0:
        return 0.5 * r2 * s + f_transform(W, s, 0)
    if order == 1:
        return v * (r2 + 2.0 * f_transform(W, s, 1))
    if order == 2:
        return r2 + 2.0 * f_transform(W, s, 1) + 4.0 * s * f_transform(W, s, 2)
    raise ValueError(f"order must be 0, 1 or 2, got {order}")


def branch_residual(W: PotentialW, r: float, v: float) -> float:
    """r^2 + 2 f'(v^2); its roots in v > 0 are the nonzero critical points."""
    return float(r) ** 2 + 2.0 * f_transform(W, float(v) ** 2, 1)


def classify(second_deriv: float, tol: float = CLASSIFY_TOL) -> str:
    if second_deriv > tol:
        return MIN
    if second_deriv < -tol:
        return MAX
    return DEGENERATE


@dataclass(frozen=True)
class CriticalPoint:
    u: float
    r: float
    kind: str
    value: float
    second_deriv: float


def bisect(func: Callable[[float], float], a: float, b: float, fa: float | None = None,
           fb: float | None = None, ftol: float = ROOT_TOL) -> float:
    """Bisection on a sign-change bracket [a, b].

    Stops when |func(x)| < ftol or the bracket cannot be split any further in
    floating point.
    """
    fa = func(a) if fa is None else fa
    fb = func(b) if fb is None else fb
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise ValueError(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    while True:
        m = 0.5 * (a + b)
        fm = func(m)
        if abs(fm) < ftol or m <= a or m >= b:
            # float spacing exhausted: keep whichever point has the smallest residual
            return min((abs(fm), m), (abs(fa), a), (abs(fb), b))[1]
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm


def _bracket_roots(func: Callable[[float], float], dfunc: Callable[[float], float],
                   grid: np.ndarray) -> List[Tuple[float, float]]:
    """Sign-change brackets of func on grid, splitting cells that hide a root pair."""
    vals = [func(x) for x in grid]
    dvals = [dfunc(x) for x in grid]
    brackets = []
    for i in range(len(grid) - 1):
        a, b, fa, fb = grid[i], grid[i + 1], vals[i], vals[i + 1]
        if fa == 0.0:
            brackets.append((a, a))
            continue
        if (fa > 0) != (fb > 0) and fb != 0.0:
            brackets.append((a, b))
            continue
        # equal signs: an interior extremum of func may still cross zero twice
        da, db = dvals[i], dvals[i + 1]
        if (da > 0) != (db > 0) and da != 0.0 and db != 0.0:
            m = bisect(dfunc, a, b, da, db, ftol=0.0)
            fm = func(m)
            if fb != 0.0 and (fm > 0) != (fa > 0):
                warnings.warn(f"two roots in grid cell [{a:.6g}, {b:.6g}]; grid too coarse",
                              RuntimeWarning, stacklevel=3)
                brackets.extend([(a, m), (m, b)])
    if vals[-1] == 0.0:
        brackets.append((grid[-1], grid[-1]))
    return brackets


def find_branch_roots(W: PotentialW, r: float, v_max: float = DEFAULT_V_MAX,
                      grid_n: int = 256) -> List[float]:
    """All roots v in (0, v_max] of r^2 + 2 f'(v^2), in increasing order."""
    if not 0.0 < v_max < 1.0:
        raise ValueError(f"v_max must lie in (0, 1), got {v_max}")
    if grid_n < 16:
        raise ValueError(f"grid_n must be >= 16, got {grid_n}")
    r2 = float(r) ** 2

    def func(v):
        return r2 + 2.0 * f_transform(W, v * v, 1)

    def dfunc(v):
        return 4.0 * v * f_transform(W, v * v, 2)

    # v = 0 itself is excluded; it is the trivial critical point
    grid = np.linspace(0.0, v_max, grid_n + 1)
    grid[0] = v_max * 1e-9
    roots = []
    for a, b in _bracket_roots(func, dfunc, grid):
        v = a if a == b else bisect(func, a, b)
        # roots this close to v = 0 are the trivial critical point itself (r at r0)
        if v > MERGE_V:
            roots.append(v)
    return roots


def critical_points(ep: EffectivePotential, v_max: float = DEFAULT_V_MAX,
                    grid_n: int = 256) -> List[CriticalPoint]:
    """u = 0 and all critical points with v in (0, v_max], classified by d^2S/dv^2."""
    W, r = ep.W, ep.r
    out = []
    for v in [0.0] + find_branch_roots(W, r, v_max, grid_n):
        d2 = s_eval(W, r, v, 2)
        u = k_of_v(v)
        out.append(CriticalPoint(u=u, r=r, kind=classify(d2), value=u_eval(ep, u, 0),
                                 second_deriv=d2))
    return out
