"""Stability of the sleeping top and the branch of relative equilibria.

The verdict depends only on W'(0) and W''(0):

* W'(0) > 0: the upright top is stable for every spin rate (case I).
* W'(0) < 0, W''(0) > W'(0): stable above r0 = sqrt(-8 W'(0)), and a branch
  of stable relative equilibria appears as r drops below r0 (case II).
* W'(0) < 0, W''(0) < W'(0): unstable below r0, and a branch of unstable
  relative equilibria exists above r0 (case III).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .effective import (DEFAULT_V_MAX, MAX, MIN, bisect, branch_residual, classify,
                        find_branch_roots, k_of_v, s_eval)
from .potential import PotentialW, f_transform, w_derivs0

CASE_TOL = 1e-10

CASE_I, CASE_II, CASE_III, CASE_DEGENERATE = "I", "II", "III", "Degenerate"
STABLE, UNSTABLE, DEGENERATE = "stable", "unstable", "degenerate"


class BifurcationError(ValueError):
    """Raised when a branch is requested for a top without a bifurcation."""


@dataclass(frozen=True)
class CaseReport:
    case: str
    w1: float
    w2: float
    r0: Optional[float] = None


@dataclass(frozen=True)
class BranchSample:
    r: float
    u: float
    kind: str


@dataclass
class BifurcationDiagram:
    report: CaseReport
    trunk: List[Tuple[float, str]] = field(default_factory=list)
    branch: List[BranchSample] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "report": asdict(self.report),
            "trunk": [{"r": r, "stability": s} for r, s in self.trunk],
            "branch": [asdict(b) for b in self.branch],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BifurcationDiagram":
        return cls(report=CaseReport(**d["report"]),
                   trunk=[(t["r"], t["stability"]) for t in d["trunk"]],
                   branch=[BranchSample(**b) for b in d["branch"]])


def classify_top(W: PotentialW, tol: float = CASE_TOL) -> CaseReport:
    w1, w2 = w_derivs0(W)
    r0 = math.sqrt(-8.0 * w1) if w1 < -tol else None
    if w1 > tol:
        case = CASE_I
    elif w1 < -tol and w2 - w1 > tol:
        case = CASE_II
    elif w1 < -tol and w2 - w1 < -tol:
        case = CASE_III
    else:
        case = CASE_DEGENERATE
    return CaseReport(case=case, w1=w1, w2=w2, r0=r0)


def trunk_stability(W: PotentialW, r: float) -> str:
    """Stability of u = 0 from the sign of r^2 + 8 W'(0)."""
    kind = classify(s_eval(W, r, 0.0, 2))
    return {MIN: STABLE, MAX: UNSTABLE}.get(kind, DEGENERATE)


def branch_point(W: PotentialW, r: float, v_max: float = DEFAULT_V_MAX,
                 grid_n: int = 256, report: CaseReport | None = None) -> Optional[BranchSample]:
    """Point u(r) of the branch emanating from u = 0 at r0, or None.

    The linearization v^2 ~ (r0^2 - r^2) / (2 f''(0)) decides on which side of
    r0 the branch lives.  The root itself is found by bisection in v so that a
    non-monotone f' is handled; the smallest positive root is the one connected
    to u = 0.
    """
    report = report or classify_top(W)
    if report.case not in (CASE_II, CASE_III):
        raise BifurcationError(f"case {report.case} has no bifurcating branch")
    r = abs(float(r))
    f2 = f_transform(W, 0.0, 2)
    seed = (report.r0**2 - r * r) / (2.0 * f2)
    if not seed > 0.0:
        return None

    v_seed = math.sqrt(seed)
    root = None
    if v_seed < v_max:
        root = _seeded_root(W, r, v_seed, v_max)
    if root is None:
        roots = find_branch_roots(W, r, v_max, grid_n)
        if not roots:
            return None
        root = roots[0]
    d2 = s_eval(W, r, root, 2)
    kind = classify(d2)
    if kind not in (MIN, MAX):
        return None
    return BranchSample(r=r, u=k_of_v(root), kind=kind)


def _seeded_root(W: PotentialW, r: float, v_seed: float, v_max: float) -> Optional[float]:
    # grow a bracket outwards from the linearized guess; give up at the window edges
    def func(v):
        return branch_residual(W, r, v)

    f0 = func(v_max * 1e-9)
    lo, hi = v_seed, v_seed
    for _ in range(60):
        lo, hi = max(lo / 1.5, v_max * 1e-9), min(hi * 1.5, v_max)
        flo, fhi = func(lo), func(hi)
        # only accept a bracket whose lower end is on the same side as v -> 0
        if (flo > 0) == (f0 > 0) and (fhi > 0) != (f0 > 0):
            return bisect(func, lo, hi, flo, fhi)
        if lo == v_max * 1e-9 and hi == v_max:
            break
    return None


def bifurcation_diagram(W: PotentialW, r_min: float, r_max: float, steps: int,
                        v_max: float = DEFAULT_V_MAX, workers: int | None = None) -> BifurcationDiagram:
    if not 0.0 <= r_min < r_max:
        raise ValueError(f"need 0 <= r_min < r_max, got [{r_min}, {r_max}]")
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    report = classify_top(W)
    grid = np.linspace(r_min, r_max, steps)

    def point(r):
        r = float(r)
        sample = None
        if report.case in (CASE_II, CASE_III):
            sample = branch_point(W, r, v_max=v_max, report=report)
        return (r, trunk_stability(W, r)), sample

    # pool.map keeps grid order, so the output is deterministic
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(point, grid))
    return BifurcationDiagram(report=report, trunk=[t for t, _ in results],
                              branch=[s for _, s in results if s is not None])


def trunk_flip(diagram: BifurcationDiagram) -> Optional[float]:
    """Midpoint of the first grid cell where the trunk stability changes."""
    for (r_a, s_a), (r_b, s_b) in zip(diagram.trunk, diagram.trunk[1:]):
        if s_a != s_b:
            return 0.5 * (r_a + r_b)
    return None
