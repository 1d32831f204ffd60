"""
Which tops can sleep?
=====================

The upright ("sleeping") top is governed by two numbers: the slope and the
curvature of the profile function W at t = 0.  This script classifies the
built-in tops and a few polynomial ones, then shows where the upright
position changes from a minimum to a maximum of the effective potential.
"""

import numpy as np

from sleeping_top import EffectivePotential, PotentialW, classify_top, critical_points

# The heavy symmetric top, the Kirchhoff family and two hand-made polynomials.
tops = {
    "lagrange": PotentialW.lagrange(),
    "kirchhoff:0.5": PotentialW.kirchhoff(0.5),
    "kirchhoff:2": PotentialW.kirchhoff(2.0),
    "poly:1,-1,-4": PotentialW.polynomial([1, -1, -4]),
    "poly:0,0": PotentialW.polynomial([0, 0]),
}

for name, W in tops.items():
    rep = classify_top(W)
    r0 = "none" if rep.r0 is None else f"{rep.r0:.6f}"
    print(f"{name:>14}  case {rep.case:<10} W'(0)={rep.w1:+.3f}  W''(0)={rep.w2:+.3f}  r0={r0}")

# For the Lagrange top r0 = 2.  Above it the upright top is a minimum of U_r,
# below it a maximum with a new minimum off the axis.
W = tops["lagrange"]
for r in (3.0, 2.0, 1.8, 1.2):
    pts = critical_points(EffectivePotential(W, r))
    desc = ", ".join(f"u={p.u:.4f} ({p.kind})" for p in pts)
    print(f"r = {r}: {desc}")

# The off-axis minimum of the Lagrange top has a closed form.
r = 1.8
print("closed form sqrt(r(2-r)) =", np.sqrt(r * (2 - r)))
