"""
Watching the top fall
=====================

The classification predicts stability from two derivatives.  Here we check
it the hard way: nudge the top by 1e-3 and integrate.  Below r0 = 2 the
upright Lagrange top escapes, above it the nudge stays small, and the
off-axis branch point is stable.
"""

import numpy as np

from sleeping_top import (IntegratorConfig, PotentialW, ReducedSystem, SphereSystem, embed_f,
                          integrate, stability_probe)

W = PotentialW.lagrange()

for r, u_star in [(3.0, 0.0), (1.9, 0.0), (1.9, np.sqrt(0.19))]:
    verdict = stability_probe(W, r, u_star, delta=1e-3, T=200)
    print(f"r = {r}, u* = {u_star:.5f}: {verdict}")

# The escape in numbers: how far does u get from a tiny kick at r = 1.9?
traj = integrate(ReducedSystem(W, 1.9), (1e-3, 0.0), 200.0)
print("r = 1.9: max |u| =", np.max(np.abs(traj.component("u"))))

# The full magnetic sphere system.  Starting on the relative equilibrium the
# tip circles the axis at constant height, and energy and momentum are
# conserved to the integrator tolerance.
cfg = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-10)
traj = integrate(SphereSystem(W, 1.8), embed_f(1.8, 0.6, 0.0), 100.0, cfg)
x, y = traj.component("x"), traj.component("y")
print("max |x^2+y^2 - 0.36| =", np.max(np.abs(x * x + y * y - 0.36)))
print("max energy drift   =", np.max(np.abs(traj.energy_drift)))
print("max moment drift   =", np.max(np.abs(traj.moment_drift)))
