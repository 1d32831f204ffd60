"""
The Hamiltonian Hopf picture
============================

Sweep the spin rate r, mark the stability of the upright top, and trace the
branch of relative equilibria that leaves u = 0 at r0.  For the Lagrange top
the branch is stable and lives below r0; for a top with W''(0) < W'(0) it is
unstable and lives above r0.

A PNG is written next to this script when matplotlib is installed.
"""

from pathlib import Path

import numpy as np

from sleeping_top import PotentialW, bifurcation_diagram, trunk_flip

cases = {
    "Lagrange (case II)": (PotentialW.lagrange(), 0.5, 3.0),
    "1 - t - 4t^2 (case III)": (PotentialW.polynomial([1, -1, -4]), 1.0, 4.0),
}

diagrams = {}
for label, (W, lo, hi) in cases.items():
    d = bifurcation_diagram(W, lo, hi, 251)
    diagrams[label] = d
    print(f"{label}: r0 = {d.report.r0:.6f}, trunk flips near r = {trunk_flip(d):.4f}, "
          f"{len(d.branch)} branch samples")

# Compare the Lagrange branch with its closed form.
lag = diagrams["Lagrange (case II)"]
r = np.array([b.r for b in lag.branch])
u = np.array([b.u for b in lag.branch])
print("max |u - sqrt(r(2-r))| =", np.max(np.abs(u - np.sqrt(r * (2 - r)))))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the figure")
else:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for ax, (label, d) in zip(axes, diagrams.items()):
        for stab, style in (("stable", "k-"), ("unstable", "k--")):
            rs = [rr if s == stab else np.nan for rr, s in d.trunk]
            ax.plot(rs, np.zeros(len(rs)), style)
        br = np.array([b.r for b in d.branch])
        bu = np.array([b.u for b in d.branch])
        style = "b-" if d.branch and d.branch[0].kind == "Min" else "r--"
        ax.plot(br, bu, style)
        ax.plot(br, -bu, style)
        ax.axvline(d.report.r0, color="0.7", lw=0.8)
        ax.set_title(label)
        ax.set_xlabel("r")
        ax.set_ylabel("u")
    out = Path(__file__).with_name("bifurcation_diagram.png")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    print("wrote", out)
