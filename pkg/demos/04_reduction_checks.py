"""
Checking the reduction numerically
==================================

The reduced phase space at the upright top is identified with the plane
(u, p_u) through an explicit map f into the level set of the momentum.
These checks confirm, on random samples, that f lands on the level set,
pulls the magnetic form back to du ^ dp_u, respects the invariant
generators, and preserves Poisson brackets.
"""

from sleeping_top.reduction_checks import DEFAULT_PAIRS, PSQ, RHO, check_poisson, poisson_rate, verify

reports = verify([0.0, 0.5, 1.8, 2.0, 5.0], 200)
for rep in reports:
    mark = "ok  " if rep.passed else "FAIL"
    print(f"{mark} r={rep.r:<4g} {rep.name:<60} {rep.max_residual:.2e} < {rep.threshold:g}")

# The bracket comparison uses central differences.  Halving the step should
# cut the discrepancy by about four.
for r in (0.0, 1.8, 5.0):
    print(f"r = {r}: residual ratio on halving the step = {poisson_rate(r):.4f}")

# A single pair, with more samples.
print(check_poisson(1.8, (RHO, PSQ), 1000))
print(len(DEFAULT_PAIRS), "default bracket pairs")
