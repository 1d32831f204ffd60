"""Stability and bifurcation of the sleeping symmetric top.

Modules
-------
potential         profile functions W(t) (Lagrange, Kirchhoff, polynomial)
effective         effective potential U_r, the (v, S) variables, critical points
bifurcation       case classification, critical spin r0, branch continuation
dynamics          reduced and magnetic-sphere Hamiltonian flows, stability probes
reduction_checks  numerical checks of the reduction map f
serialize, cli    file formats and the ``sleeping-top`` command
"""
from .bifurcation import (BifurcationDiagram, BranchSample, CaseReport, bifurcation_diagram,
                          branch_point, classify_top, trunk_flip)
from .dynamics import (BoundaryExit, IntegratorConfig, ReducedState, ReducedSystem, SphereState,
                       SphereSystem, StepFailure, Trajectory, integrate, reduced_hamiltonian,
                       reduced_vector_field, relative_equilibrium_point, sphere_hamiltonian,
                       sphere_moment_map, sphere_vector_field, stability_probe)
from .effective import (CriticalPoint, EffectivePotential, critical_points, k_of_v, s_eval,
                        u_eval, v_of_u)
from .potential import (DomainError, PotentialSpecError, PotentialW, f_transform,
                        parse_potential, v_on_sphere, w_derivs0, w_eval)
from .reduction_checks import (ANG, DOT, PSQ, RHO, CheckReport, InvariantPolynomial,
                               check_generators, check_level_set, check_poisson,
                               check_pullback_form, embed_f, verify)

__version__ = "0.1.0"
