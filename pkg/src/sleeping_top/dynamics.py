"""Hamiltonian flows of the reduced system and of the magnetic sphere system.

Reduced system: T*(-1, 1) with du^dp_u and

    h_r(u, p_u) = (1 - u^2) p_u^2 / 2 + U_r(u).

Sphere system: the upper hemisphere chart (x, y) = (q1, q2) of T*S^2 with the
magnetic symplectic form

    w_r = dx^dp_x + dy^dp_y + B dx^dy,     B = r / sqrt(1 - x^2 - y^2),

Hamiltonian h = ((1-x^2) p_x^2 - 2xy p_x p_y + (1-y^2) p_y^2)/2 + W(x^2 + y^2)
and SO(2) moment map mu_r = x p_y - y p_x + r sqrt(1 - x^2 - y^2).

Vector fields are defined by w(X, .) = dh.  Solving this for the chart form
gives

    x'   = h_px,                y'   = h_py,
    p_x' = -h_x - B h_py,       p_y' = -h_y + B h_px.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .effective import EffectivePotential, u_eval, v_of_u
from .potential import DomainError, PotentialW

CHART_EPS = 1e-6
ADAPTIVE_RK = "AdaptiveRK"
IMPLICIT_MIDPOINT = "ImplicitMidpoint"

STABLE, UNSTABLE, INCONCLUSIVE = "Stable", "Unstable", "Inconclusive"


class ReducedState(NamedTuple):
    u: float
    p_u: float


class SphereState(NamedTuple):
    x: float
    y: float
    p_x: float
    p_y: float


class BoundaryExit(RuntimeError):
    """The trajectory reached the chart boundary; ``trajectory`` holds the part before it."""

    def __init__(self, t_exit: float, trajectory: "Trajectory"):
        super().__init__(f"state left the chart at t={t_exit:.17g}")
        self.t_exit = t_exit
        self.trajectory = trajectory


class StepFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    max_step: float = math.inf
    scheme: str = ADAPTIVE_RK
    # fixed step of the implicit midpoint rule
    step: float = 1e-2

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.max_step > 0 or not self.step > 0:
            raise ValueError("step sizes must be positive")
        if self.scheme not in (ADAPTIVE_RK, IMPLICIT_MIDPOINT):
            raise ValueError(f"unknown scheme {self.scheme!r}")


@dataclass
class Trajectory:
    system: str
    labels: tuple
    times: np.ndarray
    states: np.ndarray
    energy_drift: np.ndarray
    moment_drift: np.ndarray
    config: dict = field(default_factory=dict)
    stopped: Optional[str] = None

    def __len__(self):
        return len(self.times)

    def component(self, name: str) -> np.ndarray:
        return self.states[:, self.labels.index(name)]


# ---------------------------------------------------------------- reduced system

def _check_reduced(s) -> tuple:
    u, p = float(s[0]), float(s[1])
    if not abs(u) < 1.0:
        raise DomainError(f"|u| must be < 1, got u={u}")
    return u, p


def reduced_hamiltonian(W: PotentialW, r: float, s) -> float:
    u, p = _check_reduced(s)
    return 0.5 * (1.0 - u * u) * p * p + u_eval(EffectivePotential(W, r), u, 0)


def reduced_vector_field(W: PotentialW, r: float, s) -> tuple:
    u, p = _check_reduced(s)
    return (1.0 - u * u) * p, u * p * p - u_eval(EffectivePotential(W, r), u, 1)


# ----------------------------------------------------------------- sphere system

def _check_sphere(s) -> tuple:
    x, y, px, py = (float(c) for c in s)
    if not x * x + y * y < 1.0:
        raise DomainError(f"(x, y) = ({x}, {y}) is outside the upper hemisphere chart")
    return x, y, px, py


def _sphere_grad(W: PotentialW, x, y, px, py):
    w1 = W._derivs(x * x + y * y, 1)
    hx = -x * px * px - y * px * py + 2.0 * x * w1
    hy = -x * px * py - y * py * py + 2.0 * y * w1
    hpx = (1.0 - x * x) * px - x * y * py
    hpy = -x * y * px + (1.0 - y * y) * py
    return hx, hy, hpx, hpy


def sphere_hamiltonian(W: PotentialW, s) -> float:
    x, y, px, py = _check_sphere(s)
    kin = (1.0 - x * x) * px * px - 2.0 * x * y * px * py + (1.0 - y * y) * py * py
    return 0.5 * kin + W._derivs(x * x + y * y, 0)


def sphere_moment_map(r: float, s) -> float:
    x, y, px, py = _check_sphere(s)
    return x * py - y * px + float(r) * math.sqrt(1.0 - x * x - y * y)


def magnetic_strength(r: float, x: float, y: float) -> float:
    """Coefficient B of dx^dy in the chart expression of w_r."""
    return float(r) / math.sqrt(1.0 - x * x - y * y)


def sphere_vector_field(W: PotentialW, r: float, s) -> tuple:
    x, y, px, py = _check_sphere(s)
    hx, hy, hpx, hpy = _sphere_grad(W, x, y, px, py)
    B = magnetic_strength(r, x, y)
    return hpx, hpy, -hx - B * hpy, -hy + B * hpx


def omega_matrix(r: float, s) -> np.ndarray:
    """Matrix of w_r in the basis (x, y, p_x, p_y): entry (i, j) is w_r(e_i, e_j)."""
    x, y, _, _ = _check_sphere(s)
    B = magnetic_strength(r, x, y)
    om = np.zeros((4, 4))
    om[0, 2], om[1, 3], om[0, 1] = 1.0, 1.0, B
    return om - om.T


def relative_equilibrium_point(W: PotentialW, r: float, u: float) -> SphereState:
    """Chart point of the relative equilibrium through (u, 0) on the level mu_r = r."""
    return SphereState(float(u), 0.0, 0.0, float(r) * v_of_u(u))


# ------------------------------------------------------------ system wrappers

@dataclass(frozen=True)
class ReducedSystem:
    W: PotentialW
    r: float
    name = "reduced"
    labels = ("u", "p_u")

    def vector_field(self, t, s):
        u, p = s
        # trial stages may overshoot the chart; clamp so the step gets rejected, not crash
        u = max(min(u, 1.0 - 1e-15), -1.0 + 1e-15)
        return reduced_vector_field(self.W, self.r, (u, p))

    def energy(self, s) -> float:
        return reduced_hamiltonian(self.W, self.r, s)

    def moment(self, s) -> float:
        # the reduced system has no residual symmetry
        return 0.0

    def radius2(self, s) -> float:
        return s[0] * s[0]


@dataclass(frozen=True)
class SphereSystem:
    W: PotentialW
    r: float
    name = "sphere"
    labels = ("x", "y", "p_x", "p_y")

    def vector_field(self, t, s):
        x, y, px, py = s
        rho = x * x + y * y
        if rho >= 1.0:
            scale = math.sqrt((1.0 - 1e-15) / rho)
            x, y = x * scale, y * scale
        return sphere_vector_field(self.W, self.r, (x, y, px, py))

    def energy(self, s) -> float:
        return sphere_hamiltonian(self.W, s)

    def moment(self, s) -> float:
        return sphere_moment_map(self.r, s)

    def radius2(self, s) -> float:
        return s[0] * s[0] + s[1] * s[1]


def _finish(system, times, states, cfg, stopped=None) -> Trajectory:
    states = np.asarray(states, dtype=float)
    e = np.array([system.energy(s) for s in states])
    m = np.array([system.moment(s) for s in states])
    return Trajectory(system=system.name, labels=system.labels, times=np.asarray(times, float),
                      states=states, energy_drift=e - e[0], moment_drift=m - m[0],
                      config=asdict(cfg), stopped=stopped)


def integrate(system, s0: Sequence[float], T: float, cfg: IntegratorConfig | None = None,
              t_eval: Sequence[float] | None = None,
              stop: Callable[[np.ndarray], float] | None = None) -> Trajectory:
    """Integrate ``system`` from s0 over [0, T].

    Samples are the accepted steps unless ``t_eval`` is given.  ``stop`` is an
    optional scalar function of the state; integration ends early (with
    ``trajectory.stopped == "stop"``) when it crosses zero.  Leaving the chart
    raises :class:`BoundaryExit`.
    """
    cfg = cfg or IntegratorConfig()
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    s0 = np.asarray(s0, dtype=float)
    limit = 1.0 - CHART_EPS
    if not system.radius2(s0) < limit:
        raise DomainError("initial state is outside the chart")
    if cfg.scheme == IMPLICIT_MIDPOINT:
        return _integrate_midpoint(system, s0, T, cfg, t_eval, stop)

    def boundary(t, s):
        return limit - system.radius2(s)
    boundary.terminal = True
    events = [boundary]
    if stop is not None:
        def stop_event(t, s):
            return stop(s)
        stop_event.terminal = True
        events.append(stop_event)

    sol = solve_ivp(system.vector_field, (0.0, T), s0, method="DOP853", rtol=cfg.rel_tol,
                    atol=cfg.abs_tol, max_step=cfg.max_step, events=events,
                    t_eval=None if t_eval is None else np.asarray(t_eval, float))
    if sol.status == -1:
        raise StepFailure(sol.message)
    times, states = list(sol.t), list(sol.y.T)
    stopped = None
    for kind, (te, ye) in zip(("boundary", "stop"), zip(sol.t_events, sol.y_events)):
        if len(te):
            if not times or times[-1] < te[0]:
                times.append(te[0])
                states.append(ye[0])
            stopped = kind
    traj = _finish(system, times, states, cfg, stopped)
    if stopped == "boundary":
        raise BoundaryExit(times[-1], traj)
    return traj


def _midpoint_step(f, s, h, cfg):
    guess = s + h * np.asarray(f(0.0, s))
    for _ in range(100):
        new = s + h * np.asarray(f(0.0, 0.5 * (s + guess)))
        if not np.all(np.isfinite(new)):
            return None
        if np.max(np.abs(new - guess)) <= cfg.abs_tol + cfg.rel_tol * np.max(np.abs(new)):
            return new
        guess = new
    return None


def _integrate_midpoint(system, s0, T, cfg, t_eval, stop) -> Trajectory:
    """Fixed-step implicit midpoint rule with fixed-point iteration."""
    h = cfg.step
    n = max(1, int(math.ceil(T / h - 1e-12)))
    h = T / n
    limit = 1.0 - CHART_EPS
    f = system.vector_field
    times, states = [0.0], [s0]
    s = s0
    stop0 = stop(s0) if stop else None
    stopped = None
    for i in range(n):
        try:
            with np.errstate(over="raise", invalid="raise"):
                new = _midpoint_step(f, s, h, cfg)
        except (DomainError, FloatingPointError, OverflowError):
            new = None
        if new is None:
            raise StepFailure(f"midpoint iteration did not converge at t={i * h:.17g}")
        s = new
        times.append((i + 1) * h)
        states.append(s)
        if system.radius2(s) >= limit:
            stopped = "boundary"
            break
        if stop is not None and (stop(s) > 0) != (stop0 > 0):
            stopped = "stop"
            break
    if t_eval is not None and stopped is None:
        grid = np.asarray(t_eval, float)
        arr = np.asarray(states)
        states = np.column_stack([np.interp(grid, times, arr[:, k]) for k in range(arr.shape[1])])
        times = grid
    traj = _finish(system, times, states, cfg, stopped)
    if stopped == "boundary":
        raise BoundaryExit(times[-1], traj)
    return traj


def stability_probe(W: PotentialW, r: float, u_star: float, delta: float = 1e-3,
                    T: float = 200.0, cfg: IntegratorConfig | None = None,
                    escape: float = 0.1, containment: float = 10.0) -> str:
    """Empirical stability of the critical point u_star of U_r.

    Starts the reduced flow at (u_star + delta, 0).  ``Stable`` if the orbit
    stays within containment * delta of u_star up to T, ``Unstable`` if it
    leaves the escape radius, ``Inconclusive`` otherwise.
    """
    if not 0 < delta < escape:
        raise ValueError(f"need 0 < delta < {escape}, got {delta}")
    system = ReducedSystem(W, abs(float(r)))
    try:
        traj = integrate(system, (u_star + delta, 0.0), T, cfg,
                         stop=lambda s: escape - abs(s[0] - u_star))
    except BoundaryExit:
        return UNSTABLE
    if traj.stopped == "stop":
        return UNSTABLE
    dev = np.max(np.abs(traj.component("u") - u_star))
    if dev <= containment * delta:
        return STABLE
    return INCONCLUSIVE
