"""Sample-based checks that T*(-1,1)/(Z/2) models the singular reduced space.

The map

    f(u, p_u) = (u, 0, p_u, r v(u)),     v(u) = (1 - sqrt(1-u^2))/u,

sends T*(-1, 1) into the level set mu_r = r of the sphere system.  The checks
below confirm numerically that f lands in the level set, pulls w_r back to
du^dp_u, matches the invariant generators of both sides, and intertwines the
Poisson brackets of SO(2)-invariant polynomials.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

import numpy as np

from .dynamics import SphereState, magnetic_strength, omega_matrix, sphere_moment_map
from .effective import v_of_u

DEFAULT_SEED = 20240229
U_BOUND = 0.9
P_BOUND = 3.0

LEVEL_TOL = 1e-12
FORM_TOL = 1e-6
GENERATOR_TOL = 1e-12
POISSON_TOL = 1e-6
# observed residual ratio on halving the step must lie in 4 +- RATE_TOL
RATE_TOL = 0.5

JACOBIAN_STEP = 1e-6
BRACKET_STEP = 1e-5
RATE_STEP = 1e-2


@dataclass(frozen=True)
class CheckReport:
    name: str
    samples: int
    max_residual: float
    threshold: float
    r: float
    seed: int

    @property
    def passed(self) -> bool:
        return bool(self.max_residual < self.threshold)

    def to_dict(self) -> dict:
        return {"name": self.name, "r": self.r, "samples": self.samples, "seed": self.seed,
                "max_residual": self.max_residual, "threshold": self.threshold,
                "pass": self.passed}

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(name=d["name"], samples=d["samples"], max_residual=d["max_residual"],
                   threshold=d["threshold"], r=d["r"], seed=d["seed"])


def embed_f(r: float, u: float, p_u: float) -> SphereState:
    return SphereState(float(u), 0.0, float(p_u), float(r) * v_of_u(u))


def _samples(n: int, seed: int) -> np.ndarray:
    if n < 1:
        raise ValueError(f"need at least one sample, got n={n}")
    rng = np.random.default_rng(seed)
    return np.column_stack([rng.uniform(-U_BOUND, U_BOUND, n), rng.uniform(-P_BOUND, P_BOUND, n)])


# ------------------------------------------------------- invariant polynomials

class InvariantPolynomial:
    """Polynomial in (x, y, p_x, p_y), stored as {exponent 4-tuple: coefficient}.

    Build invariants from the generators :data:`RHO`, :data:`PSQ`, :data:`DOT`
    and :data:`ANG` with ``+``, ``-``, ``*`` and ``**``.  Arbitrary monomials
    are accepted by the constructor; :meth:`is_invariant` tells them apart.
    """

    def __init__(self, terms: Dict[Tuple[int, int, int, int], float], name: str | None = None):
        self.terms = {tuple(int(e) for e in k): float(c) for k, c in terms.items() if c != 0.0}
        self.name = name or self._auto_name()

    def _auto_name(self) -> str:
        parts = []
        for exps, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{e}" if e > 1 else v
                            for v, e in zip(("x", "y", "px", "py"), exps) if e)
            parts.append(f"{c:+g}" + (f"*{mono}" if mono else ""))
        return " ".join(parts) or "0"

    def __add__(self, other):
        other = _as_poly(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0.0) + c
        return InvariantPolynomial(terms, f"({self.name} + {other.name})")

    __radd__ = __add__

    def __neg__(self):
        return InvariantPolynomial({k: -c for k, c in self.terms.items()}, f"-{self.name}")

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __mul__(self, other):
        other = _as_poly(other)
        terms: Dict[tuple, float] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                terms[k] = terms.get(k, 0.0) + c1 * c2
        return InvariantPolynomial(terms, f"{_wrap(self.name)}*{_wrap(other.name)}")

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = _as_poly(1.0)
        for _ in range(n):
            out = out * self
        return InvariantPolynomial(out.terms, f"{_wrap(self.name)}^{n}")

    def __call__(self, s) -> float:
        z = [float(c) for c in s]
        return sum(c * math.prod(zi**e for zi, e in zip(z, k)) for k, c in self.terms.items())

    def grad(self, s) -> np.ndarray:
        z = [float(c) for c in s]
        g = np.zeros(4)
        for k, c in self.terms.items():
            for i in range(4):
                if k[i]:
                    g[i] += c * k[i] * math.prod(
                        zj ** (e - (j == i)) for j, (zj, e) in enumerate(zip(z, k)))
        return g

    def is_invariant(self, trials: int = 8, seed: int = 0, tol: float = 1e-10) -> bool:
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            x, y, px, py = rng.uniform(-1, 1, 4)
            a = rng.uniform(0, 2 * math.pi)
            c, s = math.cos(a), math.sin(a)
            rot = (c * x - s * y, s * x + c * y, c * px - s * py, s * px + c * py)
            v0, v1 = self((x, y, px, py)), self(rot)
            if abs(v0 - v1) > tol * max(1.0, abs(v0)):
                return False
        return True

    def __repr__(self):
        return f"InvariantPolynomial({self.name})"


def _wrap(name: str) -> str:
    return f"({name})" if any(ch in name for ch in "+- ") and not name.startswith("(") else name


def _as_poly(p) -> InvariantPolynomial:
    if isinstance(p, InvariantPolynomial):
        return p
    return InvariantPolynomial({(0, 0, 0, 0): float(p)}, f"{float(p):g}")


RHO = InvariantPolynomial({(2, 0, 0, 0): 1.0, (0, 2, 0, 0): 1.0}, "x^2+y^2")
PSQ = InvariantPolynomial({(0, 0, 2, 0): 1.0, (0, 0, 0, 2): 1.0}, "px^2+py^2")
DOT = InvariantPolynomial({(1, 0, 1, 0): 1.0, (0, 1, 0, 1): 1.0}, "x*px+y*py")
ANG = InvariantPolynomial({(1, 0, 0, 1): 1.0, (0, 1, 1, 0): -1.0}, "x*py-y*px")

DEFAULT_PAIRS = [(RHO, DOT), (PSQ, DOT), (RHO, PSQ), (ANG, RHO), (RHO, RHO),
                 (RHO * PSQ, DOT + ANG)]
RATE_PAIR = (RHO**2, PSQ)


# ------------------------------------------------------------------- checks

def check_level_set(r: float, n: int, seed: int = DEFAULT_SEED) -> CheckReport:
    res = max(abs(sphere_moment_map(r, embed_f(r, u, p)) - r) for u, p in _samples(n, seed))
    return CheckReport("level_set", n, float(res), LEVEL_TOL, float(r), seed)


def _embed_jacobian(r: float, u: float, p: float, h: float = JACOBIAN_STEP) -> np.ndarray:
    ju = (np.array(embed_f(r, u + h, p)) - np.array(embed_f(r, u - h, p))) / (2 * h)
    jp = (np.array(embed_f(r, u, p + h)) - np.array(embed_f(r, u, p - h))) / (2 * h)
    return np.column_stack([ju, jp])


def pullback_form(r: float, u: float, p_u: float, h: float = JACOBIAN_STEP) -> np.ndarray:
    """J^T Omega_r J at (u, p_u), with J the finite-difference Jacobian of f."""
    J = _embed_jacobian(r, u, p_u, h)
    return J.T @ omega_matrix(r, embed_f(r, u, p_u)) @ J


def check_pullback_form(r: float, n: int, seed: int = DEFAULT_SEED) -> CheckReport:
    canon = np.array([[0.0, 1.0], [-1.0, 0.0]])
    res = max(np.max(np.abs(pullback_form(r, u, p) - canon)) for u, p in _samples(n, seed))
    return CheckReport("pullback_form", n, float(res), FORM_TOL, float(r), seed)


def generator_residuals(r: float, u: float, p_u: float) -> Tuple[float, float, float, float]:
    """Residuals of u^2, u p_u, r(1-sqrt(1-u^2)) and p_u^2 against the pulled-back generators."""
    s = embed_f(r, u, p_u)
    rho, ang = RHO(s), ANG(s)
    # p_u^2 = |p|^2 - ang^2 / rho on the image of f; at rho = 0 the quotient is 0
    quotient = ang * ang / rho if rho > 0.0 else 0.0
    return (abs(rho - u * u),
            abs(DOT(s) - u * p_u),
            abs(ang - r * (1.0 - math.sqrt(1.0 - u * u))),
            abs(PSQ(s) - quotient - p_u * p_u))


def check_generators(r: float, n: int, seed: int = DEFAULT_SEED) -> CheckReport:
    res = max(max(generator_residuals(r, u, p)) for u, p in _samples(n, seed))
    return CheckReport("generators", n, float(res), GENERATOR_TOL, float(r), seed)


def magnetic_bracket(a: InvariantPolynomial, b: InvariantPolynomial, r: float, s) -> float:
    """{a, b} = w_r(X_a, X_b) = da(X_b) with w_r(X_h, .) = dh."""
    ax, ay, apx, apy = a.grad(s)
    bx, by, bpx, bpy = b.grad(s)
    B = magnetic_strength(r, s[0], s[1])
    return ax * bpx - apx * bx + ay * bpy - apy * by - B * (apx * bpy - apy * bpx)


def _diff(func, x: float, h: float, richardson: bool) -> float:
    def central(step):
        return (func(x + step) - func(x - step)) / (2 * step)
    d = central(h)
    if richardson:
        return (4.0 * central(h / 2) - d) / 3.0
    return d


def canonical_bracket_fd(a: InvariantPolynomial, b: InvariantPolynomial, r: float, u: float,
                         p_u: float, h: float = BRACKET_STEP, richardson: bool = True) -> float:
    """{a o f, b o f} = A_u B_p - A_p B_u by central differences on (u, p_u)."""
    def pulled(poly):
        return (lambda uu: poly(embed_f(r, uu, p_u))), (lambda pp: poly(embed_f(r, u, pp)))
    a_u, a_p = pulled(a)
    b_u, b_p = pulled(b)
    return (_diff(a_u, u, h, richardson) * _diff(b_p, p_u, h, richardson)
            - _diff(a_p, p_u, h, richardson) * _diff(b_u, u, h, richardson))


def _require_invariant(pair):
    for poly in pair:
        if not isinstance(poly, InvariantPolynomial) or not poly.is_invariant():
            raise ValueError(f"{poly!r} is not an SO(2)-invariant polynomial")


def _poisson_residual(r, pair, n, seed, h, richardson) -> float:
    a, b = pair
    res = 0.0
    for u, p in _samples(n, seed):
        lhs = magnetic_bracket(a, b, r, embed_f(r, u, p))
        rhs = canonical_bracket_fd(a, b, r, u, p, h, richardson)
        res = max(res, abs(lhs - rhs))
    return res


def check_poisson(r: float, pair, n: int, seed: int = DEFAULT_SEED,
                  h: float = BRACKET_STEP) -> CheckReport:
    _require_invariant(pair)
    res = _poisson_residual(r, pair, n, seed, h, richardson=True)
    return CheckReport(f"poisson[{pair[0].name}, {pair[1].name}]", n, float(res), POISSON_TOL,
                       float(r), seed)


def poisson_rate(r: float, pair=RATE_PAIR, n: int = 20, seed: int = DEFAULT_SEED,
                 h: float = RATE_STEP) -> float:
    """Residual ratio of plain central differences at steps h and h/2 (about 4)."""
    _require_invariant(pair)
    coarse = _poisson_residual(r, pair, n, seed, h, richardson=False)
    fine = _poisson_residual(r, pair, n, seed, h / 2, richardson=False)
    return coarse / fine


def check_poisson_rate(r: float, n: int, seed: int = DEFAULT_SEED, pair=RATE_PAIR) -> CheckReport:
    ratio = poisson_rate(r, pair, min(n, 50), seed)
    return CheckReport(f"poisson_rate[{pair[0].name}, {pair[1].name}]", min(n, 50),
                       float(abs(ratio - 4.0)), RATE_TOL, float(r), seed)


def run_checks(r: float, n: int, seed: int = DEFAULT_SEED,
               pairs: Iterable = DEFAULT_PAIRS) -> List[CheckReport]:
    reports = [check_level_set(r, n, seed), check_pullback_form(r, n, seed),
               check_generators(r, n, seed), check_poisson_rate(r, n, seed)]
    reports += [check_poisson(r, pair, n, seed) for pair in pairs]
    return reports


def verify(r_values: Iterable[float], n: int, seed: int = DEFAULT_SEED,
           workers: int | None = None) -> List[CheckReport]:
    """All checks for every r, merged in a deterministic (r, name) order."""
    r_values = [float(r) for r in r_values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        batches = list(pool.map(lambda r: run_checks(r, n, seed), r_values))
    reports = [rep for batch in batches for rep in batch]
    return sorted(reports, key=lambda rep: (r_values.index(rep.r), rep.name))
