"""Profile functions W(t) of SO(2)-invariant potentials on the sphere.

An SO(2)-invariant potential V on S^2 is encoded by the unique smooth W on
[0, 1) with ``W(u**2) = V(u, 0, sqrt(1 - u**2))``.  Three families are
supported, all with exact derivatives: the Lagrange top, the Kirchhoff top and
user polynomials in t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np


class DomainError(ValueError):
    """Raised when an argument lies outside the chart where a formula is valid."""


class PotentialSpecError(ValueError):
    """Malformed potential specification string; ``position`` is the offending column."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


@dataclass(frozen=True)
class PotentialW:
    """Immutable profile function W.

    Use the constructors :meth:`lagrange`, :meth:`kirchhoff` and
    :meth:`polynomial` rather than building instances by hand.
    """

    kind: str
    c: float = 0.0
    coeffs: Tuple[float, ...] = ()
    offset: float = 0.0
    _dcoeffs: Tuple[Tuple[float, ...], ...] = field(default=(), repr=False, compare=False)

    @classmethod
    def lagrange(cls) -> "PotentialW":
        return cls("lagrange")

    @classmethod
    def kirchhoff(cls, c: float) -> "PotentialW":
        c = float(c)
        if not c > 0:
            raise ValueError(f"Kirchhoff constant must be positive, got {c}")
        return cls("kirchhoff", c=c)

    @classmethod
    def polynomial(cls, coeffs) -> "PotentialW":
        coeffs = tuple(float(a) for a in coeffs)
        if not coeffs:
            raise ValueError("polynomial potential needs at least one coefficient")
        if not all(math.isfinite(a) for a in coeffs):
            raise ValueError("polynomial coefficients must be finite")
        d1 = tuple(k * a for k, a in enumerate(coeffs))[1:] or (0.0,)
        d2 = tuple(k * a for k, a in enumerate(d1))[1:] or (0.0,)
        return cls("poly", coeffs=coeffs, _dcoeffs=(coeffs, d1, d2))

    def shifted(self, const: float) -> "PotentialW":
        """W + const; derivatives are unchanged."""
        if self.kind == "poly":
            return PotentialW.polynomial((self.coeffs[0] + const,) + self.coeffs[1:])
        return replace(self, offset=self.offset + float(const))

    def spec(self) -> str:
        """Canonical specification string (inverse of :func:`parse_potential`)."""
        if self.offset:
            raise ValueError("shifted potentials have no specification string")
        if self.kind == "lagrange":
            return "lagrange"
        if self.kind == "kirchhoff":
            return f"kirchhoff:{self.c!r}"
        return "poly:" + ",".join(repr(a) for a in self.coeffs)

    def _derivs(self, t: float, order: int) -> float:
        if self.kind == "lagrange":
            s = math.sqrt(1.0 - t)
            return (s + self.offset, -0.5 / s, -0.25 / (s * (1.0 - t)))[order]
        if self.kind == "kirchhoff":
            return (self.c + self.offset + (1.0 - self.c) * t, 1.0 - self.c, 0.0)[order]
        acc = 0.0
        for a in reversed(self._dcoeffs[order]):
            acc = acc * t + a
        return acc

    def __call__(self, t: float, order: int = 0) -> float:
        return w_eval(self, t, order)


def w_eval(W: PotentialW, t: float, order: int = 0) -> float:
    """Value (or first/second derivative with ``order``) of W at t in [0, 1)."""
    t = float(t)
    if not 0.0 <= t < 1.0:
        raise DomainError(f"W is defined on [0, 1), got t={t}")
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    return W._derivs(t, order)


def w_derivs0(W: PotentialW) -> Tuple[float, float]:
    """(W'(0), W''(0)) from the closed forms."""
    return W._derivs(0.0, 1), W._derivs(0.0, 2)


def v_on_sphere(W: PotentialW, u: float) -> float:
    """The invariant potential on the meridian, V(u, 0, sqrt(1-u^2)) = W(u^2)."""
    u = float(u)
    if not abs(u) < 1.0:
        raise DomainError(f"|u| must be < 1, got u={u}")
    return W._derivs(u * u, 0)


def _g(s: float) -> Tuple[float, float, float]:
    # g(s) = 4s/(1+s)^2 and its first two derivatives
    q = 1.0 + s
    return 4.0 * s / (q * q), 4.0 * (1.0 - s) / q**3, 8.0 * (s - 2.0) / q**4


def f_transform(W: PotentialW, s: float, order: int = 0) -> float:
    """f(s) = W(4s/(1+s)^2) or its first/second derivative.

    Substituting u = 2v/(1+v^2) turns the effective potential into
    r^2 v^2 / 2 + f(v^2), so f carries all information about W.
    """
    s = float(s)
    if s < 0.0:
        raise DomainError(f"s must be non-negative, got s={s}")
    g, g1, g2 = _g(s)
    if s == 1.0 or not g < 1.0:
        raise DomainError("s = 1 maps to the equator u = +-1")
    if order == 0:
        return W._derivs(g, 0)
    w1 = W._derivs(g, 1)
    if order == 1:
        return w1 * g1
    if order == 2:
        return W._derivs(g, 2) * g1 * g1 + w1 * g2
    raise ValueError(f"order must be 0, 1 or 2, got {order}")


def parse_potential(text: str) -> PotentialW:
    """Parse ``lagrange``, ``kirchhoff:<c>`` or ``poly:<a0>,<a1>,...``."""
    head, sep, rest = text.partition(":")
    name = head.strip().lower()
    if name == "lagrange":
        if sep:
            raise PotentialSpecError("lagrange takes no parameters", text, len(head))
        return PotentialW.lagrange()
    if name not in ("kirchhoff", "poly"):
        raise PotentialSpecError(f"unknown potential kind {head!r}", text, 0)
    if not sep:
        raise PotentialSpecError(f"{name} needs parameters after ':'", text, len(head))

    values = []
    pos = len(head) + 1
    for item in rest.split(","):
        try:
            values.append(float(item))
        except ValueError:
            raise PotentialSpecError(f"bad number {item!r}", text, pos) from None
        if not math.isfinite(values[-1]):
            raise PotentialSpecError(f"non-finite number {item!r}", text, pos)
        pos += len(item) + 1

    if name == "kirchhoff":
        if len(values) != 1:
            raise PotentialSpecError("kirchhoff takes exactly one constant", text, len(head) + 1)
        if not values[0] > 0:
            raise PotentialSpecError("kirchhoff constant must be positive", text, len(head) + 1)
        return PotentialW.kirchhoff(values[0])
    return PotentialW.polynomial(values)


def random_polynomial(rng: np.random.Generator, degree: int = 4, scale: float = 1.0) -> PotentialW:
    """Random polynomial profile, used by property tests and brute-force checks."""
    return PotentialW.polynomial(rng.uniform(-scale, scale, degree + 1))
