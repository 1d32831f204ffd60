import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sleeping_top.potential import (DomainError, PotentialSpecError, PotentialW, f_transform,
                                    parse_potential, v_on_sphere, w_derivs0, w_eval)

from conftest import BUILTINS, random_polys


def test_w_eval_examples(lagrange):
    assert w_eval(lagrange, 0.0) == 1.0
    assert w_eval(lagrange, 0.36) == pytest.approx(0.8, abs=1e-15)
    assert w_eval(PotentialW.kirchhoff(2), 0.25) == 1.75


@pytest.mark.parametrize("t", [-1e-12, 1.0, 1.5])
def test_w_eval_domain(lagrange, t):
    with pytest.raises(DomainError):
        w_eval(lagrange, t)


def test_w_derivs0_examples(lagrange):
    assert w_derivs0(lagrange) == (-0.5, -0.25)
    assert w_derivs0(PotentialW.kirchhoff(3.5)) == (1 - 3.5, 0.0)
    assert w_derivs0(PotentialW.polynomial([3, -2, 5])) == (-2.0, 10.0)


def test_polynomial_derivatives_are_formal():
    W = PotentialW.polynomial([1.0, 2.0, -3.0, 0.5])
    for t in (0.0, 0.3, 0.77):
        assert w_eval(W, t, 1) == pytest.approx(2 - 6 * t + 1.5 * t * t, rel=1e-14)
        assert w_eval(W, t, 2) == pytest.approx(-6 + 3 * t, rel=1e-14)


def test_constant_polynomial_has_zero_derivatives():
    W = PotentialW.polynomial([4.0])
    assert w_eval(W, 0.5, 1) == 0.0 and w_eval(W, 0.5, 2) == 0.0


def test_v_on_sphere(lagrange):
    assert v_on_sphere(lagrange, 0.6) == pytest.approx(0.8, abs=1e-15)
    assert v_on_sphere(PotentialW.kirchhoff(2), 0.0) == 2.0
    with pytest.raises(DomainError):
        v_on_sphere(lagrange, -1.0)


@given(st.floats(-0.999, 0.999))
def test_v_on_sphere_even(u):
    for W in BUILTINS:
        assert v_on_sphere(W, u) == v_on_sphere(W, -u)


def test_f_transform_examples(lagrange):
    assert f_transform(lagrange, 0.5) == pytest.approx(1 / 3, abs=1e-15)
    assert f_transform(lagrange, 0.0, 1) == -2.0
    assert f_transform(lagrange, 0.0, 2) == 4.0
    with pytest.raises(DomainError):
        f_transform(lagrange, 1.0)
    with pytest.raises(DomainError):
        f_transform(lagrange, -0.1)


def test_f_lagrange_closed_form(lagrange):
    # sqrt(1 - 4s/(1+s)^2) = (1-s)/(1+s) on [0, 1)
    for s in np.linspace(0, 0.95, 20):
        assert f_transform(lagrange, s) == pytest.approx((1 - s) / (1 + s), abs=1e-14)
        assert f_transform(lagrange, s, 1) == pytest.approx(-2 / (1 + s) ** 2, rel=1e-12)
        assert f_transform(lagrange, s, 2) == pytest.approx(4 / (1 + s) ** 3, rel=1e-12)


@pytest.mark.parametrize("W", BUILTINS + random_polys(10), ids=repr)
def test_f_derivatives_at_zero(W):
    w1, w2 = w_derivs0(W)
    assert f_transform(W, 0.0, 1) - 4 * w1 == 0.0
    assert f_transform(W, 0.0, 2) - 16 * (w2 - w1) == 0.0


@pytest.mark.parametrize("W", random_polys(5, seed=3), ids=repr)
def test_f_derivatives_match_central_differences(W, rng):
    h = 1e-5
    for s in rng.uniform(0, 0.9, 20):
        lo, hi = max(s - h, 0.0), s + h
        fd1 = (f_transform(W, hi) - f_transform(W, lo)) / (hi - lo)
        fd2 = (f_transform(W, hi, 1) - f_transform(W, lo, 1)) / (hi - lo)
        assert fd1 == pytest.approx(f_transform(W, s, 1), rel=1e-6, abs=1e-9)
        assert fd2 == pytest.approx(f_transform(W, s, 2), rel=1e-6, abs=1e-9)


@settings(max_examples=50)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.floats(-3, 3))
def test_shift_leaves_derivatives(coeffs, const):
    W = PotentialW.polynomial(coeffs)
    V = W.shifted(const)
    assert w_derivs0(V) == w_derivs0(W)


@pytest.mark.parametrize("text,expected", [
    ("lagrange", PotentialW.lagrange()),
    ("kirchhoff:0.5", PotentialW.kirchhoff(0.5)),
    ("poly:3,-2,5", PotentialW.polynomial([3, -2, 5])),
    ("poly:1e-3", PotentialW.polynomial([1e-3])),
])
def test_parse_potential(text, expected):
    assert parse_potential(text) == expected
    assert parse_potential(expected.spec()) == expected


@pytest.mark.parametrize("text,position", [
    ("lagrangian", 0),
    ("poly:1,x,3", 7),
    ("poly:1,,3", 7),
    ("kirchhoff:-1", 10),
    ("kirchhoff:1,2", 10),
    ("kirchhoff", 9),
    ("lagrange:1", 8),
])
def test_parse_errors_carry_position(text, position):
    with pytest.raises(PotentialSpecError) as info:
        parse_potential(text)
    assert info.value.position == position


def test_kirchhoff_requires_positive_constant():
    with pytest.raises(ValueError):
        PotentialW.kirchhoff(0.0)
    assert PotentialW.kirchhoff(1e-9).c == 1e-9


def test_potentials_are_hashable_and_immutable(lagrange):
    assert len({lagrange, PotentialW.lagrange(), PotentialW.kirchhoff(2)}) == 2
    with pytest.raises(AttributeError):
        lagrange.c = 3.0
