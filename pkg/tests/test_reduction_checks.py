import math

import numpy as np
import pytest

from sleeping_top.dynamics import magnetic_strength, sphere_moment_map
from sleeping_top.reduction_checks import (ANG, DEFAULT_PAIRS, DOT, PSQ, RATE_PAIR, RHO,
                                           InvariantPolynomial, canonical_bracket_fd,
                                           check_generators, check_level_set, check_poisson,
                                           check_poisson_rate, check_pullback_form, embed_f,
                                           generator_residuals, magnetic_bracket, poisson_rate,
                                           pullback_form, run_checks, verify)

R_VALUES = [0.0, 0.5, 1.8, 2.0, 5.0]


def test_embed_f_examples():
    assert embed_f(3.0, 0.0, 5.0) == (0.0, 0.0, 5.0, 0.0)
    assert embed_f(1.8, 0.6, 0.2) == pytest.approx((0.6, 0.0, 0.2, 0.6), abs=1e-15)


def test_embed_f_lands_on_level_set(rng):
    for r, u, p in zip(rng.uniform(0, 10, 50), rng.uniform(-0.99, 0.99, 50), rng.uniform(-3, 3, 50)):
        assert abs(sphere_moment_map(r, embed_f(r, u, p)) - r) < 1e-13


def test_embed_f_smooth_through_axis():
    # p_y = r v(u) is odd and smooth: symmetric difference quotient at 0 approaches r/2
    for h in (1e-3, 1e-6, 1e-9):
        slope = (embed_f(2.0, h, 0.0)[3] - embed_f(2.0, -h, 0.0)[3]) / (2 * h)
        assert slope == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("r", [1.8, 0.0, 10.0])
def test_check_level_set(r):
    rep = check_level_set(r, 100)
    assert rep.passed and rep.samples == 100 and rep.threshold == 1e-12


def test_pullback_form_point():
    err = np.abs(pullback_form(1.5, 0.3, 0.7) - [[0, 1], [-1, 0]])
    assert err.max() < 1e-6


def test_pullback_form_on_axis_is_exact():
    for r in (0.0, 1.0, 7.0):
        for p in (-2.0, 0.0, 1.5):
            assert np.abs(pullback_form(r, 0.0, p) - [[0, 1], [-1, 0]]).max() < 1e-10


def test_generator_residuals_examples():
    assert max(generator_residuals(1.8, 0.6, 0.2)) < 1e-13
    assert max(generator_residuals(1.8, 0.0, 2.5)) < 1e-13
    assert generator_residuals(0.0, 0.4, 1.0)[2] == 0.0


def test_multiplication_form_of_last_relation_fails():
    # |p|^2 - ang^2 * rho differs from p_u^2 off the axis; the quotient form is the right one
    r, u, p = 1.8, 0.6, 0.2
    s = embed_f(r, u, p)
    py = s[3]
    assert PSQ(s) - ANG(s) ** 2 * RHO(s) - p * p == pytest.approx(py * py * (1 - u**4), abs=1e-14)
    assert abs(py * py * (1 - u**4)) > 0.1


@pytest.mark.parametrize("r", R_VALUES)
def test_all_checks_pass(r):
    for rep in run_checks(r, 200):
        assert rep.passed, rep


def test_poisson_examples():
    assert check_poisson(1.8, (RHO, DOT), 50).passed
    rep = check_poisson(3.3, (RHO, RHO), 10)
    assert rep.max_residual == 0.0
    rep = check_poisson(2.7, (ANG, RHO), 10)
    assert rep.max_residual < 1e-12


def test_angular_momentum_commutes_with_invariants(rng):
    for r in (0.0, 2.0):
        for inv in (RHO, PSQ, DOT, RHO * PSQ - DOT**2):
            for _ in range(5):
                s = (*rng.uniform(-0.5, 0.5, 2), *rng.uniform(-2, 2, 2))
                # ANG is the momentum map up to the r*z term, which is itself invariant
                assert abs(magnetic_bracket(ANG, inv, 0.0, s)) < 1e-12


def test_bracket_sign_follows_vector_field_convention():
    # flipping the magnetic term breaks the bracket correspondence
    r, u, p = 1.8, 0.5, 1.2
    s = embed_f(r, u, p)
    a, b = PSQ, DOT
    ours = magnetic_bracket(a, b, r, s)
    ax, ay, apx, apy = a.grad(s)
    bx, by, bpx, bpy = b.grad(s)
    flipped = ours + 2 * magnetic_strength(r, s[0], s[1]) * (apx * bpy - apy * bpx)
    ref = canonical_bracket_fd(a, b, r, u, p)
    assert abs(ours - ref) < 1e-8
    assert abs(flipped - ref) > 1.0


def test_poisson_rejects_non_invariant():
    x = InvariantPolynomial({(1, 0, 0, 0): 1.0})
    assert not x.is_invariant()
    with pytest.raises(ValueError):
        check_poisson(1.0, (x, RHO), 5)
    with pytest.raises(ValueError):
        check_poisson(1.0, (RHO, lambda s: 0.0), 5)


def test_polynomial_algebra(rng):
    q = RHO * PSQ - DOT**2 + 3 * ANG - 1
    for _ in range(5):
        s = rng.uniform(-1, 1, 4)
        x, y, px, py = s
        expect = (x * x + y * y) * (px * px + py * py) - (x * px + y * py) ** 2 + 3 * (x * py - y * px) - 1
        assert q(s) == pytest.approx(expect, abs=1e-13)
    assert q.is_invariant()
    h = 1e-6
    s = rng.uniform(-1, 1, 4)
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        assert q.grad(s)[i] == pytest.approx((q(s + e) - q(s - e)) / (2 * h), abs=1e-8)


@pytest.mark.parametrize("r", R_VALUES)
def test_poisson_rate_is_second_order(r):
    assert poisson_rate(r) == pytest.approx(4.0, abs=0.05)
    assert check_poisson_rate(r, 200).passed


def test_poisson_rate_with_r_dependent_pair():
    # (|p|^2, x p_x + y p_y) pulls back to functions involving v(u); truncation dominates for r > 0
    assert poisson_rate(1.8, (PSQ, DOT)) == pytest.approx(4.0, abs=0.1)


def test_reports_record_seed_and_are_reproducible():
    a = check_generators(1.8, 20, seed=5)
    b = check_generators(1.8, 20, seed=5)
    assert a == b and a.seed == 5
    assert check_pullback_form(1.8, 20, seed=6).seed == 6


def test_verify_order_and_determinism():
    reps = verify([1.8, 0.0], 20)
    assert [rep.r for rep in reps][:1] == [1.8]
    names = [rep.name for rep in reps if rep.r == 1.8]
    assert names == sorted(names)
    assert len(reps) == 2 * (4 + len(DEFAULT_PAIRS))
    assert verify([1.8, 0.0], 20, workers=1) == reps


def test_single_sample_allowed():
    assert all(rep.passed for rep in verify([0.0], 1))
    with pytest.raises(ValueError):
        check_level_set(1.0, 0)
