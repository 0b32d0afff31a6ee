import math

import numpy as np
import pytest

from visolve.checks import (
    check_bregman_strong_convexity,
    check_prox_optimality,
    check_support_domination,
)
from visolve.prox import (
    Box,
    ConfigurationError,
    EuclideanBall,
    NonnegativeBall,
    ProductSet,
    ProxSetup,
    Simplex,
    bregman,
    bregman_radius_bound,
    min_point,
    omega_bound,
    prox_map,
    support_max,
)
from visolve.rng import stream

EUCLID = ProxSetup("euclidean_half_sq")
ENTROPY = ProxSetup("entropy")


def test_bregman_euclidean_half_square():
    assert bregman(EUCLID, np.zeros(2), np.array([1.0, 0.0])) == pytest.approx(0.5)


def test_bregman_vanishes_at_center():
    z = np.array([0.25, 0.75])
    assert bregman(EUCLID, z, z) == 0.0
    assert bregman(ENTROPY, z, z) == pytest.approx(0.0, abs=1e-15)


def test_bregman_entropy_is_kl_divergence():
    z = np.array([0.5, 0.5])
    x = np.array([1.0, 0.0])
    # independent evaluation: KL(x, z) = sum over x_i > 0 of x_i log(x_i / z_i)
    kl = sum(xi * math.log(xi / zi) for xi, zi in zip(x, z) if xi > 0)
    assert kl == pytest.approx(math.log(2.0))
    assert bregman(ENTROPY, z, x) == pytest.approx(kl)


def test_bregman_entropy_rejects_boundary_center():
    with pytest.raises(ValueError):
        bregman(ENTROPY, np.array([1.0, 0.0]), np.array([0.5, 0.5]))


def test_entropy_setup_rejects_recentering():
    with pytest.raises(ConfigurationError):
        ProxSetup("entropy", center=np.array([0.5, 0.5]))


def test_prox_map_ball_gradient_step_then_projection():
    ball = EuclideanBall(np.zeros(2), 1.0)
    x = prox_map(EUCLID, ball, np.zeros(2), np.array([2.0, 0.0]), 2.0)
    assert x == pytest.approx(np.array([-1.0, 0.0]))


def test_prox_map_entropy_zero_step_is_fixed_point():
    simplex = Simplex(2)
    z = np.array([0.5, 0.5])
    for m in (0.5, 1.0, 7.0):
        assert prox_map(ENTROPY, simplex, z, np.zeros(2), m) == pytest.approx(z)


def test_prox_map_entropy_multiplicative_update():
    simplex = Simplex(2)
    z = np.array([0.5, 0.5])
    for m in (0.5, 1.0, 3.0):
        g = np.array([m * math.log(2.0), 0.0])
        x = prox_map(ENTROPY, simplex, z, g, m)
        assert x == pytest.approx(np.array([1.0 / 3.0, 2.0 / 3.0]))


def test_prox_map_incompatible_pairing():
    ball = EuclideanBall(np.zeros(2), 1.0)
    with pytest.raises(ConfigurationError):
        prox_map(ENTROPY, ball, np.full(2, 0.5), np.zeros(2), 1.0)


def test_prox_map_rejects_nonpositive_weight():
    ball = EuclideanBall(np.zeros(2), 1.0)
    with pytest.raises(ValueError):
        prox_map(EUCLID, ball, np.zeros(2), np.zeros(2), 0.0)


def test_support_max_ball_cauchy_schwarz_point():
    ball = EuclideanBall(np.zeros(2), 1.0)
    value, arg = support_max(ball, np.array([3.0, 4.0]))
    assert value == pytest.approx(5.0)
    assert arg == pytest.approx(np.array([0.6, 0.8]))


def test_support_max_simplex_vertex():
    value, arg = support_max(Simplex(3), np.array([1.0, 3.0, 2.0]))
    assert value == pytest.approx(3.0)
    assert arg == pytest.approx(np.array([0.0, 1.0, 0.0]))


def test_support_max_simplex_tie_breaks_to_lowest_index():
    value, arg = support_max(Simplex(3), np.array([2.0, 2.0, 1.0]))
    assert value == pytest.approx(2.0)
    assert arg == pytest.approx(np.array([1.0, 0.0, 0.0]))


def test_support_max_zero_dual_vector():
    for feasible in (
        EuclideanBall(np.ones(3), 2.0),
        Simplex(3),
        Box(-np.ones(3), np.ones(3)),
        NonnegativeBall(2.0, 3),
    ):
        value, arg = support_max(feasible, np.zeros(3))
        assert value == pytest.approx(0.0)
        assert feasible.contains(arg)


def test_support_max_dimension_mismatch():
    with pytest.raises(ValueError):
        support_max(Simplex(3), np.zeros(4))


def test_omega_bounds():
    ball = EuclideanBall(np.zeros(3), 1.0)
    assert omega_bound(EUCLID, ball) == pytest.approx(1.0)
    assert omega_bound(ENTROPY, Simplex(2)) == pytest.approx(2.0 * math.log(2.0))
    assert omega_bound(ENTROPY, Simplex(1)) == 0.0


def test_omega_entropy_bound_by_direct_maximization():
    # independent small-n maximization of d over the 2-simplex (all of which
    # sits inside the unit ball): the bound Omega/2 must dominate
    setup = ENTROPY
    grid = np.linspace(0.0, 1.0, 20001)
    values = []
    for t in grid:
        x = np.array([t, 1.0 - t])
        values.append(setup.d(x))
    assert max(values) <= omega_bound(setup, Simplex(2)) / 2.0 + 1e-12


def test_min_point_locations():
    ball = EuclideanBall(np.ones(2), 1.0)
    assert min_point(EUCLID, ball) == pytest.approx(np.zeros(2) + (1 - 1 / np.sqrt(2)))
    centered = ProxSetup("euclidean_half_sq", center=np.array([0.2, 0.1]))
    assert min_point(centered, EuclideanBall(np.zeros(2), 1.0)) == pytest.approx([0.2, 0.1])
    assert min_point(ENTROPY, Simplex(4)) == pytest.approx(np.full(4, 0.25))


def test_distance_generator_normalized_at_its_minimum():
    # with the center inside the set, d vanishes at the starting point
    ball = EuclideanBall(np.zeros(3), 1.0)
    centered = ProxSetup("euclidean_half_sq", center=np.array([0.1, -0.2, 0.0]))
    assert centered.d(min_point(centered, ball)) == pytest.approx(0.0)
    assert ENTROPY.d(min_point(ENTROPY, Simplex(5))) == pytest.approx(0.0, abs=1e-15)
    rng = stream(5, "d-nonneg")
    for _ in range(200):
        assert centered.d(ball.sample(rng)) >= 0.0
        assert ENTROPY.d(Simplex(5).sample(rng)) >= -1e-12


def test_strong_convexity_sampled():
    ok, detail = check_bregman_strong_convexity(seed=3, samples=10_000)
    assert ok, detail


def test_prox_optimality_sampled():
    ok, detail = check_prox_optimality(seed=3, instances=1000, probes=100)
    assert ok, detail


def test_support_domination_sampled():
    ok, detail = check_support_domination(seed=3, samples=10_000)
    assert ok, detail


def test_membership_of_prox_outputs():
    rng = stream(11, "prox-membership")
    ball = EuclideanBall(np.zeros(3), 1.0)
    box = Box(-np.ones(3), np.ones(3))
    nn = NonnegativeBall(2.0, 3)
    prod = ProductSet(ball, box)
    simplex = Simplex(4)
    for _ in range(200):
        g = rng.standard_normal(3) * 5
        m = rng.uniform(0.2, 5.0)
        for feasible in (ball, box, nn):
            z = feasible.project(rng.standard_normal(3))
            assert feasible.contains(prox_map(EUCLID, feasible, z, g, m), tol=1e-12)
        zp = prod.project(rng.standard_normal(6))
        gp = rng.standard_normal(6) * 5
        assert prod.contains(prox_map(EUCLID, prod, zp, gp, m), tol=1e-12)
        zs = simplex.sample(rng) + 1e-12
        zs /= zs.sum()
        assert simplex.contains(prox_map(ENTROPY, simplex, zs, rng.standard_normal(4), m), tol=1e-9)


def test_bregman_radius_bound_dominates_sampled_divergences():
    rng = stream(13, "radius-bound")
    cases = [
        (EUCLID, EuclideanBall(np.zeros(3), 1.5)),
        (EUCLID, Box(-np.ones(4), np.ones(4))),
        (EUCLID, NonnegativeBall(2.0, 3)),
        (EUCLID, ProductSet(EuclideanBall(np.zeros(2), 1.0), Box(-np.ones(2), np.ones(2)))),
        (ENTROPY, Simplex(5)),
    ]
    for setup, feasible in cases:
        z0 = min_point(setup, feasible)
        bound = bregman_radius_bound(setup, feasible)
        worst = max(bregman(setup, np.maximum(z0, 1e-12) if setup.kind == "entropy" else z0,
                            feasible.sample(rng)) for _ in range(2000))
        assert worst <= bound + 1e-9


def test_diameters():
    assert EuclideanBall(np.zeros(2), 1.5).diameter() == pytest.approx(3.0)
    assert Simplex(3).diameter() == pytest.approx(math.sqrt(2.0))
    assert Box(np.zeros(2), np.ones(2)).diameter() == pytest.approx(math.sqrt(2.0))
    assert NonnegativeBall(2.0, 3).diameter() == pytest.approx(2.0 * math.sqrt(2.0))
    assert NonnegativeBall(2.0, 1).diameter() == pytest.approx(2.0)
    prod = ProductSet(EuclideanBall(np.zeros(2), 1.0), Box(np.zeros(2), np.ones(2)))
    assert prod.diameter() == pytest.approx(math.hypot(2.0, math.sqrt(2.0)))
