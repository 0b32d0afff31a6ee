"""Sampled invariant suites behind the `check` subcommand.

Each check draws from its own deterministic stream, verifies one of the
library's structural inequalities on a sample, and reports the worst
violation seen. Tests reuse these where the invariant is shared.
"""

from __future__ import annotations

import numpy as np

from .core import EUCLIDEAN, NormPair, dual_norm, norm
from .mirror_prox import check_condition
from .oracles import HolderSpec, exact_oracle, holder_L, noisy_oracle
from .prox import (
    Box,
    EuclideanBall,
    NonnegativeBall,
    ProductSet,
    ProxSetup,
    Simplex,
    bregman,
    prox_map,
    support_max,
)
from .rng import stream


def lemma_a1_violation(samples, seed):
    """Worst violation of a*b^nu*c <= (1/d)^((1-nu)/(1+nu)) a^(2/(1+nu))
    (b^2+c^2)/2 + d/2 over random nonnegative samples."""
    rng = stream(seed, "lemma-a1")
    worst = -np.inf
    for _ in range(samples):
        a, b, c = rng.uniform(0.0, 3.0, size=3)
        delta = rng.uniform(1e-3, 2.0)
        nu = rng.uniform(0.0, 1.0)
        lhs = a * b**nu * c
        rhs = (1.0 / delta) ** ((1.0 - nu) / (1.0 + nu)) * a ** (2.0 / (1.0 + nu)) / 2.0 * (
            b * b + c * c
        ) + delta / 2.0
        worst = max(worst, lhs - rhs)
    return worst


def check_lemma_a1(seed=0, samples=100_000, tol=1e-12):
    worst = lemma_a1_violation(samples, seed)
    return worst <= tol, f"worst violation {worst:.3e}"


def check_norm_duality(seed=0, samples=1000, rel_tol=1e-12):
    """Generalized Cauchy-Schwarz <s, x> <= |s|_* |x| on random pairs."""
    worst = -np.inf
    for pair, dim in ((EUCLIDEAN, 6), (NormPair("product_max", split=3), 6)):
        rng = stream(seed, "norm-duality", pair.kind)
        for _ in range(samples):
            x = rng.standard_normal(dim)
            s = rng.standard_normal(dim)
            bound = dual_norm(pair, s) * norm(pair, x)
            worst = max(worst, abs(float(np.dot(s, x))) - bound * (1.0 + rel_tol))
    return worst <= 0.0, f"worst excess {worst:.3e}"


def check_product_dual_bruteforce(seed=0, n_dual=100, n_primal=10_000, rel_slack=0.02):
    """Brute-force max of <s, x> over unit-primal-norm x vs the dual norm."""
    pair = NormPair("product_max", split=2)
    rng = stream(seed, "product-dual")
    worst_ratio = np.inf
    for _ in range(n_dual):
        s = rng.standard_normal(3)
        target = dual_norm(pair, s)
        if target < 1e-9:
            continue
        best = -np.inf
        for _ in range(n_primal):
            u = rng.standard_normal(2)
            v = rng.standard_normal(1)
            u /= max(np.linalg.norm(u), 1e-30)
            v /= max(np.linalg.norm(v), 1e-30)
            x = np.concatenate([u, v])  # both blocks on the unit sphere
            best = max(best, float(np.dot(s, x)))
        if best > target * (1.0 + 1e-12):
            return False, f"sample exceeded the dual norm by {best - target:.3e}"
        worst_ratio = min(worst_ratio, best / target)
    ok = worst_ratio >= 1.0 - rel_slack
    return ok, f"worst sampled/dual ratio {worst_ratio:.4f}"


def _sample_sets(rng):
    dim = 5
    return (
        EuclideanBall(rng.standard_normal(dim) * 0.3, 1.0 + rng.uniform()),
        Simplex(dim),
        Box(-np.ones(dim), np.ones(dim) + rng.uniform(size=dim)),
        NonnegativeBall(1.5, dim),
        ProductSet(EuclideanBall(np.zeros(2), 1.0), Box(-np.ones(3), np.ones(3))),
    )


def check_bregman_strong_convexity(seed=0, samples=10_000, tol=1e-10):
    """V[z](x) >= |x - z|^2 / 2 for both prox kinds."""
    rng = stream(seed, "bregman-sc")
    worst = -np.inf
    euclid = ProxSetup("euclidean_half_sq")
    entropy = ProxSetup("entropy")
    simplex = Simplex(6)
    for _ in range(samples // 2):
        z = rng.standard_normal(6)
        x = rng.standard_normal(6)
        gap = 0.5 * float(np.dot(x - z, x - z)) - bregman(euclid, z, x)
        worst = max(worst, gap)
    for _ in range(samples // 2):
        z = simplex.sample(rng) + 1e-9
        z /= z.sum()
        x = simplex.sample(rng)
        gap = 0.5 * float(np.dot(x - z, x - z)) - bregman(entropy, z, x)
        worst = max(worst, gap)
    return worst <= tol, f"worst strong-convexity deficit {worst:.3e}"


def check_prox_optimality(seed=0, instances=1000, probes=100, tol=1e-9):
    """Variational inequality of the prox output against random probes."""
    rng = stream(seed, "prox-opt")
    worst = -np.inf
    for i in range(instances):
        sets = _sample_sets(rng)
        feasible = sets[i % len(sets)]
        if isinstance(feasible, Simplex):
            setup = ProxSetup("entropy")
            z = feasible.sample(rng) + 1e-9
            z /= z.sum()
        else:
            setup = ProxSetup("euclidean_half_sq")
            z = feasible.project(rng.standard_normal(feasible.dim))
        g = rng.standard_normal(feasible.dim)
        m = rng.uniform(0.1, 10.0)
        x = prox_map(setup, feasible, z, g, m)
        residual_vec = g + m * (setup.grad_d(x) - setup.grad_d(z))
        for _ in range(probes):
            u = feasible.sample(rng)
            worst = max(worst, -float(np.dot(residual_vec, u - x)))
    return worst <= tol, f"worst optimality violation {worst:.3e}"


def check_support_domination(seed=0, samples=10_000, tol=1e-9):
    """support_max dominates <s, x> for every sampled member."""
    rng = stream(seed, "support")
    worst = -np.inf
    for feasible in _sample_sets(rng):
        for _ in range(samples // 5):
            s = rng.standard_normal(feasible.dim)
            value, arg = support_max(feasible, s)
            if not feasible.contains(arg, tol=1e-9):
                return False, "support argmax left the set"
            x = feasible.sample(rng)
            worst = max(worst, float(np.dot(s, x)) - value)
    return worst <= tol, f"worst support excess {worst:.3e}"


def _holder_power_operator(nu):
    """Componentwise sign(x)|x|^nu; Hölder with constant 2^(1-nu) sqrt(n)^(1-nu)."""

    def g(x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * np.abs(x) ** nu

    return g


def holder_power_constant(nu, dim):
    return 2.0 ** (1.0 - nu) * dim ** ((1.0 - nu) / 2.0)


def check_oracle_conformance(seed=0, triples=1000, slack=1e-10):
    """Definition-level inequalities for the adapter constructions.

    For each fixture with ground truth g, checks on random triples
    (x, y, z) that <g~(y) - g~(x), y - z> <= L(delta_c)/2 (|y-x|^2 +
    |y-z|^2) + delta_c + delta_u and <g~(y) - g(y), y - z> >= -delta_u.
    """
    rng = stream(seed, "conformance")
    ball = EuclideanBall(np.zeros(4), 1.0)
    diameter = ball.diameter()
    nu = 0.5
    spec = HolderSpec(nu=nu, l_nu=holder_power_constant(nu, 4))
    lip = lambda x: 1.5 * np.asarray(x)  # 1.5-Lipschitz linear operator

    fixtures = [
        ("lipschitz+noise", noisy_oracle(lip, 0.05, diameter, seed + 1), lambda dc: 1.5),
        ("holder", exact_oracle(_holder_power_operator(nu)), lambda dc: holder_L(spec, dc)),
        (
            "holder+noise",
            noisy_oracle(_holder_power_operator(nu), 0.05, diameter, seed + 2),
            lambda dc: holder_L(spec, dc),
        ),
    ]
    worst = -np.inf
    for _name, oracle, l_of in fixtures:
        for _ in range(triples):
            x, y, z = (ball.sample(rng) for _ in range(3))
            dc = rng.uniform(0.01, 0.5)
            gx = oracle(x, dc)
            gy = oracle(y, dc)
            lhs = float(np.dot(gy - gx, y - z))
            ny_x = float(np.linalg.norm(y - x))
            ny_z = float(np.linalg.norm(y - z))
            bound = 0.5 * l_of(dc) * (ny_x**2 + ny_z**2) + dc + oracle.delta_u
            worst = max(worst, lhs - bound)
            if oracle.exact is not None:
                drift = float(np.dot(gy - oracle.exact(y), y - z))
                worst = max(worst, -(drift + oracle.delta_u))
    return worst <= slack, f"worst conformance violation {worst:.3e}"


def check_line_search_guarantee(seed=0, configs=1000, eps=0.1):
    """Acceptance test passes whenever M >= L(eps/4) for a Hölder operator."""
    rng = stream(seed, "line-search")
    nu = 0.5
    dim = 4
    g = _holder_power_operator(nu)
    spec = HolderSpec(nu=nu, l_nu=holder_power_constant(nu, dim))
    m = holder_L(spec, eps / 4.0)
    ball = EuclideanBall(np.zeros(dim), 1.0)
    for _ in range(configs):
        z, w, z_next = (ball.sample(rng) for _ in range(3))
        if not check_condition(g(w), g(z), w, z_next, z, m, eps, 0.0):
            return False, "guaranteed acceptance failed"
    return True, f"all {configs} configurations accepted at M = {m:.4g}"


ALL_CHECKS = (
    ("lemma-a1", check_lemma_a1),
    ("norm-duality", check_norm_duality),
    ("product-dual-bruteforce", check_product_dual_bruteforce),
    ("bregman-strong-convexity", check_bregman_strong_convexity),
    ("prox-optimality", check_prox_optimality),
    ("support-domination", check_support_domination),
    ("oracle-conformance", check_oracle_conformance),
    ("line-search-guarantee", check_line_search_guarantee),
)


def run_all(seed=0):
    """Run every suite; returns [(name, passed, detail)]."""
    results = []
    for name, fn in ALL_CHECKS:
        passed, detail = fn(seed=seed)
        results.append((name, passed, detail))
    return results
