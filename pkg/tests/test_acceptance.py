"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
report. All solver runs here use exact prox-mappings and zero uncontrolled
errors unless a criterion says otherwise.
"""

import json
import math
import re

import numpy as np
import pytest

from visolve import report
from visolve.bench import (
    _saddle_data,
    desk_config,
    fit_eps_exponent,
    fit_log_linear,
    gen_exp_operator,
    gen_nonsmooth_saddle,
    run_experiment,
)
from visolve.checks import check_lemma_a1, check_oracle_conformance
from visolve.cli import main
from visolve.core import EUCLIDEAN, ToleranceBudget
from visolve.mirror_prox import StoppingRule, solve
from visolve.oracles import HolderSpec, delta_L_oracle, exact_oracle, holder_L, point_noise
from visolve.prox import (
    EuclideanBall,
    ProxSetup,
    Simplex,
    bregman_radius_bound,
)
from visolve.restart import inner_iteration_bound, restart_solve
from visolve.rng import stream
from visolve.saddle import make_vi_operator

EXP_LIPSCHITZ = 2.0 * math.exp(math.sqrt(2.0))


def _report(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _certified_solve(oracle, setup, feasible, eps, **kwargs):
    d_bound = bregman_radius_bound(setup, feasible)
    cert, trace = solve(
        oracle, setup, feasible, ToleranceBudget(eps=eps),
        StoppingRule.certified_gap(d_bound), **kwargs,
    )
    return cert, trace, d_bound


def _exp_instance(n):
    g, ball, x0 = gen_exp_operator(n)
    return exact_oracle(g), ProxSetup("euclidean_half_sq", center=x0), ball


@pytest.fixture(scope="module")
def exp_runs():
    """Solves of the cyclic exponential operator over the accuracy grid."""
    grid = (1e-1, 5e-2, 1e-2, 5e-3, 1e-3, 5e-4, 1e-4, 5e-5)
    runs = {}
    for n in (1000, 10000):
        oracle, setup, ball = _exp_instance(n)
        for eps in grid:
            runs[(n, eps)] = _certified_solve(oracle, setup, ball, eps)
    return runs


@pytest.fixture(scope="module")
def saddle_desk_run():
    """Desk-scale non-smooth saddle instance at eps = 1/8."""
    p, q, eps = 100, 50, 1.0 / 8.0
    sp = gen_nonsmooth_saddle(p, q, seed=42)
    oracle = exact_oracle(make_vi_operator(sp))
    prod = sp.product_set()
    setup = ProxSetup("euclidean_half_sq", center=np.zeros(prod.dim))
    cert, trace, d_bound = _certified_solve(oracle, setup, prod, eps, max_outer=500_000)
    return sp, cert, trace, d_bound, eps


@pytest.fixture(scope="module")
def restart_run():
    """Synthetic strongly monotone restart run at eps = 1e-4, R0^2 = 4."""
    c = np.array([0.3, -0.2, 0.1, 0.0, 0.25])
    ball = EuclideanBall(np.zeros(5), 1.0)
    oracle = exact_oracle(lambda x: x - c)
    eps, r0_sq = 1e-4, 4.0
    x0 = ball.project(np.full(5, 0.9))
    x_final, state, traces = restart_solve(
        oracle, ball, mu=1.0, budget=ToleranceBudget(eps=eps),
        x0=x0, r0_sq=r0_sq, omega=1.0,
    )
    return c, x_final, state, traces, eps, r0_sq


@pytest.fixture(scope="module")
def manifest_runs(tmp_path_factory):
    """Two identical full-manifest bench invocations."""
    paths = []
    for label in ("a", "b"):
        out = tmp_path_factory.mktemp(f"manifest_{label}")
        code = main(
            ["bench", "--experiment", "all", "--seed", "123",
             "--out", str(out), "--format", "csv,json"]
        )
        assert code == 0
        paths.append(out)
    return paths


def test_criterion_1_certificate_inequality(exp_runs):
    worst = -np.inf
    matrix = []
    # shifted identities on balls
    rng = stream(101, "matrix")
    for dim, eps in ((2, 5e-3), (5, 5e-3), (9, 1e-3)):
        c = rng.standard_normal(dim) * 0.3
        matrix.append(
            (exact_oracle(lambda x, c=c: x - c), ProxSetup("euclidean_half_sq"),
             EuclideanBall(np.zeros(dim), 1.0), eps, {})
        )
    # identity on the ball
    matrix.append(
        (exact_oracle(lambda x: x), ProxSetup("euclidean_half_sq"),
         EuclideanBall(np.zeros(6), 1.0), 1e-3, {})
    )
    # linear monotone operator on the simplex under the entropy prox
    target = np.array([0.1, 0.5, 0.2, 0.2])
    matrix.append(
        (exact_oracle(lambda x: x - target), ProxSetup("entropy"), Simplex(4), 1e-2, {})
    )
    # rotation-like saddle operator, prox centered away from the solution
    matrix.append(
        (
            exact_oracle(lambda x: np.array([x[1], -x[0]])),
            ProxSetup("euclidean_half_sq", center=np.array([0.8, -0.5])),
            EuclideanBall(np.zeros(2), 1.0),
            1e-2,
            {},
        )
    )
    # desk-scale kinked saddle instance
    sp = gen_nonsmooth_saddle(30, 15, seed=7)
    matrix.append(
        (
            exact_oracle(make_vi_operator(sp)),
            ProxSetup("euclidean_half_sq", center=np.zeros(45)),
            sp.product_set(),
            0.25,
            {"max_outer": 500_000},
        )
    )
    for oracle, setup, feasible, eps, kwargs in matrix:
        cert, trace, d_bound = _certified_solve(oracle, setup, feasible, eps, **kwargs)
        assert trace.converged
        excess = cert.gap_value - (d_bound / trace.s_k + eps / 2.0 + 1e-9)
        worst = max(worst, excess)
    for (n, eps), (cert, trace, d_bound) in exp_runs.items():
        excess = cert.gap_value - (d_bound / trace.s_k + eps / 2.0 + 1e-9)
        worst = max(worst, excess)
    _report(
        "criterion 1 (certificate inequality)", worst <= 0.0,
        f"worst excess over the bound {worst:.3e}",
    )


def test_criterion_2_universality_ceiling(exp_runs, saddle_desk_run):
    cert, trace, _ = exp_runs[(1000, 1e-2)]
    exp_ceiling = 2.0 * EXP_LIPSCHITZ  # = 16.4525...
    exp_max = max(trace.m_values)
    ok_exp = exp_max <= max(exp_ceiling, 2.0 * trace.m_init) and exp_max <= exp_ceiling

    sp, s_cert, s_trace, _, eps = saddle_desk_run
    _, _, a_mat, _ = _saddle_data(100, 50, 42)
    l_zero = 2.0 + 2.0 * float(np.linalg.norm(a_mat, 2))
    ceiling = max(2.0 * holder_L(HolderSpec(0.0, l_zero), eps / 2.0), 2.0 * s_trace.m_init)
    ok_saddle = max(s_trace.m_values) <= ceiling
    _report(
        "criterion 2 (universality ceiling)", ok_exp and ok_saddle,
        f"exp max M {exp_max:.3f} <= {exp_ceiling:.3f}; "
        f"saddle max M {max(s_trace.m_values):.1f} <= {ceiling:.1f}",
    )


def test_criterion_3_dimension_independence(exp_runs):
    mismatches = []
    for eps in (1e-1, 5e-2, 1e-2, 1e-3):
        k_small = exp_runs[(1000, eps)][1].iterations
        k_large = exp_runs[(10000, eps)][1].iterations
        if k_small != k_large:
            mismatches.append((eps, k_small, k_large))
    counts = {eps: exp_runs[(1000, eps)][1].iterations for eps in (1e-1, 5e-2, 1e-2, 1e-3)}
    _report(
        "criterion 3 (dimension independence)", not mismatches,
        f"counts {counts}" + (f"; mismatches {mismatches}" if mismatches else ""),
    )


def test_criterion_4_linear_convergence_shape(exp_runs):
    grid = sorted({eps for (n, eps) in exp_runs if n == 1000}, reverse=True)
    iters = [exp_runs[(1000, eps)][1].iterations for eps in grid]
    slope, r_sq = fit_log_linear(grid, iters)
    _report(
        "criterion 4 (linear convergence shape)", r_sq >= 0.9,
        f"iterations vs ln(1/eps): slope {slope:.2f}, R^2 {r_sq:.4f}",
    )


def test_criterion_5_oracle_call_budget(exp_runs):
    spec = HolderSpec(1.0, EXP_LIPSCHITZ)
    worst = -np.inf
    for (n, eps), (cert, trace, _) in exp_runs.items():
        bound = (
            4.0 * trace.iterations
            + 2.0 * math.log2(2.0 * holder_L(spec, eps / 2.0))
            - 2.0 * math.log2(trace.m_init)
        )
        worst = max(worst, trace.total_oracle_calls - bound)
    _report(
        "criterion 5 (oracle-call budget)", worst <= 0.0,
        f"worst calls-minus-bound {worst:.2f}",
    )


def test_criterion_6_restart_contraction(restart_run):
    c, x_final, state, traces, eps, r0_sq = restart_run
    worst = -np.inf
    for p, x in enumerate(state.points_history):
        dist_sq = float(np.dot(x - c, x - c))
        worst = max(worst, dist_sq - (r0_sq * 2.0 ** (-p) + eps / 2.0 + 1e-9))
    final_sq = float(np.dot(x_final - c, x_final - c))
    _report(
        "criterion 6 (restart contraction)", worst <= 0.0 and final_sq <= eps,
        f"worst per-stage excess {worst:.3e}, final distance^2 {final_sq:.3e} <= {eps}",
    )


def test_criterion_7_inner_iteration_bound(restart_run):
    _, _, state, _, eps, r0_sq = restart_run
    bound = inner_iteration_bound(HolderSpec(1.0, 1.0), 1.0, eps, 1.0, r0_sq)
    _report(
        "criterion 7 (inner-iteration bound)", state.total_inner_iterations <= bound,
        f"total inner {state.total_inner_iterations} <= {bound}",
    )


def test_criterion_8_lemma_a1():
    ok, detail = check_lemma_a1(seed=5, samples=100_000, tol=1e-12)
    _report("criterion 8 (scalar smoothing inequality)", ok, detail)


def test_criterion_9_oracle_conformance():
    ok, detail = check_oracle_conformance(seed=5, triples=1000, slack=1e-10)
    # (delta, L) wrapper of the quadratic, exact and noisy
    ball = EuclideanBall(np.zeros(3), 1.0)
    rng = stream(202, "dl-conformance")
    delta, diameter = 0.01, 2.0
    eta = min(0.9 * math.sqrt(delta), 3.0 * delta / diameter)

    def f_oracle(y):
        return 0.5 * float(np.dot(y, y)) - delta / 2.0, y + point_noise(7, y, eta)

    wrapped = delta_L_oracle(f_oracle, delta, 2.0)
    exact = delta_L_oracle(lambda y: (0.5 * float(np.dot(y, y)), y), 0.0, 1.0)
    worst = -np.inf
    for oracle in (wrapped, exact):
        for _ in range(1000):
            x, y, z = (ball.sample(rng) for _ in range(3))
            lhs = float(np.dot(oracle(y, 0.0) - oracle(x, 0.0), y - z))
            bound = (
                oracle.lipschitz / 2.0
                * (np.linalg.norm(y - x) ** 2 + np.linalg.norm(y - z) ** 2)
                + oracle.delta_u
            )
            worst = max(worst, lhs - bound)
            drift = float(np.dot(oracle(y, 0.0) - y, y - z))
            worst = max(worst, -(drift + oracle.delta_u))
    ok_dl = worst <= 1e-10
    _report(
        "criterion 9 (oracle conformance)", ok and ok_dl,
        detail + f"; (delta,L) worst violation {worst:.3e}",
    )


def test_criterion_10_saddle_gap_domination(saddle_desk_run):
    sp, cert, trace, d_bound, eps = saddle_desk_run
    assert trace.converged
    bound = cert.gap_value
    u_hat, v_hat = sp.split(cert.w_hat)
    rng = stream(303, "gap-samples")
    worst = -np.inf
    for _ in range(1000):
        u = sp.q1.sample(rng)
        v = sp.q2.sample(rng)
        worst = max(worst, sp.value(u_hat, v) - sp.value(u, v_hat) - bound - 1e-9)
    _report(
        "criterion 10 (saddle gap domination)", worst <= 0.0 and bound <= eps + 1e-9,
        f"certified gap {bound:.4f} <= eps {eps}; worst sampled excess {worst:.3e}",
    )


def test_criterion_11_adaptivity_envelope(manifest_runs):
    out = manifest_runs[0]
    details = []
    ok = True
    for name, paper_observed in (("nonsmooth-saddle", 1 / 3), ("fermat-torricelli", 1 / 4)):
        rows = report.load_rows(out / f"{name}.csv")
        cells = {}
        for r in rows:
            assert r.converged
            cells.setdefault(r.eps, []).append(r.iterations)
        grid = sorted(cells, reverse=True)
        means = [float(np.mean(cells[eps])) for eps in grid]
        s, _ = fit_eps_exponent(grid, means)
        ok &= 0.0 < s <= 2.0
        details.append(f"{name}: measured s = {s:.3f} (paper observed ~{paper_observed:.2f})")
    _report("criterion 11 (adaptivity envelope)", ok, "; ".join(details))


def test_criterion_12_reproducibility(manifest_runs):
    out_a, out_b = manifest_runs

    def masked(path):
        text = path.read_text()
        if path.suffix == ".csv":
            # the wall-time measurement column is the only nondeterminism
            return re.sub(r"[^,\n]+$", "T", text, flags=re.M)
        data = json.loads(text)
        for cell in data.get("cells", []):
            cell["mean_wall_time_s"] = 0.0
        return json.dumps(data, sort_keys=True)

    names = sorted(p.name for p in out_a.iterdir())
    assert names == sorted(p.name for p in out_b.iterdir())
    diffs = [name for name in names if masked(out_a / name) != masked(out_b / name)]
    _report(
        "criterion 12 (reproducibility)", not diffs,
        f"{len(names)} data files byte-identical outside wall-time fields"
        + (f"; diffs {diffs}" if diffs else ""),
    )
