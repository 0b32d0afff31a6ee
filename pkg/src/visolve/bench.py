"""Seeded benchmark problems and the experiment runner.

Three experiment families at desk scale: a non-potential exponential
operator on the unit ball, a non-smooth convex-concave saddle problem with
a random linear coupling, and a constrained Fermat-Torricelli-Steiner
problem solved through its Lagrangian saddle form. Every trial draws its
data from a dedicated Philox stream, so a configuration names its results
exactly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import EUCLIDEAN, ToleranceBudget
from .mirror_prox import LineSearchDivergence, StoppingRule, solve
from .oracles import exact_oracle
from .prox import EuclideanBall, ProductSet, ProxSetup, bregman_radius_bound
from .rng import stream, sub_seed
from .saddle import ConstrainedProblem, SaddleProblem, lagrangian_saddle, make_vi_operator

EXPERIMENTS = ("exp-operator", "nonsmooth-saddle", "fermat-torricelli")

# Desk-scale accuracy grids; the first mirrors {1e-i, 5e-(i+1)}, the second
# the 1/(2i+2) ladder, the third the 1/2^i ladder, each trimmed so the full
# default manifest finishes in minutes.
EPS_GRID_EXP = (1e-1, 5e-2, 1e-2, 5e-3, 1e-3, 5e-4, 1e-4, 5e-5)
EPS_GRID_SADDLE = (1 / 2, 1 / 4, 1 / 6, 1 / 8, 1 / 12, 1 / 16, 1 / 24, 1 / 32)
EPS_GRID_FTS = (1 / 2, 1 / 4)


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark request: which family, at which sizes and accuracies."""

    experiment: str
    n: tuple = (1000, 10000)
    p: int = 100
    q: int = 50
    m: int = 10
    big_n: int = 20
    eps: tuple = ()
    seed: int = 0
    trials: int = 1
    search_factor: float = 2.0
    m_init: float = None  # None = difference-quotient recipe
    max_outer: int = 200_000
    lambda_radius: float = 10.0
    x_radius: float = 1.0

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if isinstance(self.n, (int, np.integer)):
            object.__setattr__(self, "n", (int(self.n),))
        else:
            object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        if not self.eps:
            object.__setattr__(self, "eps", default_eps_grid(self.experiment))
        else:
            object.__setattr__(self, "eps", tuple(float(e) for e in self.eps))
        if any(e <= 0 for e in self.eps):
            raise ValueError("accuracies must be positive")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.search_factor <= 1.0:
            raise ValueError("search factor must exceed 1")
        dims_ok = (
            all(v >= 2 for v in self.n)
            if self.experiment == "exp-operator"
            else (self.p >= 1 and self.q >= 1)
            if self.experiment == "nonsmooth-saddle"
            else (self.n[0] >= 1 and self.m >= 0 and self.big_n >= 1)
        )
        if not dims_ok:
            raise ValueError("experiment dimensions out of range")

    def dimension_matrix(self):
        """(dim_a, dim_b, dim_c) cells this config expands to."""
        if self.experiment == "exp-operator":
            return [(int(n), 0, 0) for n in self.n]
        if self.experiment == "nonsmooth-saddle":
            return [(self.p, self.q, 0)]
        return [(int(self.n[0]), self.m, self.big_n)]


def default_eps_grid(experiment):
    return {
        "exp-operator": EPS_GRID_EXP,
        "nonsmooth-saddle": EPS_GRID_SADDLE,
        "fermat-torricelli": EPS_GRID_FTS,
    }[experiment]


# Desk-scale dimension and trial defaults per experiment family.
DESK_DEFAULTS = {
    "exp-operator": dict(n=(1000, 10000), trials=1),
    "nonsmooth-saddle": dict(p=100, q=50, trials=3),
    "fermat-torricelli": dict(n=(50,), m=10, big_n=20, trials=2),
}


def desk_config(experiment, **overrides) -> ExperimentConfig:
    """ExperimentConfig pre-filled with the desk-scale defaults."""
    base = dict(DESK_DEFAULTS[experiment])
    base.update(overrides)
    return ExperimentConfig(experiment=experiment, **base)


@dataclass(frozen=True)
class ResultRow:
    """One (dimension, accuracy, trial) outcome."""

    experiment: str
    dim_a: int
    dim_b: int
    dim_c: int
    eps: float
    trial: int
    seed: int
    iterations: int
    oracle_calls: int
    final_gap: float
    converged: bool
    wall_time_s: float


def gen_exp_operator(n):
    """Cyclic exponential operator on the unit ball.

    [g(x)]_i = exp(x_i + x_(i+1) / e^3) with wraparound indexing; returns
    (operator, feasible set, starting point (1/n, ..., 1/n)).
    """
    if n < 2:
        raise ValueError("the cyclic operator needs n >= 2")
    damping = math.exp(3.0)

    def operator(x):
        x = np.asarray(x, dtype=float)
        return np.exp(x + np.roll(x, -1) / damping)

    ball = EuclideanBall(np.zeros(n), 1.0)
    x0 = np.full(n, 1.0 / n)
    return operator, ball, x0


def _saddle_data(p, q, seed):
    """Fixed points, coupling matrix and offset of one saddle instance."""
    alpha = np.full(p, 0.1 / math.sqrt(p))
    beta = np.full(q, -0.1 / math.sqrt(q))
    rng = stream(seed, "saddle-data")
    a_mat = rng.standard_normal((q, p))
    b_vec = rng.integers(-10, 11, size=q).astype(float)
    return alpha, beta, a_mat, b_vec


def _norm_subgrad(x, anchor):
    """Subgradient of |x - anchor|_2; the zero vector at the kink."""
    d = np.asarray(x, dtype=float) - anchor
    n = np.linalg.norm(d)
    if n == 0.0:
        return np.zeros(d.size)
    return d / n


def gen_nonsmooth_saddle(p, q, seed) -> SaddleProblem:
    """Non-smooth saddle problem |u - alpha| + <Au - b, v> - |v - beta|.

    Both blocks live on unit balls; A has standard normal entries and b
    integer entries uniform on [-10, 10], drawn from the seed's stream. The
    kinked norms make the assembled operator Hölder with exponent zero.
    """
    alpha, beta, a_mat, b_vec = _saddle_data(p, q, seed)

    def grad_u(u, v):
        return _norm_subgrad(u, alpha) + a_mat.T @ v

    def grad_v(u, v):
        return (a_mat @ u - b_vec) - _norm_subgrad(v, beta)

    def value(u, v):
        return (
            float(np.linalg.norm(u - alpha))
            + float(np.dot(a_mat @ u - b_vec, v))
            - float(np.linalg.norm(v - beta))
        )

    return SaddleProblem(
        grad_u=grad_u,
        grad_v=grad_v,
        q1=EuclideanBall(np.zeros(p), 1.0),
        q2=EuclideanBall(np.zeros(q), 1.0),
        value=value,
        norm_mode="l2_product",
    )


def gen_fts(n, m, big_n, seed, lambda_radius, x_radius=1.0) -> SaddleProblem:
    """Fermat-Torricelli-Steiner problem in Lagrangian saddle form.

    Minimizes the summed distances to big_n standard-normal anchors over a
    ball of radius x_radius, under m weighted-l1 constraints
    sum_i a_pi |x_i| <= 1 with positive coefficients |N(0,1)|. The origin
    is always a Slater point. Multipliers are compactified to a nonnegative
    ball of radius lambda_radius.
    """
    rng = stream(seed, "fts-data")
    anchors = rng.standard_normal((big_n, n))
    coeffs = np.abs(rng.standard_normal((m, n)))

    def objective(x):
        return float(np.linalg.norm(x[None, :] - anchors, axis=1).sum())

    def objective_grad(x):
        d = np.asarray(x, dtype=float)[None, :] - anchors
        norms = np.linalg.norm(d, axis=1)
        keep = norms > 0.0  # zero subgradient at kinks
        return (d[keep] / norms[keep, None]).sum(axis=0) if keep.any() else np.zeros(n)

    def make_constraint(row):
        def phi(x):
            return float(np.dot(row, np.abs(x)) - 1.0)

        def phi_grad(x):
            return row * np.sign(x)

        return phi, phi_grad

    cp = ConstrainedProblem(
        objective=objective,
        objective_grad=objective_grad,
        constraints=[make_constraint(row) for row in coeffs],
        lambda_radius=lambda_radius,
        slater_point=np.zeros(n),
    )
    sp = lagrangian_saddle(cp, EuclideanBall(np.zeros(n), x_radius))
    sp.norm_mode = "l2_product"
    return sp


def fts_start(n, m):
    """All-ones start scaled to 1/sqrt(n+m) over both blocks."""
    return np.full(n + m, 1.0 / math.sqrt(n + m))


def _instance(cfg: ExperimentConfig, dims, trial):
    """(oracle, setup, feasible, rule D-bound) for one cell; trial-seeded."""
    if cfg.experiment == "exp-operator":
        n = dims[0]
        operator, feasible, x0 = gen_exp_operator(n)
        setup = ProxSetup(kind="euclidean_half_sq", center=x0)
        return exact_oracle(operator), setup, feasible
    if cfg.experiment == "nonsmooth-saddle":
        p, q = dims[0], dims[1]
        seed = sub_seed(cfg.seed, cfg.experiment, p, q, trial)
        sp = gen_nonsmooth_saddle(p, q, seed)
        feasible = sp.product_set()
        setup = ProxSetup(kind="euclidean_half_sq", center=np.zeros(feasible.dim))
        return exact_oracle(make_vi_operator(sp)), setup, feasible
    n, m, big_n = dims
    seed = sub_seed(cfg.seed, cfg.experiment, n, m, big_n, trial)
    sp = gen_fts(n, m, big_n, seed, cfg.lambda_radius, cfg.x_radius)
    feasible = sp.product_set()
    setup = ProxSetup(kind="euclidean_half_sq", center=fts_start(n, m))
    return exact_oracle(make_vi_operator(sp)), setup, feasible


def run_cell(cfg: ExperimentConfig, dims, eps, trial) -> ResultRow:
    """Solve one (dims, eps, trial) cell and record its outcome."""
    oracle, setup, feasible = _instance(cfg, dims, trial)
    d_bound = bregman_radius_bound(setup, feasible)
    rule = StoppingRule.certified_gap(d_bound)
    budget = ToleranceBudget(eps=eps)
    start = time.perf_counter()
    try:
        certificate, trace = solve(
            oracle,
            setup,
            feasible,
            budget,
            rule,
            m_init=cfg.m_init,
            search_factor=cfg.search_factor,
            norms=EUCLIDEAN,
            max_outer=cfg.max_outer,
        )
        iterations = trace.iterations
        calls = trace.total_oracle_calls
        gap = certificate.gap_value
        converged = trace.converged
    except LineSearchDivergence as err:
        iterations = err.trace.iterations
        calls = err.trace.total_oracle_calls
        gap = float("inf")
        converged = False
    wall = time.perf_counter() - start
    return ResultRow(
        experiment=cfg.experiment,
        dim_a=dims[0],
        dim_b=dims[1],
        dim_c=dims[2],
        eps=float(eps),
        trial=trial,
        seed=cfg.seed,
        iterations=iterations,
        oracle_calls=calls,
        final_gap=gap,
        converged=converged,
        wall_time_s=wall,
    )


def run_experiment(cfg: ExperimentConfig, jobs=1) -> list:
    """All rows of a configuration, ordered by (dims, eps, trial).

    Cells are independent; with jobs > 1 they run on a thread pool while
    the returned ordering stays deterministic. A cell whose line search
    diverges yields a flagged row instead of aborting the run.
    """
    tasks = [
        (dims, eps, trial)
        for dims in cfg.dimension_matrix()
        for eps in cfg.eps
        for trial in range(cfg.trials)
    ]
    if jobs <= 1:
        return [run_cell(cfg, *task) for task in tasks]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(run_cell, cfg, *task) for task in tasks]
        return [f.result() for f in futures]


def fit_log_linear(eps_values, iteration_counts):
    """Least-squares fit iterations ~ a + b ln(1/eps); returns (slope, r_squared)."""
    x = np.log(1.0 / np.asarray(eps_values, dtype=float))
    y = np.asarray(iteration_counts, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two accuracy levels to fit")
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r_sq = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), r_sq


def fit_eps_exponent(eps_values, iteration_counts):
    """Fitted s in iterations ~ C * eps^-s; returns (s, r_squared)."""
    x = np.log(np.asarray(eps_values, dtype=float))
    y = np.log(np.asarray(iteration_counts, dtype=float))
    if x.size < 2:
        raise ValueError("need at least two accuracy levels to fit")
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r_sq = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(-slope), r_sq
