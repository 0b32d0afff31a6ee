"""Adaptive extragradient solver for monotone variational inequalities.

Each outer iteration runs a doubling line search on the curvature estimate
M_k: propose M, take the two prox steps

    w      = prox(z, g~(z), M)
    z_next = prox(z, g~(w), M)

and accept once the step-consistency condition below holds. Accepted
iterates are averaged with weights 1/M_i, and a computable dual-gap
certificate is assembled from the same weights via the feasible set's
support function. The method adapts to the operator's smoothness level
without being told it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EUCLIDEAN, SolveTrace, ToleranceBudget, dual_norm, norm
from .prox import FeasibleSet, ProxSetup, min_point, prox_map, support_max

# Guard against underflow when M keeps halving on long, easy runs.
_M_FLOOR = 1e-280


class LineSearchDivergence(RuntimeError):
    """Line search exceeded its trial limit; signals a non-conforming oracle."""

    def __init__(self, m_last, iteration, trace):
        super().__init__(
            f"line search stuck at iteration {iteration}: "
            f"condition still failing at M = {m_last:.6g}"
        )
        self.m_last = m_last
        self.iteration = iteration
        self.trace = trace


@dataclass(frozen=True)
class StoppingRule:
    """Outer-loop stopping criterion.

    max_outer_iters(K): stop after K accepted iterations.
    certified_gap(D): stop once D / S_k <= eps / 2 for a bound D on
        max_u V[z0](u); the certificate then reaches eps.
    inverse_sum_target(T): stop once S_k = sum 1/M_i >= T.
    """

    kind: str
    limit: float

    def __post_init__(self):
        if self.kind not in ("max_outer_iters", "certified_gap", "inverse_sum_target"):
            raise ValueError(f"unknown stopping rule {self.kind!r}")
        if not self.limit > 0:
            raise ValueError("stopping rule parameter must be positive")

    @classmethod
    def max_outer_iters(cls, k):
        return cls("max_outer_iters", float(k))

    @classmethod
    def certified_gap(cls, d_bound):
        return cls("certified_gap", float(d_bound))

    @classmethod
    def inverse_sum_target(cls, target):
        return cls("inverse_sum_target", float(target))

    def satisfied(self, iterations, s_k, eps) -> bool:
        if self.kind == "max_outer_iters":
            return iterations >= self.limit
        if self.kind == "certified_gap":
            return s_k > 0 and self.limit / s_k <= eps / 2.0
        return s_k >= self.limit


@dataclass
class Certificate:
    """Computable accuracy certificate of an averaged run.

    gap_value upper-bounds max_u <g(u), w_hat - u> up to the run's declared
    delta terms, where w_hat is the 1/M_i weighted average of the iterates
    and s_bar the matching average of the oracle answers.
    """

    iterates: list
    weights: np.ndarray
    s_k: float
    w_hat: np.ndarray
    s_bar: np.ndarray
    gap_value: float


def average(points, weights) -> np.ndarray:
    """Normalized weighted mean of a list of points."""
    if len(points) == 0:
        raise ValueError("cannot average an empty list")
    if len(points) != len(weights):
        raise ValueError("points and weights must have equal length")
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    acc = np.zeros(len(points[0]))
    for p, wi in zip(points, w):
        acc += wi * np.asarray(p, dtype=float)
    return acc / np.sum(w)


def check_condition(gw, gz, w, z_next, z, m, eps, delta_u, norms=EUCLIDEAN) -> bool:
    """Line-search acceptance test for a proposed curvature M.

    True iff <gw - gz, w - z_next> <= (M/2)(|w-z|^2 + |w-z_next|^2)
    + eps/2 + delta_u.
    """
    if not m > 0:
        raise ValueError("M must be positive")
    lhs = float(np.dot(np.asarray(gw) - np.asarray(gz), np.asarray(w) - np.asarray(z_next)))
    a = norm(norms, np.asarray(w) - np.asarray(z))
    b = norm(norms, np.asarray(w) - np.asarray(z_next))
    return lhs <= 0.5 * m * (a * a + b * b) + 0.5 * eps + delta_u


def gap_certificate(trace: SolveTrace, oracle_values, feasible: FeasibleSet) -> float:
    """Dual-gap value of a finished trace given the oracle answers g~(w_i).

    Evaluates (1/S_k) [sum_i M_i^-1 <g~(w_i), w_i> + max_u <-sum_i M_i^-1
    g~(w_i), u>], the exact maximum over u of the weighted residuals.
    """
    if trace.iterations == 0:
        raise ValueError("gap certificate needs a non-empty trace")
    if len(oracle_values) != trace.iterations:
        raise ValueError("one oracle value per accepted iterate required")
    weights = trace.weights()
    s_k = float(np.sum(weights))
    weighted_dual = np.zeros(len(oracle_values[0]))
    inner = 0.0
    for wi, g, x in zip(weights, oracle_values, trace.iterates):
        weighted_dual += wi * np.asarray(g, dtype=float)
        inner += wi * float(np.dot(g, x))
    value, _ = support_max(feasible, -weighted_dual)
    return (inner + value) / s_k


def default_m_init(oracle, feasible, delta_c, norms=EUCLIDEAN) -> float:
    """Difference-quotient initial curvature guess.

    Evaluates the oracle at the projections of the first two coordinate
    unit vectors and returns their dual-norm gap divided by sqrt(2); falls
    back to 1.0 for operators that cannot distinguish the two probes.
    """
    dim = feasible.dim
    e1 = np.zeros(dim)
    e1[0] = 1.0
    e2 = -e1 if dim == 1 else np.zeros(dim)
    if dim > 1:
        e2[1] = 1.0
    g1 = oracle(feasible.project(e1), delta_c)
    g2 = oracle(feasible.project(e2), delta_c)
    value = dual_norm(norms, np.asarray(g1) - np.asarray(g2)) / np.sqrt(2.0)
    return float(value) if value > 0 else 1.0


def solve(
    oracle,
    setup: ProxSetup,
    feasible: FeasibleSet,
    budget: ToleranceBudget,
    rule: StoppingRule,
    m_init=None,
    search_factor=2.0,
    norms=EUCLIDEAN,
    max_trials=60,
    max_outer=200_000,
    delta_c_factor=0.25,
):
    """Run the adaptive solver until the stopping rule triggers.

    Parameters
    ----------
    oracle : InexactOracle
        Operator evaluator; its declared delta_u feeds the acceptance test.
    setup, feasible : ProxSetup, FeasibleSet
        Proximal geometry; the run starts at z0 = arg min_Q d.
    budget : ToleranceBudget
        Target accuracy eps and declared uncontrolled errors. Each
        iteration requests controlled errors delta_c = delta_c_factor * eps
        (default eps/4) and prox tolerance eps/8 unless budget.prox_tol
        overrides it.
    rule : StoppingRule
        Outer stopping criterion.
    m_init : float, optional
        Initial curvature guess M_-1; defaults to the difference-quotient
        recipe of `default_m_init`.
    search_factor : float
        Line-search factor a > 1; each iteration first retries the previous
        M divided by a, then multiplies by a until acceptance.
    max_trials : int
        Per-iteration trial limit before LineSearchDivergence.
    max_outer : int
        Safety cap on accepted iterations; hitting it returns the best
        certificate so far flagged as not converged.

    Returns
    -------
    (Certificate, SolveTrace)
    """
    if search_factor <= 1.0:
        raise ValueError("search factor must exceed 1")
    if max_trials < 1 or max_outer < 1:
        raise ValueError("trial and iteration limits must be positive")
    eps = budget.eps
    delta_c = delta_c_factor * eps
    prox_tol = (budget.prox_tol if budget.prox_tol is not None else eps / 8.0) + budget.delta_pu

    if m_init is None:
        m_init = default_m_init(oracle, feasible, delta_c, norms)
    if not m_init > 0:
        raise ValueError("m_init must be positive")

    z = min_point(setup, feasible)
    trace = SolveTrace(m_init=float(m_init))
    dim = feasible.dim
    weighted_points = np.zeros(dim)
    weighted_duals = np.zeros(dim)
    weighted_inner = 0.0
    s_k = 0.0
    m_prev = float(m_init)
    accepted_duals = []

    for k in range(max_outer):
        g_z = oracle(z, delta_c)
        trials = 0
        while True:
            m_k = max(m_prev * search_factor ** (trials - 1), _M_FLOOR)
            w = prox_map(setup, feasible, z, g_z, m_k, prox_tol)
            g_w = oracle(w, delta_c)
            z_next = prox_map(setup, feasible, z, g_w, m_k, prox_tol)
            trials += 1
            if check_condition(g_w, g_z, w, z_next, z, m_k, eps, budget.delta_u, norms):
                break
            if trials >= max_trials:
                raise LineSearchDivergence(m_k, k, trace)

        weight = 1.0 / m_k
        s_k += weight
        weighted_points += weight * w
        weighted_duals += weight * np.asarray(g_w, dtype=float)
        weighted_inner += weight * float(np.dot(g_w, w))
        trace.append(m_k, trials, w)
        accepted_duals.append(g_w)
        z = z_next
        m_prev = m_k
        if rule.satisfied(k + 1, s_k, eps):
            trace.converged = True
            break

    support_value, _ = support_max(feasible, -weighted_duals)
    certificate = Certificate(
        iterates=trace.iterates,
        weights=trace.weights(),
        s_k=s_k,
        w_hat=weighted_points / s_k,
        s_bar=weighted_duals / s_k,
        gap_value=(weighted_inner + support_value) / s_k,
    )
    return certificate, trace
