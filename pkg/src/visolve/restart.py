"""Restarted solver for strongly monotone operators.

Repeatedly runs the adaptive base solver on a Euclidean prox recentered at
the latest averaged point, halving the squared radius bound each stage; the
stage accuracy mu*eps/2 and the inverse-sum stopping target Omega/mu make
the distance to the solution contract linearly in the stage count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import EUCLIDEAN, ToleranceBudget, as_vector
from .mirror_prox import StoppingRule, solve
from .oracles import HolderSpec
from .prox import ProxSetup


@dataclass
class RestartState:
    """Where a restarted run currently stands.

    r_sq follows r0_sq * 2^-(p) + 2 (1 - 2^-p) * (eps/4 + (delta_u +
    2 delta_pu) / mu); the histories keep one entry per completed stage for
    contraction checks.
    """

    p: int
    x: np.ndarray
    r_sq: float
    total_inner_iterations: int
    r_sq_history: list = field(default_factory=list)
    points_history: list = field(default_factory=list)


def inner_iteration_bound(spec: HolderSpec, mu, eps, omega, r0_sq) -> int:
    """Worst-case total inner iterations for a Hölder, strongly monotone run.

    ceil( (l_nu/mu)^(2/(1+nu)) * 2^(2/(1+nu)) * omega / eps^((1-nu)/(1+nu))
          * log2(2 r0_sq / eps) ).
    """
    if not (mu > 0 and eps > 0 and omega > 0 and r0_sq > 0):
        raise ValueError("all bound parameters must be positive")
    power = 2.0 / (1.0 + spec.nu)
    value = (
        (spec.l_nu / mu) ** power
        * 2.0**power
        * omega
        / eps ** ((1.0 - spec.nu) / (1.0 + spec.nu))
        * math.log2(2.0 * r0_sq / eps)
    )
    return int(math.ceil(value))


def restart_solve(
    oracle,
    feasible,
    mu,
    budget: ToleranceBudget,
    x0,
    r0_sq,
    omega,
    m_init=None,
    search_factor=2.0,
    norms=EUCLIDEAN,
    max_trials=60,
    max_outer_per_stage=200_000,
):
    """Solve a mu-strongly monotone problem by restarting the base solver.

    The caller guarantees |x0 - x*|^2 <= r0_sq. Each stage runs the base
    solver with accuracy mu*eps/2 on a Euclidean prox centered at the
    current point and stops once sum 1/M_i >= omega/mu; the last accepted M
    carries over as the next stage's initial guess. Stages end once
    p > log2(2 r0_sq / eps), after which |x_p - x*|^2 <= eps + (2 delta_u +
    4 delta_pu)/mu.

    Returns (final point, RestartState, list of per-stage SolveTrace).
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    if not r0_sq > 0:
        raise ValueError("r0_sq must be positive")
    x_p = as_vector(x0, dim=feasible.dim)
    eps = budget.eps
    delta = eps / 4.0 + (budget.delta_u + 2.0 * budget.delta_pu) / mu
    threshold = math.log2(2.0 * r0_sq / eps)
    inner_budget = ToleranceBudget(
        eps=mu * eps / 2.0,
        delta_u=budget.delta_u,
        delta_pu=budget.delta_pu,
        prox_tol=budget.prox_tol,
    )
    rule = StoppingRule.inverse_sum_target(omega / mu)

    state = RestartState(
        p=0,
        x=x_p,
        r_sq=r0_sq,
        total_inner_iterations=0,
        r_sq_history=[float(r0_sq)],
        points_history=[x_p],
    )
    traces = []
    m_carry = m_init
    while True:
        setup = ProxSetup(
            kind="euclidean_half_sq", center=state.x, scale=math.sqrt(state.r_sq)
        )
        certificate, trace = solve(
            oracle,
            setup,
            feasible,
            inner_budget,
            rule,
            m_init=m_carry,
            search_factor=search_factor,
            norms=norms,
            max_trials=max_trials,
            max_outer=max_outer_per_stage,
        )
        m_carry = trace.m_values[-1]
        traces.append(trace)
        state.p += 1
        state.x = certificate.w_hat
        state.r_sq = r0_sq * 2.0 ** (-state.p) + 2.0 * (1.0 - 2.0 ** (-state.p)) * delta
        state.total_inner_iterations += trace.iterations
        state.r_sq_history.append(state.r_sq)
        state.points_history.append(state.x)
        if state.p > threshold:
            break
    return state.x, state, traces
