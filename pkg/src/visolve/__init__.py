"""Adaptive solvers for monotone variational inequalities and saddle problems.

Library surface: proximal setups and feasible sets, inexact operator
oracles, the adaptive extragradient solver with computable gap
certificates, its restarted variant for strongly monotone operators,
saddle-point reductions, and a seeded benchmark harness with CSV/JSON/SVG
reporting behind the `vi-solve` command.
"""

from .core import EUCLIDEAN, NormPair, SolveTrace, ToleranceBudget, as_vector, dual_norm, norm
from .mirror_prox import (
    Certificate,
    LineSearchDivergence,
    StoppingRule,
    average,
    check_condition,
    default_m_init,
    gap_certificate,
    solve,
)
from .oracles import HolderSpec, InexactOracle, delta_L_oracle, exact_oracle, holder_L, noisy_oracle
from .prox import (
    Box,
    ConfigurationError,
    EuclideanBall,
    FeasibleSet,
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
from .restart import RestartState, inner_iteration_bound, restart_solve
from .saddle import (
    ConstrainedProblem,
    SaddleProblem,
    duality_gap_bound,
    holder_constant_of_blocks,
    lagrangian_saddle,
    make_vi_operator,
)

__version__ = "0.1.0"
