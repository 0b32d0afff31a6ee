"""Saddle-point reductions: min-max problems as monotone VIs.

A convex-concave problem over Q1 x Q2 becomes a VI through the operator
(grad_u f, -grad_v f) on the product set; a constrained minimization becomes
a saddle problem through its Lagrangian, with the multipliers compactified
to a nonnegative Euclidean ball.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import NormPair
from .prox import ConfigurationError, FeasibleSet, NonnegativeBall, ProductSet

NORM_MODES = ("max_sum", "l2_product")


@dataclass
class SaddleProblem:
    """Convex-concave problem min_u max_v f(u, v).

    grad_u / grad_v are subgradient selections taking the two blocks as
    separate arguments; `value` is optional and only needed for duality-gap
    sampling. norm_mode picks the product-space geometry: "max_sum" pairs
    the max-of-blocks primal norm with the sum-of-blocks dual, "l2_product"
    treats the concatenated vector as plain Euclidean.
    """

    grad_u: callable
    grad_v: callable
    q1: FeasibleSet
    q2: FeasibleSet
    value: callable = None
    norm_mode: str = "max_sum"

    def __post_init__(self):
        if self.norm_mode not in NORM_MODES:
            raise ConfigurationError(f"unknown norm mode {self.norm_mode!r}")

    def product_set(self) -> ProductSet:
        return ProductSet(self.q1, self.q2)

    def norms(self) -> NormPair:
        if self.norm_mode == "max_sum":
            return NormPair(kind="product_max", split=self.q1.dim)
        return NormPair()

    def split(self, x):
        x = np.asarray(x, dtype=float)
        return x[: self.q1.dim], x[self.q1.dim:]


def make_vi_operator(sp: SaddleProblem):
    """Monotone operator g(u, v) = (grad_u f, -grad_v f) on Q1 x Q2."""

    def operator(x):
        u, v = sp.split(x)
        return np.concatenate(
            [np.asarray(sp.grad_u(u, v), dtype=float), -np.asarray(sp.grad_v(u, v), dtype=float)]
        )

    return operator


def holder_constant_of_blocks(l11, l12, l21, l22, nu=None, mode="max_sum") -> float:
    """Smoothness constant of the assembled operator from block constants.

    max_sum: the plain sum of the four constants. l2_product:
    sqrt(2 * (l11^2 + l12^2 + l21^2 + l22^2)). The exponent nu is shared by
    all blocks and does not enter the constant.
    """
    for val in (l11, l12, l21, l22):
        if val < 0:
            raise ValueError("block constants must be nonnegative")
    if mode == "max_sum":
        return float(l11 + l12 + l21 + l22)
    if mode == "l2_product":
        return float(np.sqrt(2.0 * (l11**2 + l12**2 + l21**2 + l22**2)))
    raise ConfigurationError(f"unknown norm mode {mode!r}")


def duality_gap_bound(certificate) -> float:
    """Upper bound on max_v f(u_hat, v) - min_u f(u, v_hat).

    For a certificate produced by solving the operator of a saddle problem,
    its gap value dominates the primal-dual gap of the averaged pair up to
    the run's declared delta terms.
    """
    return certificate.gap_value


@dataclass
class ConstrainedProblem:
    """Convex minimization with convex inequality constraints.

    objective / objective_grad evaluate f; `constraints` is a list of
    (value, grad) callable pairs for the phi_p <= 0 constraints.
    lambda_radius bounds the multiplier block; a Slater point, when given,
    must be strictly feasible.
    """

    objective: callable
    objective_grad: callable
    constraints: list = field(default_factory=list)
    lambda_radius: float = 0.0
    slater_point: np.ndarray = None

    def __post_init__(self):
        if not self.lambda_radius > 0:
            raise ConfigurationError("lambda_radius must be positive")
        if self.slater_point is not None:
            values = [phi(self.slater_point) for phi, _ in self.constraints]
            if any(v >= 0 for v in values):
                raise ValueError("the Slater point must satisfy phi_p < 0 strictly")


def lagrangian_saddle(cp: ConstrainedProblem, q: FeasibleSet) -> SaddleProblem:
    """Saddle problem of the Lagrangian f(x) + sum_p lambda_p phi_p(x).

    The multiplier block lives on the nonnegative orthant intersected with
    a Euclidean ball of radius lambda_radius, whose composite
    clamp-then-scale projection is exact. With no constraints the operator
    degenerates to the plain minimization VI g = grad f.
    """
    m = len(cp.constraints)

    def grad_u(x, lam):
        g = np.asarray(cp.objective_grad(x), dtype=float).copy()
        for coef, (_, grad) in zip(lam, cp.constraints):
            g += coef * np.asarray(grad(x), dtype=float)
        return g

    def grad_v(x, _lam):
        return np.array([phi(x) for phi, _ in cp.constraints], dtype=float)

    def value(x, lam):
        total = float(cp.objective(x))
        for coef, (phi, _) in zip(lam, cp.constraints):
            total += coef * float(phi(x))
        return total

    return SaddleProblem(
        grad_u=grad_u,
        grad_v=grad_v,
        q1=q,
        q2=NonnegativeBall(cp.lambda_radius, m),
        value=value,
    )
