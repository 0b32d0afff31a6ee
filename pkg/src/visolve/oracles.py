"""Inexact operator oracles and the adapter constructions around them.

An oracle answers g~(x, delta_c) and declares its uncontrolled error
delta_u; the solvers never see the underlying operator directly. Adapters
cover exact evaluation, bounded additive noise on a bounded set, and
wrapping a (delta, L) first-order oracle of a convex function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EUCLIDEAN, dual_norm
from .rng import stream


@dataclass(frozen=True)
class HolderSpec:
    """Smoothness class: |g(x) - g(y)|_* <= l_nu * |x - y|^nu."""

    nu: float
    l_nu: float

    def __post_init__(self):
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError("nu must lie in [0, 1]")
        if not self.l_nu > 0:
            raise ValueError("l_nu must be positive")


def holder_L(spec: HolderSpec, delta_c: float) -> float:
    """Effective Lipschitz constant of a Hölder operator at controlled error delta_c.

    L(delta_c) = (1 / (2 delta_c))^((1-nu)/(1+nu)) * l_nu^(2/(1+nu));
    constant in delta_c at nu = 1, decreasing in delta_c for nu < 1.
    """
    if not delta_c > 0:
        raise ValueError("delta_c must be positive")
    expo = (1.0 - spec.nu) / (1.0 + spec.nu)
    return (1.0 / (2.0 * delta_c)) ** expo * spec.l_nu ** (2.0 / (1.0 + spec.nu))


class InexactOracle:
    """Callable operator evaluator g~(x, delta_c) with declared errors.

    evaluate(x, delta_c) must be deterministic for fixed arguments. `exact`
    optionally exposes the underlying ground-truth operator for test
    oracles; `lipschitz` records L(delta_c) == L metadata for (delta, L)
    wrappers.
    """

    def __init__(self, evaluate, delta_u=0.0, exact=None, lipschitz=None):
        if delta_u < 0:
            raise ValueError("delta_u must be nonnegative")
        self.evaluate = evaluate
        self.delta_u = float(delta_u)
        self.exact = exact
        self.lipschitz = lipschitz

    def __call__(self, x, delta_c):
        return self.evaluate(x, delta_c)


def exact_oracle(g) -> InexactOracle:
    """Oracle returning g(x) exactly; delta_u = 0."""
    return InexactOracle(lambda x, _dc: g(x), delta_u=0.0, exact=g)


def point_noise(seed, x, bound, norms=EUCLIDEAN):
    """Deterministic per-point noise with dual norm at most `bound`.

    The direction is a normalized Gaussian sample and the radius uniform in
    [0, bound], both drawn from a Philox stream keyed by (seed, bytes of x),
    so repeated evaluation at the same point returns the same noise.
    """
    if bound == 0.0:
        return np.zeros(np.asarray(x).size)
    rng = stream(seed, "point-noise", np.asarray(x, dtype=float).tobytes())
    direction = rng.standard_normal(np.asarray(x).size)
    scale = dual_norm(norms, direction)
    if scale == 0.0:
        return np.zeros(np.asarray(x).size)
    return direction * (rng.uniform() * bound / scale)


def noisy_oracle(g, noise_bound, diameter, seed, norms=EUCLIDEAN) -> InexactOracle:
    """Oracle returning g(x) plus bounded additive noise on a bounded set.

    `diameter` must dominate the feasible set's diameter; the declared
    uncontrolled error is then delta_u = 2 * noise_bound * diameter.
    """
    if noise_bound < 0:
        raise ValueError("noise_bound must be nonnegative")
    if diameter < 0:
        raise ValueError("diameter must be nonnegative")

    def evaluate(x, _dc):
        return g(x) + point_noise(seed, x, noise_bound, norms)

    return InexactOracle(evaluate, delta_u=2.0 * noise_bound * diameter, exact=g)


def delta_L_oracle(f_oracle, delta, L, value_error_bound=None, diameter=None) -> InexactOracle:
    """Wrap a (delta, L) first-order oracle of a convex function.

    f_oracle(y) returns the pair (f_delta(y), g_delta(y)). The declared
    uncontrolled error is 3 * delta; when a bound on |g_delta - g|_* and a
    set diameter are supplied, the declaration grows to cover the dual-side
    inequality as well (the two bounds are independent inputs).
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    delta_u = 3.0 * delta
    if value_error_bound is not None:
        if diameter is None:
            raise ValueError("value_error_bound needs the set diameter")
        delta_u = max(delta_u, float(value_error_bound) * float(diameter))

    def evaluate(x, _dc):
        return f_oracle(x)[1]

    return InexactOracle(evaluate, delta_u=delta_u, lipschitz=float(L))
