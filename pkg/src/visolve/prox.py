"""Proximal setups and feasible sets.

A ProxSetup bundles a distance-generating function d with its subgradient;
the feasible sets expose membership, Euclidean projection, support-function
maximization, and the closed-form prox-mapping solvers used by the solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EUCLIDEAN, as_vector

# Entropy iterates are clamped here before logs; perturbs divergences by a
# negligible, documented amount while avoiding -inf.
ENTROPY_CLAMP = 1e-300


class ConfigurationError(ValueError):
    """Raised when a (prox setup, feasible set) pairing is not supported."""


@dataclass(frozen=True)
class ProxSetup:
    """Distance-generating function with optional recentering.

    kind "euclidean_half_sq": d(x) = |x - center|^2 / 2. Recentring at
    (center, scale) follows scale^2 * d((x - center)/scale), which for the
    quadratic collapses back to |x - center|^2 / 2, so `scale` is carried
    only for bookkeeping.

    kind "entropy": d(x) = sum x_i log x_i + log n on the probability
    simplex, normalized so the uniform point has d = 0. Recentring is not
    supported for entropy.
    """

    kind: str = "euclidean_half_sq"
    center: np.ndarray | None = None
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("euclidean_half_sq", "entropy"):
            raise ConfigurationError(f"unknown prox kind {self.kind!r}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        if self.kind == "entropy" and (self.center is not None or self.scale != 1.0):
            raise ConfigurationError("entropy prox does not support recentering")
        if self.center is not None:
            object.__setattr__(self, "center", as_vector(self.center))

    def _shift(self, x):
        return x if self.center is None else x - self.center

    def d(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if self.kind == "euclidean_half_sq":
            s = self._shift(x)
            return 0.5 * float(np.dot(s, s))
        xc = np.maximum(x, ENTROPY_CLAMP)
        return float(np.sum(x * np.log(xc))) + np.log(x.size)

    def grad_d(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "euclidean_half_sq":
            return self._shift(x)
        return 1.0 + np.log(np.maximum(x, ENTROPY_CLAMP))


def bregman(setup: ProxSetup, z, x) -> float:
    """Divergence d(x) - d(z) - <grad d(z), x - z>; nonnegative.

    Under the entropy setup z must be strictly positive (interior of the
    simplex); zero entries raise a domain error.
    """
    z = np.asarray(z, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.shape != z.shape:
        raise ValueError("bregman arguments must share a dimension")
    if setup.kind == "euclidean_half_sq":
        d = x - z
        return 0.5 * float(np.dot(d, d))
    if np.any(z <= 0):
        raise ValueError("entropy Bregman divergence needs strictly positive z")
    pos = x > 0
    kl = float(np.sum(x[pos] * np.log(x[pos] / z[pos])))
    # correction vanishes on the simplex where both sum to one
    return kl + float(np.sum(z) - np.sum(x))


class FeasibleSet:
    """Convex compact domain; concrete sets implement the hooks below."""

    dim: int

    def contains(self, x, tol=1e-9) -> bool:
        raise NotImplementedError

    def project(self, y) -> np.ndarray:
        """Euclidean projection onto the set."""
        raise NotImplementedError

    def support(self, s):
        """(max_{u in set} <s, u>, attaining point)."""
        raise NotImplementedError

    def diameter(self) -> float:
        """Euclidean diameter bound max |x - y| over the set."""
        raise NotImplementedError

    def sample(self, rng) -> np.ndarray:
        """A random member, for sampling-based tests and checks."""
        raise NotImplementedError


class EuclideanBall(FeasibleSet):
    def __init__(self, center, radius):
        self.center = as_vector(center)
        if not radius > 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)
        self.dim = self.center.size

    def contains(self, x, tol=1e-9):
        return np.linalg.norm(np.asarray(x) - self.center) <= self.radius + tol

    def project(self, y):
        d = np.asarray(y, dtype=float) - self.center
        n = np.linalg.norm(d)
        if n <= self.radius:
            return self.center + d
        return self.center + d * (self.radius / n)

    def support(self, s):
        s = np.asarray(s, dtype=float)
        n = np.linalg.norm(s)
        if n == 0.0:
            return 0.0 + float(np.dot(s, self.center)), self.center.copy()
        arg = self.center + s * (self.radius / n)
        return float(np.dot(s, self.center)) + self.radius * n, arg

    def diameter(self):
        return 2.0 * self.radius

    def sample(self, rng):
        d = rng.standard_normal(self.dim)
        n = np.linalg.norm(d)
        if n == 0.0:
            return self.center.copy()
        r = self.radius * rng.uniform() ** (1.0 / self.dim)
        return self.center + d * (r / n)


class Simplex(FeasibleSet):
    """Standard probability simplex {x >= 0, sum x = 1}."""

    def __init__(self, dim):
        if dim < 1:
            raise ValueError("simplex dimension must be at least 1")
        self.dim = int(dim)

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= -tol) and abs(float(np.sum(x)) - 1.0) <= tol * max(1, self.dim))

    def project(self, y):
        # sort-based Euclidean projection onto the simplex
        v = np.asarray(y, dtype=float)
        u = np.sort(v)[::-1]
        css = np.cumsum(u)
        rho = np.nonzero(u * np.arange(1, v.size + 1) > (css - 1.0))[0][-1]
        theta = (css[rho] - 1.0) / (rho + 1.0)
        return np.maximum(v - theta, 0.0)

    def support(self, s):
        s = np.asarray(s, dtype=float)
        i = int(np.argmax(s))  # lowest index among ties
        arg = np.zeros(self.dim)
        arg[i] = 1.0
        return float(s[i]), arg

    def diameter(self):
        return float(np.sqrt(2.0)) if self.dim > 1 else 0.0

    def sample(self, rng):
        e = rng.exponential(size=self.dim)
        return e / np.sum(e)


class Box(FeasibleSet):
    def __init__(self, lo, hi):
        self.lo = as_vector(lo)
        self.hi = as_vector(hi, dim=self.lo.size)
        if np.any(self.hi < self.lo):
            raise ValueError("box needs lo <= hi componentwise")
        self.dim = self.lo.size

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))

    def project(self, y):
        return np.clip(np.asarray(y, dtype=float), self.lo, self.hi)

    def support(self, s):
        s = np.asarray(s, dtype=float)
        arg = np.where(s > 0, self.hi, self.lo)
        return float(np.dot(s, arg)), arg

    def diameter(self):
        return float(np.linalg.norm(self.hi - self.lo))

    def sample(self, rng):
        return self.lo + rng.uniform(size=self.dim) * (self.hi - self.lo)


class NonnegativeBall(FeasibleSet):
    """Nonnegative orthant intersected with a centered Euclidean ball.

    Projection composes clamp-to-orthant with radial scaling, which is exact
    for a cone intersected with a centered ball. A zero dimension is allowed
    so unconstrained Lagrangian problems degenerate gracefully.
    """

    def __init__(self, radius, dim):
        if not radius > 0:
            raise ValueError("radius must be positive")
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        self.radius = float(radius)
        self.dim = int(dim)

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        if x.size == 0:
            return True
        return bool(np.all(x >= -tol) and np.linalg.norm(x) <= self.radius + tol)

    def project(self, y):
        p = np.maximum(np.asarray(y, dtype=float), 0.0)
        n = np.linalg.norm(p)
        if n > self.radius:
            p = p * (self.radius / n)
        return p

    def support(self, s):
        s = np.asarray(s, dtype=float)
        sp = np.maximum(s, 0.0)
        n = np.linalg.norm(sp)
        if n == 0.0:
            return 0.0, np.zeros(self.dim)
        return self.radius * float(n), sp * (self.radius / n)

    def diameter(self):
        if self.dim == 0:
            return 0.0
        if self.dim == 1:
            return self.radius
        return self.radius * float(np.sqrt(2.0))

    def sample(self, rng):
        if self.dim == 0:
            return np.zeros(0)
        d = np.abs(rng.standard_normal(self.dim))
        n = np.linalg.norm(d)
        if n == 0.0:
            return np.zeros(self.dim)
        r = self.radius * rng.uniform() ** (1.0 / self.dim)
        return d * (r / n)


class ProductSet(FeasibleSet):
    """Cartesian product of two sets over a concatenated coordinate vector."""

    def __init__(self, first, second):
        self.first = first
        self.second = second
        self.dim = first.dim + second.dim
        self.split = first.dim

    def blocks(self, x):
        x = np.asarray(x, dtype=float)
        return x[: self.split], x[self.split:]

    def contains(self, x, tol=1e-9):
        u, v = self.blocks(x)
        return self.first.contains(u, tol) and self.second.contains(v, tol)

    def project(self, y):
        u, v = self.blocks(y)
        return np.concatenate([self.first.project(u), self.second.project(v)])

    def support(self, s):
        su, sv = self.blocks(s)
        val_u, arg_u = self.first.support(su)
        val_v, arg_v = self.second.support(sv)
        return val_u + val_v, np.concatenate([arg_u, arg_v])

    def diameter(self):
        return float(np.hypot(self.first.diameter(), self.second.diameter()))

    def sample(self, rng):
        return np.concatenate([self.first.sample(rng), self.second.sample(rng)])


def support_max(feasible: FeasibleSet, s):
    """Support function max_{u in Q} <s, u> and a maximizer."""
    s = np.asarray(s, dtype=float)
    if s.size != feasible.dim:
        raise ValueError(f"dual vector dim {s.size} != set dim {feasible.dim}")
    value, arg = feasible.support(s)
    return float(value), arg


def min_point(setup: ProxSetup, feasible: FeasibleSet) -> np.ndarray:
    """arg min of d over the set: the solver's starting point z_0."""
    if setup.kind == "euclidean_half_sq":
        center = setup.center if setup.center is not None else np.zeros(feasible.dim)
        return feasible.project(center)
    if not isinstance(feasible, Simplex):
        raise ConfigurationError("entropy prox requires a simplex feasible set")
    return np.full(feasible.dim, 1.0 / feasible.dim)


def prox_map(setup: ProxSetup, feasible: FeasibleSet, z, g, m, tol=0.0):
    """Solve min_{x in Q} <g, x> + m * V[z](x) in closed form.

    The returned point satisfies the variational inequality
    <g + m (grad d(x) - grad d(z)), u - x> >= -tol for all u in Q; the
    shipped (setup, set) pairs solve it exactly, so any tol >= 0 is met up
    to floating-point error.
    """
    if not m > 0:
        raise ValueError("prox weight m must be positive")
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    z = np.asarray(z, dtype=float)
    g = np.asarray(g, dtype=float)
    if setup.kind == "euclidean_half_sq":
        return feasible.project(z - g / m)
    if not isinstance(feasible, Simplex):
        raise ConfigurationError("entropy prox requires a simplex feasible set")
    logits = np.log(np.maximum(z, ENTROPY_CLAMP)) - g / m
    logits -= np.max(logits)
    x = np.exp(logits)
    return x / np.sum(x)


def omega_bound(setup: ProxSetup, feasible: FeasibleSet) -> float:
    """Constant Omega with d(x) <= Omega/2 whenever |x| <= 1.

    Euclidean: 1. Entropy on the n-simplex: 2 log n (conservative; the
    entropy range over the whole simplex already is log n).
    """
    if setup.kind == "euclidean_half_sq":
        return 1.0
    return 2.0 * float(np.log(feasible.dim)) if feasible.dim > 1 else 0.0


def bregman_radius_bound(setup: ProxSetup, feasible: FeasibleSet) -> float:
    """Upper bound on max_u V[z0](u) with z0 = min_point(setup, feasible).

    Euclidean setups use the diameter bound diam^2 / 2, which is uniform in
    the prox center; entropy on the simplex uses the exact log n.
    """
    if setup.kind == "euclidean_half_sq":
        d = feasible.diameter()
        return 0.5 * d * d
    if not isinstance(feasible, Simplex):
        raise ConfigurationError("entropy prox requires a simplex feasible set")
    return float(np.log(feasible.dim))


def product_norms(feasible: ProductSet):
    """NormPair for the two-block product norm aligned with a product set."""
    from .core import NormPair

    return NormPair(kind="product_max", split=feasible.split)


__all__ = [
    "Box",
    "ConfigurationError",
    "ENTROPY_CLAMP",
    "EuclideanBall",
    "FeasibleSet",
    "NonnegativeBall",
    "ProductSet",
    "ProxSetup",
    "Simplex",
    "bregman",
    "bregman_radius_bound",
    "min_point",
    "omega_bound",
    "product_norms",
    "prox_map",
    "support_max",
]
