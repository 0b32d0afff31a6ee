"""Shared domain types: vectors, norm pairs, tolerance budgets, solve traces.

Points (primal) and dual vectors are plain 1-D float64 ndarrays; the helpers
here validate them and evaluate the two norm setups used by the solvers:
plain Euclidean, and the two-block product norm max(|u|, |v|) whose dual is
|s_u| + |s_v|.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Type aliases; both are dense 1-D float64 arrays.
Point = np.ndarray
DualVector = np.ndarray


def as_vector(x, dim=None) -> np.ndarray:
    """Validate and return a finite, non-empty 1-D float64 vector.

    Raises ValueError on NaN/Inf entries, wrong shape, or a mismatch
    against the expected dimension.
    """
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"expected a non-empty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    if dim is not None and v.size != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {v.size}")
    return v


@dataclass(frozen=True)
class NormPair:
    """A primal norm together with its dual.

    kind "euclidean": self-dual |x|_2.
    kind "product_max": |x| = max(|u|_2, |v|_2) on a two-block split,
    with dual |s|_* = |s_u|_2 + |s_v|_2. `split` is the u-block length.
    """

    kind: str = "euclidean"
    split: int | None = None

    def __post_init__(self):
        if self.kind not in ("euclidean", "product_max"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "product_max":
            if self.split is None or self.split < 0:
                raise ValueError("product_max norm needs a nonnegative split index")
        elif self.split is not None:
            raise ValueError("split only applies to product_max norms")


EUCLIDEAN = NormPair()


def _block_norms(pair, x):
    k = pair.split
    if k > x.size:
        raise ValueError(f"split {k} exceeds vector length {x.size}")
    return float(np.linalg.norm(x[:k])), float(np.linalg.norm(x[k:]))


def norm(pair: NormPair, x) -> float:
    """Primal norm of `x` under the pair."""
    x = np.asarray(x, dtype=float)
    if pair.kind == "euclidean":
        return float(np.linalg.norm(x))
    a, b = _block_norms(pair, x)
    return max(a, b)


def dual_norm(pair: NormPair, s) -> float:
    """Dual norm of `s` under the pair."""
    s = np.asarray(s, dtype=float)
    if pair.kind == "euclidean":
        return float(np.linalg.norm(s))
    a, b = _block_norms(pair, s)
    return a + b


@dataclass(frozen=True)
class ToleranceBudget:
    """Accuracy targets and declared uncontrolled errors for one solve.

    eps: target accuracy, > 0.
    delta_u: uncontrolled oracle error.
    delta_pu: uncontrolled prox-mapping error.
    prox_tol: controlled prox-mapping error; None lets the solver use its
        default schedule (eps / 8 per iteration).
    """

    eps: float
    delta_u: float = 0.0
    delta_pu: float = 0.0
    prox_tol: float | None = None

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.delta_u < 0 or self.delta_pu < 0:
            raise ValueError("uncontrolled errors must be nonnegative")
        if self.prox_tol is not None and self.prox_tol < 0:
            raise ValueError("prox_tol must be nonnegative")


@dataclass
class SolveTrace:
    """Per-iteration bookkeeping of one solver run.

    Records the accepted curvature estimate M_i, the number of line-search
    trials, the accepted iterate, and the model oracle-call count (two calls
    per trial). `s_values` holds the running sums of 1/M_i.
    """

    m_values: list = field(default_factory=list)
    inner_trials: list = field(default_factory=list)
    iterates: list = field(default_factory=list)
    oracle_calls: list = field(default_factory=list)
    s_values: list = field(default_factory=list)
    m_init: float = 0.0
    converged: bool = False

    def append(self, m, trials, w):
        if not m > 0:
            raise ValueError("M must be positive")
        if trials < 1:
            raise ValueError("each iteration runs at least one trial")
        self.m_values.append(float(m))
        self.inner_trials.append(int(trials))
        self.iterates.append(w)
        self.oracle_calls.append(2 * int(trials))
        prev = self.s_values[-1] if self.s_values else 0.0
        self.s_values.append(prev + 1.0 / float(m))

    @property
    def iterations(self) -> int:
        return len(self.m_values)

    @property
    def s_k(self) -> float:
        return self.s_values[-1] if self.s_values else 0.0

    @property
    def total_oracle_calls(self) -> int:
        return sum(self.oracle_calls)

    def weights(self) -> np.ndarray:
        """Averaging weights 1/M_i."""
        return 1.0 / np.asarray(self.m_values, dtype=float)
