"""Expected log-growth g(k) = sum_i p_i log(1 + k.x_i) and its gradient.

Values live in the extended reals: any atom with positive probability and
1 + k.x <= 0 makes the growth exactly ``NEG_INFINITY``. The boundary test is
done explicitly before any logarithm is taken, so no NaN can appear.
Sums over atoms use ``math.fsum`` (exactly rounded, order independent).
"""

from __future__ import annotations

import math

import numpy as np

from .distributions import DiscreteDistribution, support_extremes
from .errors import BoundaryError, DomainError

NEG_INFINITY = -math.inf


def as_fraction(k, dim: int) -> np.ndarray:
    """Validate a betting-fraction vector against a distribution dimension."""
    vec = np.atleast_1d(np.asarray(k, dtype=float))
    if vec.ndim != 1 or vec.shape[0] != dim:
        raise DomainError(f"fraction has dimension {vec.shape}, distribution has {dim}")
    if not np.all(np.isfinite(vec)):
        raise DomainError("fraction coordinates must be finite")
    return vec


def _live(dist: DiscreteDistribution) -> tuple[np.ndarray, np.ndarray]:
    mask = dist.probs > 0
    return dist.atoms[mask], dist.probs[mask]


def log_growth(dist: DiscreteDistribution, k) -> float:
    """Expected log-growth, or ``NEG_INFINITY`` if some live atom ruins the bettor."""
    k = as_fraction(k, dist.dim)
    atoms, probs = _live(dist)
    kx = atoms @ k
    if np.any(1.0 + kx <= 0.0):
        return NEG_INFINITY
    return math.fsum((probs * np.log1p(kx)).tolist())


def log_growth_gradient(dist: DiscreteDistribution, k) -> np.ndarray:
    """Gradient sum_i p_i x_i / (1 + k.x_i); only defined strictly inside the survival region."""
    k = as_fraction(k, dist.dim)
    atoms, probs = _live(dist)
    margin = 1.0 + atoms @ k
    if np.any(margin <= 0.0):
        raise BoundaryError("gradient requested at or beyond the survival boundary")
    w = probs / margin
    return np.array([math.fsum((w * atoms[:, j]).tolist()) for j in range(dist.dim)])


def feasible_interval(dist: DiscreteDistribution, cap: float) -> tuple[float, float]:
    """Scalar survival interval intersected with the leverage box [-cap, cap].

    A one-sided support leaves the other side bounded by ``cap`` only.
    """
    if dist.dim != 1:
        raise DomainError("feasible_interval needs a one-dimensional distribution")
    if not cap > 0:
        raise DomainError(f"cap must be positive, got {cap!r}")
    lo_x, hi_x = (float(v[0]) for v in support_extremes(dist))
    lo = max(-1.0 / hi_x, -cap) if hi_x > 0 else -cap
    hi = min(-1.0 / lo_x, cap) if lo_x < 0 else cap
    return lo, hi
