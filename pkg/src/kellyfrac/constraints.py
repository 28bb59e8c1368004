"""Support functions of return supports and the resulting bet-size constraint.

An optimal fraction vector k must satisfy h(-k) <= 1, where
h(y) = sup_{x in support} y.x. The set of such k is an intersection of
half-spaces {k : -k.x <= 1}, hence closed and convex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TextIO, Union

import numpy as np

from .errors import DomainError, UnboundedBoundaryError


def _vec(y, dim: int) -> np.ndarray:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.ndim != 1 or y.shape[0] != dim:
        raise DomainError(f"vector of shape {y.shape} does not match set dimension {dim}")
    return y


@dataclass(frozen=True)
class Interval:
    """Scalar support [x_min, x_max]; endpoints may be infinite."""

    x_min: float
    x_max: float

    def __post_init__(self):
        if math.isnan(self.x_min) or math.isnan(self.x_max) or self.x_min > self.x_max:
            raise DomainError(f"invalid interval [{self.x_min!r}, {self.x_max!r}]")

    dim = 1

    def support(self, y) -> float:
        (t,) = _vec(y, 1)
        if t == 0.0:
            return 0.0
        return max(t * self.x_min, t * self.x_max)


@dataclass(frozen=True)
class Hypercube:
    """Box |x_i - center_i| <= half_widths_i."""

    center: np.ndarray
    half_widths: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        w = np.atleast_1d(np.asarray(self.half_widths, dtype=float))
        if c.ndim != 1 or c.shape != w.shape:
            raise DomainError("center and half_widths must be vectors of equal length")
        if not np.all(w > 0) or not np.all(np.isfinite(w)) or not np.all(np.isfinite(c)):
            raise DomainError("half widths must be positive and finite")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "half_widths", w)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def support(self, y) -> float:
        y = _vec(y, self.dim)
        return float(np.abs(y) @ self.half_widths + y @ self.center)

    def vertices(self) -> np.ndarray:
        signs = np.array(np.meshgrid(*([[-1.0, 1.0]] * self.dim), indexing="ij"))
        signs = signs.reshape(self.dim, -1).T
        return self.center + signs * self.half_widths


@dataclass(frozen=True)
class Hypersphere:
    """Euclidean ball ||x - center|| <= radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        if c.ndim != 1 or not np.all(np.isfinite(c)):
            raise DomainError("center must be a finite vector")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise DomainError(f"radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "center", c)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def support(self, y) -> float:
        y = _vec(y, self.dim)
        return float(self.radius * np.linalg.norm(y) + y @ self.center)


@dataclass(frozen=True)
class AtomHull:
    """Finite point set; its support function equals that of its convex hull."""

    points: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        if p.ndim == 1:
            p = p.reshape(-1, 1)
        if p.ndim != 2 or p.shape[0] == 0 or not np.all(np.isfinite(p)):
            raise DomainError("AtomHull needs a nonempty array of finite points")
        object.__setattr__(self, "points", p)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def support(self, y) -> float:
        y = _vec(y, self.dim)
        return float(np.max(self.points @ y))


SupportSet = Union[Interval, Hypercube, Hypersphere, AtomHull]


def support_function(support_set: SupportSet, y) -> float:
    """h(y) = sup_{x in set} y.x; may be +inf for an unbounded Interval."""
    return support_set.support(y)


def kelly_feasible(support_set: SupportSet, k) -> bool:
    """True iff h(-k) <= 1. Boundary points count as feasible."""
    k = _vec(k, support_set.dim)
    return bool(support_set.support(-k) <= 1.0)


def confinement_interval(x_min: float, x_max: float) -> tuple[float, float]:
    """[-1/x_max, -1/x_min] for a scalar support with x_min < 0 < x_max.

    Infinite extremes map to 0, so a support unbounded on both sides gives [0, 0].
    """
    if not (x_min < 0.0 < x_max):
        raise DomainError(f"need x_min < 0 < x_max, got ({x_min!r}, {x_max!r})")
    # + 0.0 turns -0.0 into 0.0
    return -1.0 / x_max + 0.0, -1.0 / x_min + 0.0


@dataclass(frozen=True)
class Polyline:
    """Boundary curve sampled at angles ``theta``; ``points`` has shape (n, 2)."""

    theta: np.ndarray
    points: np.ndarray

    def write_csv(self, stream: TextIO) -> None:
        stream.write("theta,k1,k2\n")
        for t, (a, b) in zip(self.theta, self.points):
            stream.write(f"{float(t)!r},{float(a)!r},{float(b)!r}\n")


def sphere_constraint_boundary(x0, r: float, n_points: int) -> Polyline:
    """Boundary of {k : r||k|| - k.x0 <= 1} in the plane.

    Along direction u(theta) the boundary sits at radius 1 / (r - u.x0).
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (2,):
        raise DomainError("sphere boundary is only defined for a 2-vector center")
    if n_points < 3:
        raise DomainError(f"need at least 3 points, got {n_points!r}")
    if not r > np.linalg.norm(x0):
        raise UnboundedBoundaryError(
            f"radius {r!r} <= ||x0|| = {np.linalg.norm(x0)!r}: constraint set is unbounded"
        )
    theta = 2.0 * np.pi * np.arange(n_points) / n_points
    u = np.column_stack([np.cos(theta), np.sin(theta)])
    rho = 1.0 / (r - u @ x0)
    return Polyline(theta, rho[:, None] * u)
