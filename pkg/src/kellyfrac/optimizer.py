"""Maximization of expected log-growth, plus closed-form Kelly fractions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import (
    BernoulliCoin,
    DiscreteDistribution,
    ModelSpec,
    NormalReturns,
    Pathological,
    ToyBernoulli,
    from_spec,
)
from .errors import DomainError
from .growth import NEG_INFINITY, feasible_interval, log_growth, log_growth_gradient

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

CAP = "cap"
SURVIVAL = "survival"
INTERIOR = "interior"


@dataclass(frozen=True)
class OptimizerConfig:
    cap: float = 1.0
    tol_k: float = 1e-10
    tol_g: float = 1e-12
    max_iterations: int = 10_000

    def __post_init__(self):
        if not self.cap > 0:
            raise DomainError(f"cap must be positive, got {self.cap!r}")
        if not (self.tol_k > 0 and self.tol_g > 0):
            raise DomainError("tolerances must be positive")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")


@dataclass(frozen=True)
class OptimizationResult:
    k_star: np.ndarray
    g_star: float
    iterations: int
    converged: bool
    active_bound: str | None = None
    rationale: str | None = field(default=None, compare=False)

    @property
    def k(self) -> float:
        """Scalar fraction, for one-dimensional problems."""
        if self.k_star.shape != (1,):
            raise DomainError("k is only defined for scalar problems; use k_star")
        return float(self.k_star[0])

    def to_json(self) -> dict:
        out = {
            "k_star": [float(v) for v in self.k_star],
            "g_star": "-inf" if self.g_star == NEG_INFINITY else float(self.g_star),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "active_bound": self.active_bound,
        }
        if self.rationale is not None:
            out["rationale"] = self.rationale
        return out


def _better(ga: float, ka: float, gb: float, kb: float) -> bool:
    """Is (ka, ga) preferred over (kb, gb)? Higher growth, then smaller |k|."""
    if ga != gb:
        return ga > gb
    return abs(ka) < abs(kb)


def optimize_scalar(
    dist: DiscreteDistribution, cfg: OptimizerConfig = OptimizerConfig()
) -> OptimizationResult:
    """Golden-section search for the log-optimal scalar fraction.

    The search runs on the survival interval clipped to [-cap, cap]; growth
    is -inf at a survival endpoint whenever an atom sits at the support
    extreme, which golden-section tolerates since it only compares values.
    The endpoints and k = 0 are checked as candidates afterwards.
    """
    if dist.dim != 1:
        raise DomainError("optimize_scalar needs a one-dimensional distribution")
    lo, hi = feasible_interval(dist, cfg.cap)
    if lo == hi:
        return OptimizationResult(
            np.array([0.0]), 0.0, 0, True, SURVIVAL, rationale="degenerate interval"
        )

    def g(k: float) -> float:
        return log_growth(dist, [k])

    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    gc, gd = g(c), g(d)
    iterations = 0
    while b - a > cfg.tol_k and iterations < cfg.max_iterations:
        iterations += 1
        if _better(gc, c, gd, d):
            b, d, gd = d, c, gc
            c = b - INV_PHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + INV_PHI * (b - a)
            gd = g(d)
    converged = b - a <= cfg.tol_k

    mid = 0.5 * (a + b)
    best_k, best_g = mid, g(mid)
    for cand in (c, d, lo, hi, 0.0):
        gk = g(cand)
        if _better(gk, cand, best_g, best_k):
            best_k, best_g = cand, gk

    if best_k in (lo, hi):
        bound = CAP if abs(best_k) == cfg.cap else SURVIVAL
    else:
        bound = INTERIOR
    return OptimizationResult(np.array([best_k]), best_g, iterations, converged, bound)


def _project(k: np.ndarray, cap: float) -> np.ndarray:
    return np.clip(k, -cap, cap)


def optimize_vector(
    dist: DiscreteDistribution, cfg: OptimizerConfig = OptimizerConfig()
) -> OptimizationResult:
    """Projected gradient ascent on the box [-cap, cap]^d, starting from k = 0.

    Each iteration tries a step along the gradient, projects onto the box and
    backtracks (factor 0.5, Armijo constant 1e-4) until the growth increase is
    sufficient; a step landing on growth -inf always fails the test. The first
    trial step is 1.0, later ones use the Barzilai-Borwein length of the
    previous move.

    Stops when the accepted move is shorter than ``tol_k``, or when the growth
    gain drops below ``tol_g`` while the projected gradient is below
    sqrt(tol_g) * (1 + |grad g(0)|); a small gain alone is not trusted on
    badly conditioned problems.
    """
    d = dist.dim
    k = np.zeros(d)
    gk = 0.0
    grad = log_growth_gradient(dist, k)
    stationary_tol = math.sqrt(cfg.tol_g) * (1.0 + float(np.linalg.norm(grad)))
    step = 1.0
    converged = False
    iterations = 0
    while iterations < cfg.max_iterations:
        iterations += 1
        t = step
        while True:
            trial = _project(k + t * grad, cfg.cap)
            move = trial - k
            g_trial = log_growth(dist, trial)
            if g_trial != NEG_INFINITY and g_trial >= gk + 1e-4 * float(grad @ move):
                break
            t *= 0.5
            if np.linalg.norm(move) < cfg.tol_k:
                break
        move_norm = float(np.linalg.norm(move))
        if move_norm < cfg.tol_k or g_trial == NEG_INFINITY or g_trial < gk:
            converged = True
            break
        improvement = g_trial - gk
        new_grad = log_growth_gradient(dist, trial)
        sy = float(move @ (new_grad - grad))
        step = min(max(-float(move @ move) / sy, 1e-12), 1e12) if sy < 0 else 1.0
        k, gk, grad = trial, g_trial, new_grad
        if improvement < cfg.tol_g:
            pg = _project(k + grad, cfg.cap) - k
            if np.linalg.norm(pg) <= stationary_tol:
                converged = True
                break

    if np.any(np.abs(k) == cfg.cap):
        bound = CAP
    elif np.min(1.0 + dist.support @ k) <= cfg.tol_k:
        bound = SURVIVAL
    else:
        bound = INTERIOR
    return OptimizationResult(k, gk, iterations, converged, bound)


def optimize(dist: DiscreteDistribution, cfg: OptimizerConfig = OptimizerConfig()) -> OptimizationResult:
    """Dispatch on dimension: golden-section for scalars, gradient ascent otherwise."""
    return optimize_scalar(dist, cfg) if dist.dim == 1 else optimize_vector(dist, cfg)


# --- closed forms ------------------------------------------------------------


def coin_closed_form(p: float) -> float:
    """Even-money coin with win probability p: k* = 2p - 1."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    return 2.0 * p - 1.0


def empirical_coin_fraction(p_hat: float) -> float:
    """Data-driven coin bet max(2 p_hat - 1, 0)."""
    if not 0.0 <= p_hat <= 1.0:
        raise DomainError(f"p_hat must lie in [0, 1], got {p_hat!r}")
    return max(2.0 * p_hat - 1.0, 0.0)


def toy_closed_form(epsilon: float, x0: float) -> float:
    """Optimum for P(X=1) = 1-epsilon, P(X=-x0) = epsilon: (1 - epsilon(1+x0)) / x0."""
    if not x0 > 0:
        raise DomainError(f"x0 must be positive, got {x0!r}")
    if not 0.0 < epsilon < 1.0 / (1.0 + x0):
        raise DomainError(f"epsilon must lie in (0, 1/(1+x0)), got {epsilon!r}")
    return (1.0 - epsilon * (1.0 + x0)) / x0


def p_bad(epsilon: float, M: int) -> float:
    """Chance that M i.i.d. draws include at least one bad outcome of probability epsilon."""
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in [0, 1], got {epsilon!r}")
    if int(M) != M or M < 0:
        raise DomainError(f"M must be a nonnegative integer, got {M!r}")
    if M == 0 or epsilon == 0.0:
        return 0.0
    if epsilon == 1.0:
        return 1.0
    return -math.expm1(M * math.log1p(-epsilon))


def merton_fraction(mu_hat: float, sigma_hat: float) -> float:
    """Continuous-time log-optimal fraction mu / sigma^2."""
    if not sigma_hat > 0:
        raise DomainError(f"sigma_hat must be positive, got {sigma_hat!r}")
    return mu_hat / sigma_hat**2


def theoretical_kelly(spec: ModelSpec, cfg: OptimizerConfig = OptimizerConfig()) -> OptimizationResult:
    """Kelly fraction implied by a theoretical model.

    A normal model has support unbounded on both sides, so the only
    fraction with finite growth is 0, whatever mu and sigma are.
    """
    if isinstance(spec, NormalReturns):
        return OptimizationResult(
            np.array([0.0]), 0.0, 0, True, SURVIVAL, rationale="unbounded support"
        )
    if isinstance(spec, BernoulliCoin):
        raw = coin_closed_form(spec.p)
        k = min(max(raw, -cfg.cap), cfg.cap)
        bound = CAP if k != raw else INTERIOR
        return OptimizationResult(
            np.array([k]), log_growth(from_spec(spec), [k]), 0, True, bound, rationale="closed form"
        )
    if isinstance(spec, ToyBernoulli):
        raw = toy_closed_form(spec.epsilon, spec.x0)
        k = min(raw, cfg.cap)
        bound = CAP if k != raw else INTERIOR
        return OptimizationResult(
            np.array([k]), log_growth(from_spec(spec), [k]), 0, True, bound, rationale="closed form"
        )
    if isinstance(spec, Pathological):
        return optimize_scalar(from_spec(spec), cfg)
    raise TypeError(f"not a model spec: {spec!r}")
