"""Wealth recursion V(k+1) = (1 + K.X(k)) V(k) and the theory-vs-data experiments."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence, TextIO

import numpy as np

from .distributions import (
    BernoulliCoin,
    ModelSpec,
    Pathological,
    ToyBernoulli,
    empirical_from_samples,
    from_spec,
    gaussian_samples,
    sample_spec,
)
from .errors import DomainError, SurvivalViolated
from .growth import NEG_INFINITY
from .optimizer import OptimizerConfig, optimize_scalar, theoretical_kelly


@dataclass(frozen=True)
class WealthPath:
    """Account values V(0..N); ``multipliers`` holds the N factors 1 + K.X(k)."""

    values: np.ndarray
    ruined: bool
    multipliers: np.ndarray

    @property
    def n_bets(self) -> int:
        return self.values.shape[0] - 1

    def realized_growth(self) -> float:
        """(1/N) log(V(N)/V(0)), summed in log space so long paths cannot overflow; -inf once ruined."""
        if self.ruined:
            return NEG_INFINITY
        if self.n_bets == 0:
            return 0.0
        return math.fsum(np.log(self.multipliers).tolist()) / self.n_bets


def wealth_path(returns, k, v0: float = 1.0) -> WealthPath:
    """Apply the wealth recursion to a return sequence.

    A multiplier of exactly 0 absorbs wealth at 0 (ruin); a negative one
    raises :class:`SurvivalViolated` with the index of the offending bet.
    """
    if not v0 > 0:
        raise DomainError(f"initial wealth must be positive, got {v0!r}")
    x = np.asarray(returns, dtype=float)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if x.ndim == 1:
        x = x.reshape(-1, 1) if k.shape[0] == 1 else x.reshape(1, -1)
    if x.ndim != 2 or x.shape[1] != k.shape[0]:
        raise DomainError(f"returns of shape {x.shape} do not match fraction dimension {k.shape[0]}")
    mult = 1.0 + x @ k
    bad = np.flatnonzero(mult < 0)
    if bad.size:
        raise SurvivalViolated(int(bad[0]), float(mult[bad[0]]))
    with np.errstate(over="ignore"):
        values = v0 * np.concatenate([[1.0], np.cumprod(mult)])
    return WealthPath(values, bool(np.any(mult == 0)), mult)


def log_wealth_growth(returns, k) -> float:
    """(1/N) sum log(1 + k.X(k)), computed without forming the wealth path."""
    x = np.asarray(returns, dtype=float)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    mult = 1.0 + x @ k
    if np.any(mult <= 0):
        return NEG_INFINITY
    return math.fsum(np.log1p(x @ k).tolist()) / x.shape[0]


@dataclass(frozen=True)
class ComparisonReport:
    k_theory: float
    k_empirical: float
    m: int
    realized_growth_theory: float
    realized_growth_empirical: float
    bad_sample_seen: bool
    ruined_theory: bool = False
    ruined_empirical: bool = False

    def to_json(self) -> dict:
        out = asdict(self)
        for key in ("realized_growth_theory", "realized_growth_empirical"):
            if out[key] == NEG_INFINITY:
                out[key] = "-inf"
        return out


def _worst_atom(spec: ModelSpec) -> float | None:
    if isinstance(spec, ToyBernoulli):
        return -spec.x0
    if isinstance(spec, (BernoulliCoin, Pathological)):
        dist = from_spec(spec)
        return float(dist.support.min())
    return None


def _path_or_ruin(returns: np.ndarray, k: float) -> WealthPath:
    try:
        return wealth_path(returns, [k])
    except SurvivalViolated as exc:
        # losing more than the account counts as ruin from that bet on
        mult = np.maximum(1.0 + returns * k, 0.0)
        mult[exc.step] = 0.0
        with np.errstate(over="ignore"):
            values = np.concatenate([[1.0], np.cumprod(mult)])
        return WealthPath(values, True, mult)


def run_comparison(
    spec: ModelSpec,
    m: int,
    n_future: int,
    seed: int,
    cfg: OptimizerConfig = OptimizerConfig(),
) -> ComparisonReport:
    """Theoretician vs practitioner on the same future.

    The practitioner estimates an empirical PMF from ``m`` draws; both then
    bet on the same ``n_future`` fresh draws. ``bad_sample_seen`` reports
    whether the model's worst atom appeared among the estimation draws
    (always False for a normal model, which has no worst atom). A bettor whose
    fraction would lose more than the whole account is recorded as ruined.
    """
    if m < 1 or n_future < 1:
        raise DomainError("m and n_future must be >= 1")
    rng = np.random.default_rng(seed)
    estimation = sample_spec(spec, m, rng)
    future = sample_spec(spec, n_future, rng)

    k_theory = theoretical_kelly(spec, cfg).k
    k_emp = optimize_scalar(empirical_from_samples(estimation), cfg).k
    worst = _worst_atom(spec)
    bad_seen = bool(worst is not None and np.any(estimation == worst))

    path_t = _path_or_ruin(future, k_theory)
    path_e = _path_or_ruin(future, k_emp)
    return ComparisonReport(
        k_theory=k_theory,
        k_empirical=k_emp,
        m=m,
        realized_growth_theory=path_t.realized_growth(),
        realized_growth_empirical=path_e.realized_growth(),
        bad_sample_seen=bad_seen,
        ruined_theory=path_t.ruined,
        ruined_empirical=path_e.ruined,
    )


def mu_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid start, start+step, ..., stop."""
    if not step > 0 or stop < start:
        raise DomainError("need step > 0 and stop >= start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def sweep_kelly_vs_mu(
    mus: Sequence[float],
    sigma: float,
    m: int,
    seed: int,
    cfg: OptimizerConfig = OptimizerConfig(),
) -> list[tuple[float, float]]:
    """Empirical Kelly fraction of N(mu, sigma) samples across a grid of means.

    One standard-normal noise vector is shared by every mu (common random
    numbers), so the curve reflects mu and not a fresh sample minimum.
    """
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    z = gaussian_samples(0.0, 1.0, m, seed).values[:, 0]
    out = []
    for mu in mus:
        dist = empirical_from_samples(mu + sigma * z)
        out.append((float(mu), optimize_scalar(dist, cfg).k))
    return out


def write_sweep_csv(rows: Sequence[tuple[float, float]], stream: TextIO) -> None:
    stream.write("mu,k_hat\n")
    for mu, k in rows:
        stream.write(f"{mu!r},{k!r}\n")
