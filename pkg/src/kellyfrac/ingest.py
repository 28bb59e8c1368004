"""Tick prices to per-tick returns, plus a seeded geometric-Brownian tick generator.

Input CSV has a ``timestamp,price`` header. Timestamps are opaque ordered
tokens (integers, decimals or ISO-8601 strings); they are checked to be
nondecreasing and otherwise ignored.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import BinaryIO, TextIO

import numpy as np
from scipy.optimize import brentq

from .constraints import confinement_interval
from .errors import DomainError, ParseError


@dataclass(frozen=True)
class TickSeries:
    prices: np.ndarray
    label: str = ""

    def __post_init__(self):
        p = np.asarray(self.prices, dtype=float).reshape(-1)
        if p.size == 0 or not np.all(np.isfinite(p)) or np.any(p <= 0):
            raise DomainError("prices must be a nonempty sequence of positive numbers")
        p.setflags(write=False)
        object.__setattr__(self, "prices", p)

    def __len__(self) -> int:
        return self.prices.shape[0]


@dataclass(frozen=True)
class ReturnStats:
    mu_hat: float
    sigma_hat: float
    x_min: float
    x_max: float
    m: int

    @property
    def confinement(self) -> tuple[float, float] | None:
        """Implied fraction interval [-1/x_max, -1/x_min], when the sample has both signs."""
        if self.x_min < 0 < self.x_max:
            return confinement_interval(self.x_min, self.x_max)
        return None

    def to_json(self) -> dict:
        conf = self.confinement
        return {
            "mu_hat": self.mu_hat,
            "sigma_hat": self.sigma_hat,
            "x_min": self.x_min,
            "x_max": self.x_max,
            "m": self.m,
            "confinement": list(conf) if conf is not None else None,
        }


def _timestamp_key(token: str):
    try:
        return (0, float(token))
    except ValueError:
        return (1, token)


def read_prices_csv(source: BinaryIO | TextIO, label: str = "") -> TickSeries:
    """Parse a ``timestamp,price`` CSV (one header line) into a TickSeries."""
    text = source.read()
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(1, "input is not valid UTF-8") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        next(reader)
    except StopIteration:
        raise ParseError(1, "missing header line") from None
    prices = []
    prev = None
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) != 2:
            raise ParseError(row_no, f"expected 2 fields, got {len(row)}")
        ts, raw = row[0].strip(), row[1].strip()
        try:
            price = float(raw)
        except ValueError:
            raise ParseError(row_no, f"price {raw!r} is not a number") from None
        if not (math.isfinite(price) and price > 0):
            raise ParseError(row_no, f"price {raw!r} is not positive")
        key = _timestamp_key(ts)
        if prev is not None:
            if key[0] != prev[0]:
                raise ParseError(row_no, "mixed numeric and text timestamps")
            if key < prev:
                raise ParseError(row_no, f"timestamp {ts!r} decreases")
        prev = key
        prices.append(price)
    if not prices:
        raise ParseError(2, "no price rows")
    return TickSeries(np.array(prices), label)


def write_prices_csv(ticks: TickSeries, stream: TextIO) -> None:
    stream.write("timestamp,price\n")
    for i, p in enumerate(ticks.prices):
        stream.write(f"{i},{float(p)!r}\n")


def returns_from_prices(ticks: TickSeries) -> np.ndarray:
    """Simple returns (S(k+1) - S(k)) / S(k); zero returns are kept."""
    p = ticks.prices
    if p.shape[0] < 2:
        raise DomainError("need at least two prices to form a return")
    return np.diff(p) / p[:-1]


def _gbm_noise(m: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal(m - 1)


def gbm_ticks(
    s0: float, mu_tick: float, sigma_tick: float, m: int, seed: int, label: str = "gbm"
) -> TickSeries:
    """m prices with S(k+1) = S(k) exp(mu_tick - sigma_tick^2/2 + sigma_tick Z(k))."""
    if not s0 > 0:
        raise DomainError(f"s0 must be positive, got {s0!r}")
    if m < 2:
        raise DomainError(f"need m >= 2 ticks, got {m!r}")
    if sigma_tick < 0:
        raise DomainError(f"sigma_tick must be >= 0, got {sigma_tick!r}")
    z = _gbm_noise(m, seed)
    log_steps = (mu_tick - 0.5 * sigma_tick**2) + sigma_tick * z
    logs = np.concatenate([[0.0], np.cumsum(log_steps)])
    return TickSeries(s0 * np.exp(logs), label)


def matched_drift(target_fraction: float, sigma_tick: float, m: int, seed: int) -> float:
    """Drift for which ``gbm_ticks(..., seed)`` has sample mu_hat/sigma_hat^2 = target.

    With m ~ 1e5 the sampling noise in the mean dwarfs a 1e-8 drift, so the
    drift is solved for against the realized noise rather than set directly.
    """
    if not sigma_tick > 0:
        raise DomainError("sigma_tick must be positive")
    z = _gbm_noise(m, seed)

    def excess(mu: float) -> float:
        r = np.expm1((mu - 0.5 * sigma_tick**2) + sigma_tick * z)
        return r.mean() / r.var() - target_fraction

    span = sigma_tick**2 * (abs(target_fraction) + 1.0) + 10.0 * sigma_tick / math.sqrt(m)
    lo, hi = -span, span
    while excess(lo) > 0:
        lo *= 2
    while excess(hi) < 0:
        hi *= 2
    return brentq(excess, lo, hi, xtol=1e-22, rtol=1e-14)


def summary_stats(returns) -> ReturnStats:
    """Population (divide-by-m) moments and extremes of a return sample."""
    x = np.asarray(returns, dtype=float).reshape(-1)
    if x.size == 0:
        raise DomainError("cannot summarize an empty return sequence")
    m = x.size
    lo, hi = float(x.min()), float(x.max())
    mean = math.fsum(x.tolist()) / m
    var = math.fsum(((x - mean) ** 2).tolist()) / m
    return ReturnStats(min(max(mean, lo), hi), math.sqrt(var), lo, hi, m)
