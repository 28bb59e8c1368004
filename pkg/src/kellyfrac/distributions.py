"""Discrete return distributions, named theoretical models and seeded samplers.

Every distribution handed to the growth and optimizer modules is a
:class:`DiscreteDistribution`: a finite set of atoms with probabilities.
Empirical PMFs put mass ``multiplicity / m`` on each distinct sample.

Random numbers come from numpy's ``PCG64`` bit generator
(``numpy.random.default_rng(seed)``) everywhere in the package.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO, Union

import numpy as np

from .errors import ContinuousModelError, DomainError, ParseError

PROB_SUM_TOL = 1e-12

# theta = 1/2 + sum_{k>=1} 1/k^2
PATHOLOGICAL_THETA = 0.5 + math.pi**2 / 6


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _as_points(values, what: str) -> np.ndarray:
    """Coerce a sequence of scalars or d-vectors to a float (n, d) array."""
    if isinstance(values, np.ndarray):
        arr = values.astype(float, copy=True)
    else:
        rows = list(values)
        if not rows:
            raise DomainError(f"{what} must be nonempty")
        first = np.atleast_1d(np.asarray(rows[0], dtype=float))
        d = first.shape[0]
        for i, r in enumerate(rows):
            if np.ndim(r) > 1 or np.atleast_1d(np.asarray(r)).shape[0] != d:
                raise DomainError(f"{what}: point {i} does not have dimension {d}")
        arr = np.asarray(rows, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DomainError(f"{what} must be a nonempty sequence of points")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{what} must be finite")
    return arr


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite atom set with probabilities.

    ``atoms`` is stored as an ``(n, d)`` array even for scalar returns, so
    ``dist.atoms[:, 0]`` is the scalar view.
    """

    atoms: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        atoms = _as_points(self.atoms, "atoms")
        probs = np.asarray(self.probs, dtype=float).reshape(-1).copy()
        if probs.shape[0] != atoms.shape[0]:
            raise DomainError(
                f"{atoms.shape[0]} atoms but {probs.shape[0]} probabilities"
            )
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise DomainError("probabilities must be finite and nonnegative")
        total = math.fsum(probs.tolist())
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "atoms", _frozen(atoms))
        object.__setattr__(self, "probs", _frozen(probs))

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    @property
    def size(self) -> int:
        return self.atoms.shape[0]

    @property
    def support(self) -> np.ndarray:
        """Atoms carrying positive probability."""
        return self.atoms[self.probs > 0]

    def mean(self) -> np.ndarray:
        return np.array(
            [math.fsum((self.probs * self.atoms[:, j]).tolist()) for j in range(self.dim)]
        )

    def __repr__(self) -> str:
        return f"DiscreteDistribution(n={self.size}, d={self.dim})"


@dataclass(frozen=True)
class SampleSet:
    values: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(_as_points(self.values, "samples")))

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.values.shape[0]


# --- theoretical models ----------------------------------------------------


@dataclass(frozen=True)
class BernoulliCoin:
    """Even-money coin: +1 with probability ``p``, -1 otherwise."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"coin probability must lie in [0, 1], got {self.p!r}")


@dataclass(frozen=True)
class ToyBernoulli:
    """+1 with probability ``1 - epsilon``, ``-x0`` with probability ``epsilon``."""

    epsilon: float
    x0: float

    def __post_init__(self):
        if not self.x0 > 0:
            raise DomainError(f"x0 must be positive, got {self.x0!r}")
        if not 0.0 < self.epsilon < 1.0 / (1.0 + self.x0):
            raise DomainError(
                f"epsilon must lie in (0, 1/(1+x0)) = (0, {1.0 / (1.0 + self.x0)!r}),"
                f" got {self.epsilon!r}"
            )


@dataclass(frozen=True)
class NormalReturns:
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")
        if not math.isfinite(self.mu):
            raise DomainError("mu must be finite")


@dataclass(frozen=True)
class Pathological:
    """Distribution whose log-growth at ``k_ref`` diverges despite confinement.

    Atom 1 has weight 1/(2 theta); atom (e^-k - 1)/k_ref has weight
    1/(k^2 theta) for k = 1..n_terms. Truncated weights are renormalized.
    """

    k_ref: float
    n_terms: int

    def __post_init__(self):
        if not 0.0 < self.k_ref < 1.0:
            raise DomainError(f"k_ref must lie in (0, 1), got {self.k_ref!r}")
        if int(self.n_terms) != self.n_terms or self.n_terms < 1:
            raise DomainError(f"n_terms must be an integer >= 1, got {self.n_terms!r}")


ModelSpec = Union[BernoulliCoin, ToyBernoulli, NormalReturns, Pathological]

_SPEC_NAMES = {
    "coin": (BernoulliCoin, (float,)),
    "toy": (ToyBernoulli, (float, float)),
    "normal": (NormalReturns, (float, float)),
    "pathological": (Pathological, (float, int)),
}


def parse_model_spec(text: str) -> ModelSpec:
    """Parse the ``name:param1,param2`` mini-grammar, e.g. ``toy:0.001,100``."""
    name, sep, params = text.partition(":")
    name = name.strip().lower()
    if not sep or name not in _SPEC_NAMES:
        raise DomainError(
            f"bad model spec {text!r}; expected one of "
            + ", ".join(f"{n}:..." for n in _SPEC_NAMES)
        )
    cls, types = _SPEC_NAMES[name]
    fields = [f.strip() for f in params.split(",")] if params.strip() else []
    if len(fields) != len(types):
        raise DomainError(f"model {name!r} takes {len(types)} parameter(s), got {len(fields)}")
    try:
        args = [t(float(f)) if t is int else t(f) for t, f in zip(types, fields)]
    except ValueError as exc:
        raise DomainError(f"bad numeric parameter in {text!r}") from exc
    return cls(*args)


def from_spec(spec: ModelSpec) -> DiscreteDistribution:
    """Finite-atom form of a theoretical model."""
    if isinstance(spec, BernoulliCoin):
        return DiscreteDistribution([1.0, -1.0], [spec.p, 1.0 - spec.p])
    if isinstance(spec, ToyBernoulli):
        return DiscreteDistribution([1.0, -spec.x0], [1.0 - spec.epsilon, spec.epsilon])
    if isinstance(spec, Pathological):
        k = np.arange(1, spec.n_terms + 1, dtype=float)
        atoms = np.concatenate([[1.0], np.expm1(-k) / spec.k_ref])
        weights = np.concatenate([[0.5], 1.0 / k**2]) / PATHOLOGICAL_THETA
        return DiscreteDistribution(atoms, weights / math.fsum(weights.tolist()))
    if isinstance(spec, NormalReturns):
        raise ContinuousModelError(
            "NormalReturns is a continuous model with no finite atom form;"
            " draw samples with gaussian_samples and use empirical_from_samples"
        )
    raise TypeError(f"not a model spec: {spec!r}")


def empirical_from_samples(samples: SampleSet | Sequence) -> DiscreteDistribution:
    """Empirical PMF: one atom per distinct sample, weight = multiplicity / m.

    Duplicates are merged on exact float equality only.
    """
    if not isinstance(samples, SampleSet):
        samples = SampleSet(samples)
    values = samples.values
    m = values.shape[0]
    atoms, counts = np.unique(values, axis=0, return_counts=True)
    return DiscreteDistribution(atoms, counts / m)


def gaussian_samples(mu: float, sigma: float, m: int, seed: int) -> SampleSet:
    """``m`` i.i.d. N(mu, sigma) draws from a PCG64 generator seeded with ``seed``."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    if m < 1:
        raise DomainError(f"sample count must be >= 1, got {m!r}")
    rng = np.random.default_rng(seed)
    return SampleSet(rng.normal(mu, sigma, size=m), seed=seed)


def sample_spec(spec: ModelSpec, m: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``m`` scalar returns from a model using an existing generator."""
    if m < 1:
        raise DomainError(f"sample count must be >= 1, got {m!r}")
    if isinstance(spec, NormalReturns):
        return rng.normal(spec.mu, spec.sigma, size=m)
    dist = from_spec(spec)
    idx = rng.choice(dist.size, size=m, p=dist.probs)
    return dist.atoms[idx, 0]


def support_extremes(dist: DiscreteDistribution) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate-wise (min, max) over atoms with positive probability."""
    pts = dist.support
    return pts.min(axis=0), pts.max(axis=0)


# --- sample CSV ------------------------------------------------------------


def read_samples_csv(stream: TextIO | Iterable[str]) -> SampleSet:
    """Read one sample per row, comma-separated; lines starting with '#' are skipped."""
    rows = []
    d = None
    for lineno, line in enumerate(stream, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            row = [float(f) for f in next(csv.reader([s]))]
        except ValueError as exc:
            raise ParseError(lineno, f"non-numeric field in {s!r}") from exc
        if d is None:
            d = len(row)
        elif len(row) != d:
            raise ParseError(lineno, f"expected {d} fields, got {len(row)}")
        if not all(math.isfinite(v) for v in row):
            raise ParseError(lineno, "non-finite value")
        rows.append(row)
    if not rows:
        raise DomainError("sample file contains no samples")
    return SampleSet(np.asarray(rows, dtype=float))


def write_samples_csv(samples: SampleSet, stream: TextIO, header: bool = True) -> None:
    if header:
        stream.write("# " + ",".join(f"x{j + 1}" for j in range(samples.dim)) + "\n")
    for row in samples.values:
        stream.write(",".join(repr(float(v)) for v in row) + "\n")

