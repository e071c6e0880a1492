"""Poisson point process primitives: UE/interferer sampling and count laws."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np
from scipy import stats

from .network import NetworkConfig, DatasetLaw

__all__ = [
    "UePopulation",
    "InterfererRealization",
    "derive_rng",
    "distance_pdf",
    "active_probability",
    "mean_interferers",
    "interferer_count_pmf",
    "sample_population",
    "sample_interferers",
    "TruncationError",
]


class TruncationError(ValueError):
    """Raised when a truncated series leaves more tail mass than allowed."""

    def __init__(self, tail_mass: float, limit: float):
        self.tail_mass = tail_mass
        super().__init__(f"neglected tail mass {tail_mass:.3e} exceeds {limit:.1e}; "
                         f"increase the truncation")


def derive_rng(seed: int, *path: int) -> np.random.Generator:
    """Counter-scheme RNG derivation: (seed, path) -> independent stream.

    The same (seed, path) always yields the same stream, independent of how
    many other streams were derived, so parallel callers stay reproducible.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=path))


@dataclass(frozen=True)
class UePopulation:
    """One sampled realization of UE positions and per-UE characteristics."""

    distances: np.ndarray        # distance to BS, m
    angles: np.ndarray           # radians
    dataset_sizes: np.ndarray    # samples S_i, integer >= 1
    cycles_per_sample: np.ndarray  # c_i, cycles/sample
    local_iter_time: np.ndarray  # T_i, s per local iteration

    def __post_init__(self):
        n = len(self.distances)
        for name in ("angles", "dataset_sizes", "cycles_per_sample", "local_iter_time"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length mismatch")
        if n and (np.any(self.dataset_sizes < 1) or np.any(self.cycles_per_sample <= 0)
                  or np.any(self.local_iter_time <= 0)):
            raise ValueError("invalid per-UE characteristics")

    def __len__(self) -> int:
        return len(self.distances)

    @property
    def compute_rates(self) -> np.ndarray:
        """Per-UE compute rate c_i * S_i / T_i in cycles/s."""
        return self.cycles_per_sample * self.dataset_sizes / self.local_iter_time

    def to_json(self) -> str:
        return json.dumps({k: np.asarray(v).tolist() for k, v in asdict(self).items()})

    @classmethod
    def from_json(cls, text: str) -> "UePopulation":
        doc = json.loads(text)
        return cls(
            distances=np.asarray(doc["distances"], float),
            angles=np.asarray(doc["angles"], float),
            dataset_sizes=np.asarray(doc["dataset_sizes"], int),
            cycles_per_sample=np.asarray(doc["cycles_per_sample"], float),
            local_iter_time=np.asarray(doc["local_iter_time"], float),
        )


@dataclass(frozen=True)
class InterfererRealization:
    count: int
    distances: np.ndarray   # in [d_min, d0]

    def __post_init__(self):
        if len(self.distances) != self.count:
            raise ValueError("distances length must equal count")


def distance_pdf(d, radius: float):
    """Radial density 2d/radius^2 of a uniform point in a disk of given radius."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0) or np.any(d > radius):
        raise ValueError(f"distance must lie in (0, {radius}]")
    return 2.0 * d / radius**2


def active_probability(t_up: float, lambda_a: float) -> float:
    """Probability that a UE in the interfering area transmits during the window."""
    if t_up < 0 or lambda_a < 0:
        raise ValueError("t_up and lambda_a must be nonnegative")
    return -math.expm1(-2.0 * t_up * lambda_a)


def mean_interferers(config: NetworkConfig) -> float:
    """Mean number of active interferers in the disk of radius d0."""
    return math.pi * config.d0**2 * config.lambda_i * active_probability(config.t_up, config.lambda_a)


def interferer_count_pmf(n: int, config: NetworkConfig, truncation: int = 200,
                         tail_limit: float = 1e-12) -> float:
    """Probability of exactly n active interferers, by the compound sum.

    Evaluates sum over n_area >= n of Binomial(n_area, p_active) thinning
    against the Poisson area-count law. By the thinning theorem the result
    equals a Poisson pmf with mean ``mean_interferers``; evaluating the
    compound sum directly is the point: it is the self-check for that identity.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    lam_area = math.pi * config.d0**2 * config.lambda_i
    tail = float(stats.poisson.sf(truncation, lam_area))
    if tail >= tail_limit:
        raise TruncationError(tail, tail_limit)
    if truncation < n:
        return 0.0
    p = active_probability(config.t_up, config.lambda_a)
    n_area = np.arange(n, truncation + 1)
    terms = stats.binom.pmf(n, n_area, p) * stats.poisson.pmf(n_area, lam_area)
    return float(np.sum(terms))


def _radial_sample(rng: np.random.Generator, radius: float, d_min: float, size: int) -> np.ndarray:
    # CDF d^2/radius^2, clipped below at d_min
    return np.maximum(radius * np.sqrt(rng.random(size)), d_min)


def sample_population(config: NetworkConfig, law: DatasetLaw, seed: int) -> UePopulation:
    """Draw one PPP realization of UEs with per-UE dataset/compute draws."""
    rng = derive_rng(seed, 0)
    n = int(rng.poisson(math.pi * config.r0**2 * config.lambda_i))
    distances = _radial_sample(rng, config.r0, config.d_min, n)
    angles = rng.uniform(0.0, 2.0 * math.pi, n)
    mu = rng.uniform(*law.mu_range, n)
    sigma = rng.uniform(*law.sigma_range, n)
    sizes = np.maximum(np.rint(rng.normal(mu, sigma)), 1.0).astype(int)
    cycles = rng.uniform(*law.cycles_range, n)
    iter_time = np.full(n, law.iter_time_s)
    return UePopulation(distances=distances, angles=angles, dataset_sizes=sizes,
                        cycles_per_sample=cycles, local_iter_time=iter_time)


def sample_interferers(config: NetworkConfig, seed: int) -> InterfererRealization:
    """Draw one realization of active interferers in the disk of radius d0."""
    rng = derive_rng(seed, 1)
    count = int(rng.poisson(mean_interferers(config)))
    distances = _radial_sample(rng, config.d0, config.d_min, count)
    return InterfererRealization(count=count, distances=distances)
