"""Empirical estimators for every analytical link quantity.

Every estimator draws its randomness in fixed-size chunks keyed by
(seed, chunk index), so results are bit-for-bit reproducible no matter how
the chunks would be scheduled across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import UePopulation, derive_rng, mean_interferers
from .network import NetworkConfig, PathLossModel

__all__ = [
    "McEstimate",
    "estimate_uplink_success",
    "estimate_downlink_success",
    "estimate_bandwidth",
    "estimate_compute",
]

CHUNK = 20_000


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    trials: int
    ci95_low: float
    ci95_high: float

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError("std_error must be nonnegative")
        if not (self.ci95_low <= self.mean <= self.ci95_high):
            raise ValueError("CI must bracket the mean")

    @classmethod
    def from_moments(cls, mean: float, std_error: float, trials: int) -> "McEstimate":
        # normal-approximation CI; nominal below ~1e3 trials
        half = 1.959963984540054 * std_error
        return cls(mean=mean, std_error=std_error, trials=trials,
                   ci95_low=mean - half, ci95_high=mean + half)


def _chunks(trials: int):
    start = 0
    idx = 0
    while start < trials:
        yield idx, min(CHUNK, trials - start)
        start += CHUNK
        idx += 1


def _mean_se(total: float, total_sq: float, n: int) -> tuple[float, float]:
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return mean, math.sqrt(var / n)


def estimate_uplink_success(config: NetworkConfig, model: PathLossModel,
                            trials: int, seed: int, *, restrict_d0: bool = True) -> McEstimate:
    """Fraction of direct SINR draws above the uplink threshold.

    The UE distance is drawn radially up to d0 (matching the analytic
    convention) unless ``restrict_d0`` is False, which uses the full disk.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    radius = config.d0 if restrict_d0 else config.r0
    nbar = mean_interferers(config)
    total = 0.0
    for idx, n in _chunks(trials):
        rng = derive_rng(seed, 20, idx)
        d1 = np.maximum(radius * np.sqrt(rng.random(n)), config.d_min)
        counts = rng.poisson(nbar, n)
        d2 = np.maximum(config.d0 * np.sqrt(rng.random(int(counts.sum()))), config.d_min)
        interference = np.zeros(n)
        np.add.at(interference, np.repeat(np.arange(n), counts), config.p_up_mw * model.gain(d2))
        sinr = config.p_up_mw * model.gain(d1) / (interference + config.noise_mw)
        total += float(np.count_nonzero(sinr > config.beta_up))
    p = total / trials
    se = math.sqrt(max(p * (1.0 - p), 0.0) / trials)
    return McEstimate.from_moments(p, se, trials)


def estimate_downlink_success(config: NetworkConfig, model: PathLossModel,
                              trials: int, seed: int) -> McEstimate:
    """Fraction of radially placed UEs on the full disk whose SNR decodes."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    total = 0.0
    for idx, n in _chunks(trials):
        rng = derive_rng(seed, 21, idx)
        d1 = np.maximum(config.r0 * np.sqrt(rng.random(n)), config.d_min)
        snr = config.p_down_mw * model.gain(d1) / config.noise_mw
        total += float(np.count_nonzero(snr > config.beta_down))
    p = total / trials
    se = math.sqrt(max(p * (1.0 - p), 0.0) / trials)
    return McEstimate.from_moments(p, se, trials)


def estimate_bandwidth(population: UePopulation, config: NetworkConfig,
                       model: PathLossModel, k_rounds: int, direction: str,
                       trials: int, seed: int, *, model_size_bits: float,
                       deadline_s: float = 0.01) -> McEstimate:
    """Empirical mean of summed per-round bandwidth, scaled by K rounds.

    Channel draws are shared across UEs (their channels are i.i.d., so the
    sum's expectation factorizes); the per-draw inverse spectral efficiency
    is averaged conditioned on successful decoding, mirroring the analytic
    convention.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    if len(population) == 0:
        raise ValueError("population is empty")
    if k_rounds == 0:
        return McEstimate.from_moments(0.0, 0.0, trials)

    nbar = mean_interferers(config)
    total = 0.0
    total_sq = 0.0
    n_ok = 0
    for idx, n in _chunks(trials):
        rng = derive_rng(seed, 22 if direction == "up" else 23, idx)
        if direction == "up":
            d1 = np.maximum(config.d0 * np.sqrt(rng.random(n)), config.d_min)
            counts = rng.poisson(nbar, n)
            d2 = np.maximum(config.d0 * np.sqrt(rng.random(int(counts.sum()))), config.d_min)
            interference = np.zeros(n)
            np.add.at(interference, np.repeat(np.arange(n), counts),
                      config.p_up_mw * model.gain(d2))
            ratio = config.p_up_mw * model.gain(d1) / (interference + config.noise_mw)
            ok = ratio > config.beta_up
        else:
            d1 = np.maximum(config.r0 * np.sqrt(rng.random(n)), config.d_min)
            ratio = config.p_down_mw * model.gain(d1) / config.noise_mw
            ok = ratio > config.beta_down
        inv = 1.0 / np.log2(1.0 + ratio[ok])
        total += float(inv.sum())
        total_sq += float((inv * inv).sum())
        n_ok += int(np.count_nonzero(ok))
    if n_ok == 0:
        raise ArithmeticError("no successful transmissions sampled")
    mean_inv, se_inv = _mean_se(total, total_sq, n_ok)
    scale = k_rounds * len(population) * model_size_bits / deadline_s
    return McEstimate.from_moments(scale * mean_inv, scale * se_inv, trials)


def estimate_compute(population: UePopulation, config: NetworkConfig,
                     model: PathLossModel, tau: int, k_rounds: int,
                     trials: int, seed: int) -> McEstimate:
    """Empirical mean of tau*K*sum of compute rates of UEs whose SNR decodes.

    Each UE redraws its position every trial; the per-trial value is the
    realized aggregate compute.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if len(population) == 0:
        raise ValueError("population is empty")
    rates = population.compute_rates
    n_ue = len(rates)
    total = 0.0
    total_sq = 0.0
    for idx, n in _chunks(trials):
        rng = derive_rng(seed, 24, idx)
        d1 = np.maximum(config.r0 * np.sqrt(rng.random((n, n_ue))), config.d_min)
        snr = config.p_down_mw * model.gain(d1) / config.noise_mw
        per_trial = tau * k_rounds * (snr > config.beta_down) @ rates
        total += float(per_trial.sum())
        total_sq += float((per_trial * per_trial).sum())
    mean, se = _mean_se(total, total_sq, trials)
    return McEstimate.from_moments(mean, se, trials)
