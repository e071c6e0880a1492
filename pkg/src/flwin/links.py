"""Analytical link quantities: interference moments, success probabilities,
expected bandwidth and compute consumption."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special

from .geometry import UePopulation, derive_rng, mean_interferers
from .network import NetworkConfig, PathLossModel

__all__ = [
    "LinkStats",
    "ResourceEstimate",
    "interference_moments",
    "uplink_success_probability",
    "downlink_success_probability",
    "expected_uplink_bandwidth",
    "expected_downlink_bandwidth",
    "expected_compute_per_iteration",
    "total_compute",
    "link_stats",
]

QUAD_ABS_TOL = 1e-10


@dataclass(frozen=True)
class LinkStats:
    mu_i_interf: float      # mean total interference, mW
    sigma_i_interf: float   # std dev of total interference, mW
    p_up_success: float
    p_down_success: float

    def __post_init__(self):
        if not (0.0 <= self.p_up_success <= 1.0 and 0.0 <= self.p_down_success <= 1.0):
            raise ValueError("success probabilities must lie in [0, 1]")
        if self.sigma_i_interf < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass(frozen=True)
class ResourceEstimate:
    b_up_mean: float    # Hz, summed over UEs and K rounds
    b_down_mean: float  # Hz
    c_ue_mean: float    # cycles/s per local iteration, summed over UEs
    c_total: float      # tau * K * c_ue_mean


def interference_moments(config: NetworkConfig, model: PathLossModel) -> tuple[float, float]:
    """Mean and std dev of the total interference under the normal approximation.

    Per-interferer power is P_up * G(x) with x radially distributed on
    [d_min, d0]; the total over the mean count nbar has mean nbar*E[I] and
    variance nbar*Var(I).
    """
    p = config.p_up_mw
    d_min, d0 = config.d_min, config.d0
    nbar = mean_interferers(config)

    def f1(x):
        return p * model.gain(x) * 2.0 * x / d0**2

    def f2(x):
        return (p * model.gain(x)) ** 2 * 2.0 * x / d0**2

    e1, err1 = integrate.quad(f1, d_min, d0, epsabs=0.0, epsrel=1e-11, limit=500)
    e2, err2 = integrate.quad(f2, d_min, d0, epsabs=0.0, epsrel=1e-11, limit=500)
    if e1 != 0 and (err1 > 1e-6 * abs(e1) or err2 > 1e-6 * abs(e2)):
        raise ArithmeticError(f"interference quadrature did not converge (err={err1:.2e}/{err2:.2e})")
    var = max(e2 - e1**2, 0.0)
    return nbar * e1, math.sqrt(nbar * var)


def uplink_success_probability(config: NetworkConfig, model: PathLossModel,
                               distance_norm: str = "d0") -> float:
    """Closed-form uplink success probability under the normal-interference model.

    Integrates Phi of the normalized decoding margin against the radial
    distance density over [d_min, d0]. ``distance_norm`` selects the density
    normalization: "d0" (default, 2d/d0^2) or "r0" (2d/r0^2).
    """
    if distance_norm not in ("d0", "r0"):
        raise ValueError("distance_norm must be 'd0' or 'r0'")
    mu, sigma = interference_moments(config, model)
    p, beta, noise = config.p_up_mw, config.beta_up, config.noise_mw
    norm_r = config.d0 if distance_norm == "d0" else config.r0

    if sigma == 0.0:
        def integrand(d1):
            margin = p * model.gain(d1) / beta - noise - mu
            return 2.0 * d1 / norm_r**2 * (1.0 if margin > 0 else 0.0)
    else:
        def integrand(d1):
            xi = (p * model.gain(d1) / beta - noise - mu) / sigma
            return 2.0 * d1 / norm_r**2 * special.ndtr(xi)

    val, err = integrate.quad(integrand, config.d_min, config.d0,
                              epsabs=QUAD_ABS_TOL, limit=500)
    if err > 1e-6:
        raise ArithmeticError(f"uplink success quadrature did not converge (err={err:.2e})")
    return min(max(val, 0.0), 1.0)


def _downlink_dmax(config: NetworkConfig, model: PathLossModel) -> float:
    """Largest distance at which the downlink still decodes; inf if unbounded."""
    target = config.noise_mw * config.beta_down / config.p_down_mw

    def f(d):
        return model.gain(d) - target

    if f(config.d_min) < 0:
        return 0.0
    hi = config.r0
    for _ in range(80):
        if f(hi) < 0:
            break
        hi *= 2.0
    else:
        return math.inf
    return float(optimize.brentq(f, config.d_min, hi, xtol=1e-9, rtol=1e-14))


def downlink_success_probability(config: NetworkConfig, model: PathLossModel) -> float:
    """Probability a uniformly placed UE decodes the broadcast global model.

    With a physically decreasing gain the success region is a disk d <= d_max
    where d_max solves P_down * G(d_max) = noise * beta_down.
    """
    d_max = _downlink_dmax(config, model)
    if d_max <= config.d_min:
        return 0.0
    d_eff = min(d_max, config.r0)
    return min(max((d_eff**2 - config.d_min**2) / config.r0**2, 0.0), 1.0)


def _sample_uplink_sinr(config: NetworkConfig, model: PathLossModel,
                        rng: np.random.Generator, samples: int) -> np.ndarray:
    """Direct SINR draws: random UE distance <= d0 plus a thinned PPP of interferers."""
    d1 = np.maximum(config.d0 * np.sqrt(rng.random(samples)), config.d_min)
    counts = rng.poisson(mean_interferers(config), samples)
    total = int(counts.sum())
    d2 = np.maximum(config.d0 * np.sqrt(rng.random(total)), config.d_min)
    interference = np.zeros(samples)
    np.add.at(interference, np.repeat(np.arange(samples), counts), config.p_up_mw * model.gain(d2))
    return config.p_up_mw * model.gain(d1) / (interference + config.noise_mw)


def expected_uplink_bandwidth(population: UePopulation, config: NetworkConfig,
                              model: PathLossModel, k_rounds: int, *,
                              model_size_bits: float, t_up_deadline_s: float = 0.01,
                              samples: int = 100_000, seed: int = 0) -> float:
    """Expected total uplink bandwidth (Hz) over K rounds.

    Per UE: s / (T_up * log2(1+SINR)), averaged over the SINR distribution
    conditioned on successful decoding. The conditional expectation is shared
    across UEs (channels are i.i.d.), so one SINR pool serves all of them.
    """
    if len(population) == 0:
        raise ValueError("population is empty")
    if k_rounds < 0:
        raise ValueError("k_rounds must be nonnegative")
    if k_rounds == 0:
        return 0.0
    rng = derive_rng(seed, 10)
    sinr = _sample_uplink_sinr(config, model, rng, samples)
    ok = sinr > config.beta_up
    if not np.any(ok):
        raise ArithmeticError("no successful uplink samples; cannot condition on success")
    inv_rate = float(np.mean(1.0 / np.log2(1.0 + sinr[ok])))
    per_ue = model_size_bits / t_up_deadline_s * inv_rate
    return k_rounds * per_ue * len(population)


def expected_downlink_bandwidth(population: UePopulation, config: NetworkConfig,
                                model: PathLossModel, k_rounds: int, *,
                                model_size_bits: float, t_down_deadline_s: float = 0.01,
                                samples: int = 100_000, seed: int = 0) -> float:
    """Expected total downlink bandwidth (Hz) over K rounds, conditioned on decoding."""
    if len(population) == 0:
        raise ValueError("population is empty")
    if k_rounds < 0:
        raise ValueError("k_rounds must be nonnegative")
    if k_rounds == 0:
        return 0.0
    rng = derive_rng(seed, 11)
    d1 = np.maximum(config.r0 * np.sqrt(rng.random(samples)), config.d_min)
    snr = config.p_down_mw * model.gain(d1) / config.noise_mw
    ok = snr > config.beta_down
    if not np.any(ok):
        raise ArithmeticError("no successful downlink samples; cannot condition on success")
    inv_rate = float(np.mean(1.0 / np.log2(1.0 + snr[ok])))
    per_ue = model_size_bits / t_down_deadline_s * inv_rate
    return k_rounds * per_ue * len(population)


def expected_compute_per_iteration(population: UePopulation, config: NetworkConfig,
                                   model: PathLossModel) -> float:
    """Mean aggregate compute rate (cycles/s) per local iteration.

    Each UE contributes its rate c_i*S_i/T_i weighted by the probability it
    received the global model.
    """
    p_down = downlink_success_probability(config, model)
    return float(np.sum(population.compute_rates)) * p_down


def total_compute(tau: int, k_rounds: int, c_ue_mean: float) -> float:
    """Total compute consumed by local training: tau * K * mean rate."""
    if tau < 0 or k_rounds < 0:
        raise ValueError("tau and k_rounds must be nonnegative")
    return tau * k_rounds * c_ue_mean


def link_stats(config: NetworkConfig, model: PathLossModel) -> LinkStats:
    mu, sigma = interference_moments(config, model)
    return LinkStats(
        mu_i_interf=mu,
        sigma_i_interf=sigma,
        p_up_success=uplink_success_probability(config, model),
        p_down_success=downlink_success_probability(config, model),
    )
