"""Radio/geometry configuration and the large-scale channel gain model.

All powers are stored in dBm / dB exactly as they appear in config files;
linear-scale (mW) values are derived on demand so the dB fields stay
bit-exact through a JSON round trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from typing import Sequence, Union

import numpy as np

__all__ = [
    "NetworkConfig",
    "PowerLawPathLoss",
    "TabulatedPathLoss",
    "PathLossModel",
    "FlHyperParams",
    "dbm_to_mw",
    "mw_to_dbm",
    "db_to_linear",
    "linear_to_db",
    "gain",
    "snr_down",
    "load_config",
    "config_hash",
]


def dbm_to_mw(x_dbm: float) -> float:
    return 10.0 ** (np.asarray(x_dbm, dtype=float) / 10.0)


def mw_to_dbm(x_mw: float) -> float:
    return 10.0 * np.log10(x_mw)


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class NetworkConfig:
    """Radio and geometry parameters of the single-cell network."""

    r0: float = 1000.0            # BS coverage radius, m
    d0: float = 100.0             # interfering-area radius, m
    d_min: float = 1.0            # minimum UE-BS distance, m
    lambda_i: float = 1e-4        # UE spatial density, UE/m^2
    lambda_a: float = 1.0         # interferer arrival rate, 1/time-unit
    t_up: float = 1.0             # uplink transmission window, same time unit
    p_up_dbm: float = 20.0        # UE transmit power
    p_down_dbm: float = 43.0      # BS transmit power
    noise_dbm: float = -173.0     # noise power
    beta_up_db: float = -15.0     # uplink SINR decoding threshold
    beta_down_db: float = 15.0    # downlink SNR decoding threshold

    def __post_init__(self):
        if not (0.0 < self.d_min < self.d0 <= self.r0):
            raise ValueError(
                f"need 0 < d_min < d0 <= r0, got d_min={self.d_min}, d0={self.d0}, r0={self.r0}"
            )
        if self.lambda_i <= 0:
            raise ValueError("lambda_i must be positive")
        if self.lambda_a < 0 or self.t_up < 0:
            raise ValueError("lambda_a and t_up must be nonnegative")

    @property
    def p_up_mw(self) -> float:
        return float(dbm_to_mw(self.p_up_dbm))

    @property
    def p_down_mw(self) -> float:
        return float(dbm_to_mw(self.p_down_dbm))

    @property
    def noise_mw(self) -> float:
        return float(dbm_to_mw(self.noise_dbm))

    @property
    def beta_up(self) -> float:
        return float(db_to_linear(self.beta_up_db))

    @property
    def beta_down(self) -> float:
        return float(db_to_linear(self.beta_down_db))


@dataclass(frozen=True)
class PowerLawPathLoss:
    """Path loss of the form loss_dB(d) = intercept + slope * log10(d)."""

    intercept_db: float = 34.0
    slope_db_per_decade: float = 40.0

    def __post_init__(self):
        if self.slope_db_per_decade <= 0:
            raise ValueError("slope must be positive so gain strictly decreases with distance")

    def gain(self, d):
        """Linear-scale channel gain at distance d (meters). Vectorized."""
        d = np.asarray(d, dtype=float)
        if np.any(d <= 0):
            raise ValueError("distance must be positive")
        loss_db = self.intercept_db + self.slope_db_per_decade * np.log10(d)
        return 10.0 ** (-loss_db / 10.0)


@dataclass(frozen=True)
class TabulatedPathLoss:
    """Channel gain from (distance, linear gain) pairs, linearly interpolated.

    Mostly used in tests for degenerate channels (e.g. constant gain).
    """

    distances: tuple = (1.0, 1000.0)
    gains: tuple = (1.0, 1.0)

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float)
        g = np.asarray(self.gains, dtype=float)
        if d.ndim != 1 or d.shape != g.shape or len(d) < 2:
            raise ValueError("need matching 1-d distance/gain tables with >= 2 points")
        if np.any(np.diff(d) <= 0):
            raise ValueError("distances must be strictly increasing")
        if np.any(g <= 0):
            raise ValueError("gains must be strictly positive")

    def gain(self, d):
        d = np.asarray(d, dtype=float)
        if np.any(d <= 0):
            raise ValueError("distance must be positive")
        return np.interp(d, np.asarray(self.distances, float), np.asarray(self.gains, float))


PathLossModel = Union[PowerLawPathLoss, TabulatedPathLoss]


def gain(model: PathLossModel, d, config: NetworkConfig):
    """Domain-checked channel gain: distances must lie in [d_min, r0]."""
    d = np.asarray(d, dtype=float)
    if np.any(d < config.d_min) or np.any(d > config.r0):
        raise ValueError(f"distance outside [{config.d_min}, {config.r0}]")
    return model.gain(d)


def snr_down(config: NetworkConfig, model: PathLossModel, d):
    """Downlink SNR = P_down * G(d) / noise, all linear scale."""
    return config.p_down_mw * gain(model, d, config) / config.noise_mw


@dataclass(frozen=True)
class FlHyperParams:
    """Learning-side constants: curvature bounds, step sizes, targets, payload."""

    lipschitz_l: float = 0.1
    strong_convexity_gamma: float = 0.1
    gd_step_xi: float = 0.1
    zeta: float = 0.1
    eps_local: float = 0.2
    eps_global: float = 0.2
    model_size_bits: float = 9.248e6   # ~1.156 MB
    t_up_deadline_s: float = 0.01      # per-UE uplink transmission deadline
    t_down_deadline_s: float = 0.01    # per-UE downlink transmission deadline

    def __post_init__(self):
        l, g = self.lipschitz_l, self.strong_convexity_gamma
        if not (0 < g <= l):
            raise ValueError("need 0 < gamma <= L")
        if not (self.gd_step_xi < 2.0 / l):
            raise ValueError("GD step must satisfy xi < 2/L")
        if not (0 < self.zeta < g / l):
            raise ValueError("need 0 < zeta < gamma/L")
        for name in ("eps_local", "eps_global"):
            v = getattr(self, name)
            if not (0 < v <= 1):
                raise ValueError(f"{name} must lie in (0, 1]")
        if self.model_size_bits <= 0:
            raise ValueError("model_size_bits must be positive")


@dataclass(frozen=True)
class DatasetLaw:
    """Per-UE sampling ranges for dataset sizes and compute characteristics."""

    mu_range: tuple = (1000.0, 10000.0)
    sigma_range: tuple = (0.2, 0.5)
    cycles_range: tuple = (1e4, 4e4)
    iter_time_s: float = 1.0


def _path_loss_from_dict(d: dict) -> PathLossModel:
    variant = d.get("variant", "power_law_db")
    if variant == "power_law_db":
        return PowerLawPathLoss(
            intercept_db=d.get("intercept_db", 34.0),
            slope_db_per_decade=d.get("slope_db_per_decade", 40.0),
        )
    if variant == "table":
        return TabulatedPathLoss(distances=tuple(d["distances"]), gains=tuple(d["gains"]))
    raise ValueError(f"unknown path loss variant {variant!r}")


@dataclass(frozen=True)
class FullConfig:
    """Everything a CLI experiment needs, loaded from one JSON document."""

    network: NetworkConfig = field(default_factory=NetworkConfig)
    path_loss: PathLossModel = field(default_factory=PowerLawPathLoss)
    fl: FlHyperParams = field(default_factory=FlHyperParams)
    dataset_law: DatasetLaw = field(default_factory=DatasetLaw)
    budget: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        pl = asdict(self.path_loss)
        pl["variant"] = "power_law_db" if isinstance(self.path_loss, PowerLawPathLoss) else "table"
        return {
            "network": asdict(self.network),
            "path_loss": pl,
            "fl": asdict(self.fl),
            "dataset_law": asdict(self.dataset_law),
            "budget": dict(self.budget),
        }


def load_config(path_or_dict) -> FullConfig:
    """Load a FullConfig from a JSON file path or an already-parsed dict."""
    if isinstance(path_or_dict, dict):
        doc = path_or_dict
    else:
        with open(path_or_dict) as fh:
            doc = json.load(fh)
    return FullConfig(
        network=NetworkConfig(**doc.get("network", {})),
        path_loss=_path_loss_from_dict(doc.get("path_loss", {})),
        fl=FlHyperParams(**doc.get("fl", {})),
        dataset_law=DatasetLaw(
            **{k: tuple(v) if isinstance(v, list) else v
               for k, v in doc.get("dataset_law", {}).items()}
        ),
        budget=doc.get("budget", {}),
    )


def config_hash(cfg: FullConfig) -> str:
    """Stable 12-hex digest of the full configuration."""
    import hashlib

    blob = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]
