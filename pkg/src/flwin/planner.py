"""Resource planning: iteration/round bounds and the three sufficiency regimes."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .geometry import UePopulation
from .links import (
    expected_compute_per_iteration,
    expected_downlink_bandwidth,
    expected_uplink_bandwidth,
)
from .network import FlHyperParams, NetworkConfig, PathLossModel

__all__ = [
    "ResourceBudget",
    "ResourcePlan",
    "min_local_iterations",
    "min_rounds",
    "plan_case1",
    "plan_case2",
    "plan_case3",
]

# guard against ceil(40.0000000000001) -> 41 from float noise
_CEIL_EPS = 1e-9


def _ceil(x: float) -> int:
    return max(int(math.ceil(x - _CEIL_EPS)), 0)


@dataclass(frozen=True)
class ResourceBudget:
    b_up_max: float = math.inf
    b_down_max: float = math.inf
    per_ue_compute_max: tuple = ()   # C_i, cycles/s

    def __post_init__(self):
        if self.b_up_max < 0 or self.b_down_max < 0 or any(c < 0 for c in self.per_ue_compute_max):
            raise ValueError("budgets must be nonnegative")

    @property
    def total_compute_max(self) -> float:
        return float(sum(self.per_ue_compute_max))


@dataclass(frozen=True)
class ResourcePlan:
    case_tag: int
    tau: int
    k_rounds: int
    eps_local_effective: float
    eps_global_effective: float
    b_up: float
    b_down: float
    c_total: float
    feasible: bool
    diagnostics: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def min_local_iterations(lipschitz_l: float, gamma: float, xi: float,
                         eps_local: float) -> int:
    """Smallest local GD iteration count guaranteeing the local accuracy target."""
    if xi >= 2.0 / lipschitz_l:
        raise ValueError(f"step size {xi} violates xi < 2/L")
    if not (0 < eps_local <= 1):
        raise ValueError("eps_local must lie in (0, 1]")
    return _ceil(2.0 / ((2.0 - lipschitz_l * xi) * xi * gamma) * math.log(1.0 / eps_local))


def min_rounds(lipschitz_l: float, gamma: float, zeta: float,
               eps_local: float, eps_global: float) -> int:
    """Smallest communication-round count guaranteeing the global accuracy target."""
    if not (0 < zeta < gamma / lipschitz_l):
        raise ValueError("need 0 < zeta < gamma/L")
    if not (0 <= eps_local < 1):
        raise ValueError("eps_local must lie in [0, 1)")
    if not (0 < eps_global <= 1):
        raise ValueError("eps_global must lie in (0, 1]")
    return _ceil(2.0 * lipschitz_l**2 * math.log(1.0 / eps_global)
                 / ((1.0 - eps_local) * gamma**2 * zeta))


def _geometry_compute_factor(config: NetworkConfig) -> float:
    # appears verbatim in the planner's compute expressions
    return (config.d0**2 - config.d_min**2) / config.r0**2


def _bandwidths(hyper: FlHyperParams, population: UePopulation, config: NetworkConfig,
                model: PathLossModel, k: int, seed: int) -> tuple[float, float]:
    if k == 0:
        return 0.0, 0.0
    b_up = expected_uplink_bandwidth(
        population, config, model, k, model_size_bits=hyper.model_size_bits,
        t_up_deadline_s=hyper.t_up_deadline_s, seed=seed)
    b_down = expected_downlink_bandwidth(
        population, config, model, k, model_size_bits=hyper.model_size_bits,
        t_down_deadline_s=hyper.t_down_deadline_s, seed=seed)
    return b_up, b_down


def plan_case1(hyper: FlHyperParams, population: UePopulation, config: NetworkConfig,
               model: PathLossModel, *, seed: int = 0) -> ResourcePlan:
    """Both resources ample: evaluate the accuracy targets directly."""
    tau = min_local_iterations(hyper.lipschitz_l, hyper.strong_convexity_gamma,
                               hyper.gd_step_xi, hyper.eps_local)
    k = min_rounds(hyper.lipschitz_l, hyper.strong_convexity_gamma, hyper.zeta,
                   hyper.eps_local if hyper.eps_local < 1 else 0.0, hyper.eps_global)
    b_up, b_down = _bandwidths(hyper, population, config, model, k, seed)
    c_ue = expected_compute_per_iteration(population, config, model)
    c_total = tau * k * c_ue * _geometry_compute_factor(config)
    return ResourcePlan(case_tag=1, tau=tau, k_rounds=k,
                        eps_local_effective=hyper.eps_local,
                        eps_global_effective=hyper.eps_global,
                        b_up=b_up, b_down=b_down, c_total=c_total, feasible=True)


def plan_case2(budget: ResourceBudget, hyper: FlHyperParams, population: UePopulation,
               config: NetworkConfig, model: PathLossModel, *, seed: int = 0,
               k_max_override: int | None = None) -> ResourcePlan:
    """Compute ample, bandwidth capped: the round budget K_max binds.

    The bandwidth cap fixes the largest affordable round count; meeting the
    global target then forces a smaller effective local accuracy loss, which
    is paid for with extra local iterations.
    """
    l, g, z = hyper.lipschitz_l, hyper.strong_convexity_gamma, hyper.zeta
    if k_max_override is not None:
        k_max_real = float(k_max_override)
    else:
        b_up_round, b_down_round = _bandwidths(hyper, population, config, model, 1, seed)
        k_max_real = min(budget.b_down_max / b_down_round, budget.b_up_max / b_up_round)
    if math.isinf(k_max_real):
        # budget does not bind at all: same targets as the sufficient-resources case
        base = plan_case1(hyper, population, config, model, seed=seed)
        return ResourcePlan(case_tag=2, tau=base.tau, k_rounds=base.k_rounds,
                            eps_local_effective=base.eps_local_effective,
                            eps_global_effective=base.eps_global_effective,
                            b_up=base.b_up, b_down=base.b_down, c_total=base.c_total,
                            feasible=True, diagnostics="unbounded communication budget")
    k_max = int(k_max_real)
    need = 2.0 * l**2 * math.log(1.0 / hyper.eps_global)
    have = k_max * g**2 * z
    if have <= need:
        return ResourcePlan(case_tag=2, tau=0, k_rounds=0,
                            eps_local_effective=math.nan,
                            eps_global_effective=hyper.eps_global,
                            b_up=0.0, b_down=0.0, c_total=0.0, feasible=False,
                            diagnostics=f"communication budget below minimum for eps_g: "
                                        f"K_max={k_max} gives {have:.6g} <= {need:.6g}")
    eps_l = 1.0 - need / have
    tau = _ceil(2.0 / ((2.0 - l * hyper.gd_step_xi) * hyper.gd_step_xi * g)
                * math.log(have / (have - need)))
    k = min_rounds(l, g, z, eps_l, hyper.eps_global)
    b_up, b_down = _bandwidths(hyper, population, config, model, k, seed)
    c_ue = expected_compute_per_iteration(population, config, model)
    c_total = tau * k * c_ue * _geometry_compute_factor(config)
    return ResourcePlan(case_tag=2, tau=tau, k_rounds=k,
                        eps_local_effective=eps_l,
                        eps_global_effective=hyper.eps_global,
                        b_up=b_up, b_down=b_down, c_total=c_total, feasible=True,
                        diagnostics=f"K_max={k_max}; compute uses the (d0^2-d_min^2)/r0^2 "
                                    f"geometry factor")


def plan_case3(budget: ResourceBudget, hyper: FlHyperParams, population: UePopulation,
               config: NetworkConfig, model: PathLossModel, *, seed: int = 0,
               c_ue_override: float | None = None) -> ResourcePlan:
    """Bandwidth ample, compute capped: the local accuracy floor binds."""
    l, g, z, xi = (hyper.lipschitz_l, hyper.strong_convexity_gamma, hyper.zeta,
                   hyper.gd_step_xi)
    if xi >= 2.0 / l:
        raise ValueError("step size violates xi < 2/L")
    c_ue = expected_compute_per_iteration(population, config, model) \
        if c_ue_override is None else c_ue_override
    c_sum = budget.total_compute_max
    if c_sum <= 0 or c_ue <= 0:
        return ResourcePlan(case_tag=3, tau=0, k_rounds=0,
                            eps_local_effective=1.0,
                            eps_global_effective=hyper.eps_global,
                            b_up=0.0, b_down=0.0, c_total=0.0, feasible=False,
                            diagnostics="zero compute budget: local accuracy floor is 1")
    eps_l_floor = math.exp((l * xi - 2.0) * xi * g * c_sum / (2.0 * c_ue))
    if eps_l_floor >= 1.0:
        return ResourcePlan(case_tag=3, tau=0, k_rounds=0,
                            eps_local_effective=eps_l_floor,
                            eps_global_effective=hyper.eps_global,
                            b_up=0.0, b_down=0.0, c_total=0.0, feasible=False,
                            diagnostics="compute budget below minimum: eps_l floor >= 1")
    tau = _ceil(2.0 * math.log(1.0 / eps_l_floor) / ((2.0 - l * xi) * xi * g))
    k = min_rounds(l, g, z, eps_l_floor, hyper.eps_global)
    b_up, b_down = _bandwidths(hyper, population, config, model, k, seed)
    c_total = tau * k * c_ue * _geometry_compute_factor(config)
    return ResourcePlan(case_tag=3, tau=tau, k_rounds=k,
                        eps_local_effective=eps_l_floor,
                        eps_global_effective=hyper.eps_global,
                        b_up=b_up, b_down=b_down, c_total=c_total, feasible=True)
