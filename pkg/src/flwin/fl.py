"""Federated training loop on synthetic strongly convex quadratic tasks.

Each UE holds a quadratic objective with Hessian eigenvalues inside the
configured curvature sandwich, so local and global optima are available in
closed form and the convergence bounds can be exercised exactly.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import derive_rng
from .network import FlHyperParams

__all__ = [
    "FederatedTask",
    "RoundRecord",
    "TrainingTrace",
    "make_task",
    "local_subproblem_value",
    "local_gd",
    "run_federated",
    "global_loss",
]


@dataclass(frozen=True)
class FederatedTask:
    """Per-UE quadratics F_i(w) = 1/2 w'A_i w - b_i'w with aggregation weights."""

    a_mats: np.ndarray   # (n, d, d), symmetric PD
    b_vecs: np.ndarray   # (n, d)
    weights: np.ndarray  # (n,) dataset sizes S_i

    def __post_init__(self):
        n, d, d2 = self.a_mats.shape
        if d != d2 or self.b_vecs.shape != (n, d) or self.weights.shape != (n,):
            raise ValueError("inconsistent task shapes")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")

    @property
    def n_ues(self) -> int:
        return self.a_mats.shape[0]

    @property
    def dimension(self) -> int:
        return self.a_mats.shape[1]

    def local_loss(self, i: int, w: np.ndarray) -> float:
        return float(0.5 * w @ self.a_mats[i] @ w - self.b_vecs[i] @ w)

    def local_grad(self, i: int, w: np.ndarray) -> np.ndarray:
        return self.a_mats[i] @ w - self.b_vecs[i]

    def global_hessian(self) -> np.ndarray:
        s = self.weights.sum()
        return np.tensordot(self.weights, self.a_mats, axes=1) / s

    def global_grad(self, w: np.ndarray) -> np.ndarray:
        s = self.weights.sum()
        return (np.tensordot(self.weights, self.a_mats, axes=1) @ w
                - self.weights @ self.b_vecs) / s

    def w_star(self) -> np.ndarray:
        """Closed-form global minimizer from the weighted normal equations."""
        return np.linalg.solve(np.tensordot(self.weights, self.a_mats, axes=1),
                               self.weights @ self.b_vecs)


def global_loss(task: FederatedTask, w: np.ndarray) -> float:
    """Weighted average of the per-UE losses."""
    s = task.weights.sum()
    vals = 0.5 * np.einsum("i,nij,j->n", w, task.a_mats, w) - task.b_vecs @ w
    return float(task.weights @ vals / s)


def make_task(n_ues: int, dimension: int, lipschitz_l: float, gamma: float,
              weight_law: tuple[float, float] = (1000.0, 10000.0),
              seed: int = 0) -> FederatedTask:
    """Random task whose per-UE Hessian spectra exactly span [gamma, L].

    One eigenvalue is pinned to gamma and one to L per UE (when dimension
    allows) so the curvature bounds are tight, the rest drawn uniformly.
    """
    if not (0 < gamma <= lipschitz_l):
        raise ValueError("need 0 < gamma <= L")
    if dimension < 1 or n_ues < 1:
        raise ValueError("dimension and n_ues must be >= 1")
    rng = derive_rng(seed, 30)
    a = np.empty((n_ues, dimension, dimension))
    for i in range(n_ues):
        eigs = rng.uniform(gamma, lipschitz_l, dimension)
        eigs[0] = gamma
        if dimension > 1:
            eigs[-1] = lipschitz_l
        q, _ = np.linalg.qr(rng.standard_normal((dimension, dimension)))
        a[i] = (q * eigs) @ q.T
        a[i] = 0.5 * (a[i] + a[i].T)  # kill asymmetry from roundoff
    b = rng.standard_normal((n_ues, dimension))
    weights = np.rint(rng.uniform(*weight_law, n_ues))
    return FederatedTask(a_mats=a, b_vecs=b, weights=weights)


def local_subproblem_value(task: FederatedTask, i: int, w_r: np.ndarray,
                           grad_global: np.ndarray, h: np.ndarray, zeta: float) -> float:
    """Value of the local surrogate objective at offset h from the global model."""
    correction = task.local_grad(i, w_r) - zeta * grad_global
    return task.local_loss(i, w_r + h) - float(correction @ h)


def _local_optimum(task: FederatedTask, i: int, grad_global: np.ndarray,
                   zeta: float) -> np.ndarray:
    # gradient of the surrogate in h is A_i h + zeta * grad_global
    return np.linalg.solve(task.a_mats[i], -zeta * grad_global)


@dataclass
class LocalGdResult:
    h: np.ndarray
    iterations: int
    objective_start: float
    objective_end: float
    objective_opt: float

    @property
    def accuracy_loss(self) -> float:
        """Realized relative suboptimality of the surrogate objective."""
        gap0 = self.objective_start - self.objective_opt
        if gap0 <= 0:
            return 0.0
        return max(self.objective_end - self.objective_opt, 0.0) / gap0


def local_gd(task: FederatedTask, i: int, w_r: np.ndarray, grad_global: np.ndarray,
             xi: float, zeta: float, stop: tuple[str, float],
             max_iterations: int = 100_000) -> LocalGdResult:
    """Plain gradient descent on the local surrogate starting from h = 0.

    ``stop`` is ("fixed", tau) for a fixed iteration count or
    ("eps", eps_local) to stop once the relative surrogate gap closes below
    eps_local (measured against the closed-form optimum).
    """
    lipschitz = float(np.linalg.eigvalsh(task.a_mats[i]).max())
    if xi >= 2.0 / lipschitz:
        raise ValueError(f"step size {xi} violates xi < 2/L = {2.0 / lipschitz}")
    kind, value = stop
    if kind not in ("fixed", "eps"):
        raise ValueError("stop must be ('fixed', tau) or ('eps', eps_local)")

    h = np.zeros_like(w_r)
    h_opt = _local_optimum(task, i, grad_global, zeta)
    g0 = local_subproblem_value(task, i, w_r, grad_global, h, zeta)
    g_opt = local_subproblem_value(task, i, w_r, grad_global, h_opt, zeta)
    gap0 = g0 - g_opt
    g_prev = g0
    iterations = 0
    limit = int(value) if kind == "fixed" else max_iterations
    while iterations < limit:
        if kind == "eps" and g_prev - g_opt <= value * gap0:
            break
        grad = task.a_mats[i] @ h + zeta * grad_global
        h = h - xi * grad
        g_now = local_subproblem_value(task, i, w_r, grad_global, h, zeta)
        if g_now > g_prev + 1e-9 * max(abs(g_prev), 1.0):
            raise ArithmeticError(f"local GD diverged at iteration {iterations}")
        g_prev = g_now
        iterations += 1
    return LocalGdResult(h=h, iterations=iterations, objective_start=g0,
                        objective_end=g_prev, objective_opt=g_opt)


@dataclass
class RoundRecord:
    round_index: int
    global_model: np.ndarray
    delivered_down: np.ndarray     # bool per UE
    delivered_up: np.ndarray       # bool per UE
    local_iterations: np.ndarray   # int per UE
    local_obj_start: np.ndarray
    local_obj_end: np.ndarray
    global_loss: float


@dataclass
class TrainingTrace:
    rounds: list = field(default_factory=list)
    achieved_eps_global: float = math.nan
    achieved_eps_local: float = 0.0
    converged: bool = False

    def to_json(self) -> str:
        doc = {
            "achieved_eps_global": self.achieved_eps_global,
            "achieved_eps_local": self.achieved_eps_local,
            "converged": self.converged,
            "rounds": [
                {
                    "round": r.round_index,
                    "global_model": r.global_model.tolist(),
                    "delivered_down": r.delivered_down.tolist(),
                    "delivered_up": r.delivered_up.tolist(),
                    "local_iterations": r.local_iterations.tolist(),
                    "global_loss": r.global_loss,
                }
                for r in self.rounds
            ],
        }
        return json.dumps(doc)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["round", "global_loss", "n_up_success", "n_down_success"])
            for r in self.rounds:
                writer.writerow([r.round_index, repr(r.global_loss),
                                 int(r.delivered_up.sum()), int(r.delivered_down.sum())])


def run_federated(task: FederatedTask, hyper: FlHyperParams, *,
                  link_mode: str = "ideal", p_up: float = 1.0, p_down: float = 1.0,
                  seed: int = 0, max_rounds: int = 500,
                  reuse_stale_on_uplink_failure: bool = False,
                  w0: np.ndarray | None = None) -> TrainingTrace:
    """Run the federated loop with per-round delivery gating.

    In "ideal" mode every delivery succeeds and the broadcast gradient is the
    exact global gradient. In "stochastic" mode each UE's uplink/downlink
    success is an independent Bernoulli draw per round; the broadcast gradient
    is formed from the gradients of UEs whose uplink succeeded that round.
    UEs that miss the broadcast keep their previous local model. UEs whose
    uplink fails are dropped from aggregation with weights renormalized
    (unless ``reuse_stale_on_uplink_failure``, which keeps the last model the
    BS has seen from them).
    """
    if link_mode not in ("ideal", "stochastic"):
        raise ValueError("link_mode must be 'ideal' or 'stochastic'")
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    rng = derive_rng(seed, 31)
    n = task.n_ues
    d = task.dimension
    w = np.zeros(d) if w0 is None else np.asarray(w0, float).copy()
    w_star = task.w_star()
    f_star = global_loss(task, w_star)
    f0 = global_loss(task, w)
    gap0 = f0 - f_star

    trace = TrainingTrace()
    local_models = np.tile(w, (n, 1))
    last_seen = np.tile(w, (n, 1))  # for the stale-reuse variant

    def ratio(f):
        if gap0 <= 0:
            return 0.0
        return (f - f_star) / gap0

    trace.rounds.append(RoundRecord(
        round_index=0, global_model=w.copy(),
        delivered_down=np.zeros(n, bool), delivered_up=np.zeros(n, bool),
        local_iterations=np.zeros(n, int),
        local_obj_start=np.zeros(n), local_obj_end=np.zeros(n),
        global_loss=f0,
    ))
    if ratio(f0) <= hyper.eps_global:
        trace.converged = True
        trace.achieved_eps_global = ratio(f0)
        return trace

    for r in range(1, max_rounds + 1):
        if link_mode == "ideal":
            up_ok = np.ones(n, bool)
            down_ok = np.ones(n, bool)
        else:
            up_ok = rng.random(n) < p_up
            down_ok = rng.random(n) < p_down

        if link_mode == "ideal":
            grad = task.global_grad(w)
        elif np.any(up_ok):
            s = task.weights[up_ok].sum()
            grads = np.stack([task.local_grad(i, w) for i in np.flatnonzero(up_ok)])
            grad = task.weights[up_ok] @ grads / s
        else:
            # nobody reported a gradient: the round is skipped, model unchanged
            trace.rounds.append(RoundRecord(
                round_index=r, global_model=w.copy(),
                delivered_down=down_ok, delivered_up=up_ok,
                local_iterations=np.zeros(n, int),
                local_obj_start=np.zeros(n), local_obj_end=np.zeros(n),
                global_loss=global_loss(task, w)))
            continue

        iters = np.zeros(n, int)
        obj_start = np.zeros(n)
        obj_end = np.zeros(n)
        for i in range(n):
            if not down_ok[i]:
                continue
            res = local_gd(task, i, w, grad, hyper.gd_step_xi, hyper.zeta,
                           stop=("eps", hyper.eps_local))
            local_models[i] = w + res.h
            iters[i] = res.iterations
            obj_start[i] = res.objective_start
            obj_end[i] = res.objective_end
            trace.achieved_eps_local = max(trace.achieved_eps_local, res.accuracy_loss)

        if reuse_stale_on_uplink_failure:
            last_seen[up_ok] = local_models[up_ok]
            w_next = task.weights @ last_seen / task.weights.sum()
        elif np.any(up_ok):
            w_next = task.weights[up_ok] @ local_models[up_ok] / task.weights[up_ok].sum()
        else:
            w_next = w  # no deliveries: aggregation skipped

        w = w_next
        f_now = global_loss(task, w)
        trace.rounds.append(RoundRecord(
            round_index=r, global_model=w.copy(),
            delivered_down=down_ok, delivered_up=up_ok,
            local_iterations=iters, local_obj_start=obj_start, local_obj_end=obj_end,
            global_loss=f_now))
        if ratio(f_now) <= hyper.eps_global:
            trace.converged = True
            break

    trace.achieved_eps_global = ratio(trace.rounds[-1].global_loss)
    return trace
