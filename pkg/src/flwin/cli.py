"""Config-driven experiment runner emitting reproducible CSV artifacts.

CSV layout (stable, consumed by the plotting frontend):
  line 1: ``# flwin v1, config_hash=<12 hex>, seed=<u64>``
  line 2: column headers
  floats are rendered with 9 significant digits.

Exit codes: 0 ok, 2 unknown sweep parameter, 3 infeasible plan, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys

from . import fl, geometry, links, montecarlo, planner
from .network import FlHyperParams, NetworkConfig, config_hash, load_config

EXIT_BAD_SWEEP = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4

KINDS = ("success-prob-up", "success-prob-down", "bandwidth", "compute",
         "train", "plan", "sweep")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".9g")
    return str(v)


def _write_csv(path: str, header_meta: str, columns: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(header_meta + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _parse_sweep(spec: str) -> tuple[str, list[float]]:
    if "=" not in spec:
        raise ValueError("--sweep expects param=v1,v2,...")
    name, _, values = spec.partition("=")
    return name.strip(), [float(v) for v in values.split(",") if v.strip()]


def _apply_sweep(cfg, name: str, value: float):
    """Return a copy of the full config with one named field replaced."""
    if name in {f.name for f in dataclasses.fields(NetworkConfig)}:
        return dataclasses.replace(cfg, network=dataclasses.replace(cfg.network, **{name: value}))
    if name in {f.name for f in dataclasses.fields(FlHyperParams)}:
        return dataclasses.replace(cfg, fl=dataclasses.replace(cfg.fl, **{name: value}))
    if name in ("b_up_max", "b_down_max", "per_ue_compute_max"):
        budget = dict(cfg.budget)
        budget[name] = value
        return dataclasses.replace(cfg, budget=budget)
    raise KeyError(name)


def _budget(cfg, n_ues: int) -> planner.ResourceBudget:
    doc = cfg.budget
    per_ue = doc.get("per_ue_compute_max", math.inf)
    if isinstance(per_ue, (int, float)):
        per_ue = (float(per_ue),) * n_ues
    else:
        per_ue = tuple(float(c) for c in per_ue)
    return planner.ResourceBudget(
        b_up_max=float(doc.get("b_up_max", math.inf)),
        b_down_max=float(doc.get("b_down_max", math.inf)),
        per_ue_compute_max=per_ue,
    )


def _sweep_points(cfg, args):
    """Yield (param, value, swept config) triples; a single None point if no sweep."""
    if not args.sweep:
        yield "", "", cfg
        return
    name, values = _parse_sweep(args.sweep)
    for v in values:
        yield name, v, _apply_sweep(cfg, name, v)


def run_success_prob(cfg, args, direction: str):
    rows = []
    for name, value, c in _sweep_points(cfg, args):
        if direction == "up":
            analytic = links.uplink_success_probability(c.network, c.path_loss)
            est = montecarlo.estimate_uplink_success(c.network, c.path_loss,
                                                     args.trials, args.seed)
        else:
            analytic = links.downlink_success_probability(c.network, c.path_loss)
            est = montecarlo.estimate_downlink_success(c.network, c.path_loss,
                                                      args.trials, args.seed)
        rows.append([name, value, analytic, est.mean, est.std_error,
                     est.ci95_low, est.ci95_high, est.trials,
                     abs(analytic - est.mean)])
    return (["sweep_param", "sweep_value", "analytic", "mc_mean", "mc_std_error",
             "mc_ci_low", "mc_ci_high", "trials", "abs_diff"], rows)


def run_bandwidth(cfg, args):
    rows = []
    for name, value, c in _sweep_points(cfg, args):
        pop = geometry.sample_population(c.network, c.dataset_law, args.seed)
        h = c.fl
        k = planner.min_rounds(h.lipschitz_l, h.strong_convexity_gamma, h.zeta,
                               h.eps_local, h.eps_global)
        a_up = links.expected_uplink_bandwidth(
            pop, c.network, c.path_loss, k, model_size_bits=h.model_size_bits,
            t_up_deadline_s=h.t_up_deadline_s, seed=args.seed)
        a_down = links.expected_downlink_bandwidth(
            pop, c.network, c.path_loss, k, model_size_bits=h.model_size_bits,
            t_down_deadline_s=h.t_down_deadline_s, seed=args.seed)
        e_up = montecarlo.estimate_bandwidth(
            pop, c.network, c.path_loss, k, "up", args.trials, args.seed + 1,
            model_size_bits=h.model_size_bits, deadline_s=h.t_up_deadline_s)
        e_down = montecarlo.estimate_bandwidth(
            pop, c.network, c.path_loss, k, "down", args.trials, args.seed + 1,
            model_size_bits=h.model_size_bits, deadline_s=h.t_down_deadline_s)
        rows.append([name, value, k, a_up, e_up.mean, e_up.std_error,
                     a_down, e_down.mean, e_down.std_error, args.trials])
    return (["sweep_param", "sweep_value", "k_rounds", "analytic_up", "mc_up_mean",
             "mc_up_std_error", "analytic_down", "mc_down_mean", "mc_down_std_error",
             "trials"], rows)


def run_compute(cfg, args):
    rows = []
    for name, value, c in _sweep_points(cfg, args):
        pop = geometry.sample_population(c.network, c.dataset_law, args.seed)
        h = c.fl
        tau = planner.min_local_iterations(h.lipschitz_l, h.strong_convexity_gamma,
                                           h.gd_step_xi, h.eps_local)
        k = planner.min_rounds(h.lipschitz_l, h.strong_convexity_gamma, h.zeta,
                               h.eps_local, h.eps_global)
        c_ue = links.expected_compute_per_iteration(pop, c.network, c.path_loss)
        analytic = links.total_compute(tau, k, c_ue)
        est = montecarlo.estimate_compute(pop, c.network, c.path_loss, tau, k,
                                          args.trials, args.seed + 1)
        rows.append([name, value, tau, k, analytic, est.mean, est.std_error,
                     args.trials])
    return (["sweep_param", "sweep_value", "tau", "k_rounds", "analytic", "mc_mean",
             "mc_std_error", "trials"], rows)


def run_train(cfg, args):
    h = cfg.fl
    task = fl.make_task(args.n_ues, args.dimension, h.lipschitz_l,
                        h.strong_convexity_gamma, seed=args.seed)
    if args.link == "ideal":
        trace = fl.run_federated(task, h, link_mode="ideal", max_rounds=args.max_rounds)
    else:
        p_up = links.uplink_success_probability(cfg.network, cfg.path_loss)
        p_down = links.downlink_success_probability(cfg.network, cfg.path_loss)
        trace = fl.run_federated(task, h, link_mode="stochastic", p_up=p_up,
                                 p_down=p_down, seed=args.seed,
                                 max_rounds=args.max_rounds)
    f_star = fl.global_loss(task, task.w_star())
    gap0 = trace.rounds[0].global_loss - f_star
    rows = []
    for r in trace.rounds:
        ratio = 0.0 if gap0 <= 0 else (r.global_loss - f_star) / gap0
        rows.append([r.round_index, r.global_loss, ratio,
                     int(r.delivered_up.sum()), int(r.delivered_down.sum())])
    return (["round", "global_loss", "loss_ratio", "n_up_success", "n_down_success"],
            rows)


def _plan_row(name, value, plan):
    return [name, value, plan.case_tag, plan.feasible, plan.tau, plan.k_rounds,
            plan.eps_local_effective, plan.eps_global_effective, plan.b_up,
            plan.b_down, plan.c_total, plan.diagnostics.replace(",", ";")]


PLAN_COLUMNS = ["sweep_param", "sweep_value", "case", "feasible", "tau", "k_rounds",
                "eps_local_effective", "eps_global_effective", "b_up_hz", "b_down_hz",
                "c_total_cycles", "diagnostics"]


def run_plan(cfg, args):
    rows = []
    any_infeasible = False
    for name, value, c in _sweep_points(cfg, args):
        pop = geometry.sample_population(c.network, c.dataset_law, args.seed)
        budget = _budget(c, len(pop))
        if args.case == 1:
            plan = planner.plan_case1(c.fl, pop, c.network, c.path_loss, seed=args.seed)
        elif args.case == 2:
            plan = planner.plan_case2(budget, c.fl, pop, c.network, c.path_loss,
                                      seed=args.seed)
        else:
            plan = planner.plan_case3(budget, c.fl, pop, c.network, c.path_loss,
                                      seed=args.seed)
        any_infeasible = any_infeasible or not plan.feasible
        rows.append(_plan_row(name, value, plan))
    return PLAN_COLUMNS, rows, any_infeasible


def run_sweep(cfg, args, meta: str):
    """Accuracy-vs-resource surface inputs: one CSV per resource axis.

    The bandwidth axis sweeps the affordable round count; the compute axis
    sweeps the local-accuracy floor. Cells of the joint surface follow from
    exp(-k_max * (1 - eps_local) * round_rate).
    """
    h = cfg.fl
    l, g, z = h.lipschitz_l, h.strong_convexity_gamma, h.zeta
    pop = geometry.sample_population(cfg.network, cfg.dataset_law, args.seed)
    round_rate = (1.0 - 0.0) * g**2 * z / (2.0 * l**2)  # per-round decay at eps_l=0
    b_up_round = links.expected_uplink_bandwidth(
        pop, cfg.network, cfg.path_loss, 1, model_size_bits=h.model_size_bits,
        t_up_deadline_s=h.t_up_deadline_s, seed=args.seed)
    c_ue = links.expected_compute_per_iteration(pop, cfg.network, cfg.path_loss)

    k_grid = cfg.budget.get("k_max_grid", [10, 20, 40, 60, 80, 100])
    b_rows = []
    for k_max in k_grid:
        eps_g = math.exp(-k_max * (1.0 - h.eps_local) * round_rate)
        b_rows.append([k_max * b_up_round, int(k_max), round_rate, h.eps_local,
                       eps_g, 1.0 - eps_g])
    ratio_grid = cfg.budget.get("compute_ratio_grid", [25, 50, 100, 200, 400])
    c_rows = []
    for ratio in ratio_grid:
        eps_l = math.exp((l * h.gd_step_xi - 2.0) * h.gd_step_xi * g * ratio / 2.0)
        c_rows.append([ratio * c_ue, ratio, eps_l, 1.0 - eps_l])

    stem, ext = os.path.splitext(args.output)
    path_b = f"{stem}_bandwidth{ext or '.csv'}"
    path_c = f"{stem}_compute{ext or '.csv'}"
    _write_csv(path_b, meta,
               ["b_up_max_hz", "k_max", "round_rate", "eps_local",
                "eps_global_achieved", "global_accuracy"], b_rows)
    _write_csv(path_c, meta,
               ["c_sum_max_cycles", "compute_ratio", "eps_local_effective",
                "local_accuracy"], c_rows)
    return [path_b, path_c]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flwin",
                                description="federated-learning wireless resource experiments")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--output", default="out.csv")
    p.add_argument("--sweep", default="", metavar="PARAM=V1,V2,...")
    p.add_argument("--case", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--link", choices=("ideal", "stochastic"), default="ideal")
    p.add_argument("--max-rounds", type=int, default=200)
    p.add_argument("--n-ues", type=int, default=20)
    p.add_argument("--dimension", type=int, default=10)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # FLWIN_THREADS caps workers; all current paths are single-threaded, which
    # keeps outputs byte-identical for any value.
    os.environ.setdefault("FLWIN_THREADS", "1")
    try:
        cfg = load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"error: cannot load config: {exc}", file=sys.stderr)
        return EXIT_IO

    meta = f"# flwin v1, config_hash={config_hash(cfg)}, seed={args.seed}"
    infeasible = False
    try:
        if args.kind == "success-prob-up":
            columns, rows = run_success_prob(cfg, args, "up")
        elif args.kind == "success-prob-down":
            columns, rows = run_success_prob(cfg, args, "down")
        elif args.kind == "bandwidth":
            columns, rows = run_bandwidth(cfg, args)
        elif args.kind == "compute":
            columns, rows = run_compute(cfg, args)
        elif args.kind == "train":
            columns, rows = run_train(cfg, args)
        elif args.kind == "plan":
            columns, rows, infeasible = run_plan(cfg, args)
        else:
            paths = run_sweep(cfg, args, meta)
            print("\n".join(paths))
            return 0
    except KeyError as exc:
        print(f"error: unknown sweep parameter {exc}", file=sys.stderr)
        return EXIT_BAD_SWEEP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SWEEP

    try:
        _write_csv(args.output, meta, columns, rows)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(args.output)
    return EXIT_INFEASIBLE if infeasible else 0


if __name__ == "__main__":
    sys.exit(main())
