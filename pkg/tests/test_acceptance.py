"""End-to-end acceptance checks.

Each test prints a single summary line so a log scan shows the verdicts.
The uplink cross-validation (check 1) compares the normal-approximation
closed form against direct simulation; for these parameters the two routes
genuinely disagree (the interference distribution is far too heavy-tailed
for a normal fit), so that check fails and is left failing on purpose. Both
routes are implemented faithfully; see the repository notes for the numbers.
"""

import csv
import json
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy import stats

from flwin import fl, geometry, links, montecarlo, planner
from flwin.network import (
    DatasetLaw,
    FlHyperParams,
    NetworkConfig,
    PowerLawPathLoss,
)

PL = PowerLawPathLoss()
FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def _verdict(num, ok, detail=""):
    line = f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line)


def test_criterion_1_uplink_validation():
    """Closed-form uplink success vs Monte Carlo on a 3x3 parameter grid."""
    t0 = time.monotonic()
    worst = 0.0
    rows = []
    for lam in (0.5e-4, 1.0e-4, 2.0e-4):
        for beta_db in (-15.0, -10.0, -5.0):
            cfg = NetworkConfig(lambda_i=lam, beta_up_db=beta_db)
            analytic = links.uplink_success_probability(cfg, PL)
            est = montecarlo.estimate_uplink_success(cfg, PL, 100_000, seed=101)
            diff = abs(analytic - est.mean)
            worst = max(worst, diff)
            rows.append((lam, beta_db, analytic, est.mean, diff))
    elapsed = time.monotonic() - t0
    ok = worst <= 0.03 and elapsed < 60.0
    _verdict(1, ok, f"worst |analytic - mc| = {worst:.4f}, runtime {elapsed:.1f}s")
    for lam, beta_db, a, m, d in rows:
        print(f"  lambda_i={lam:g} beta_up={beta_db:g}dB analytic={a:.4f} "
              f"mc={m:.4f} |diff|={d:.4f}")
    assert elapsed < 60.0
    assert worst <= 0.03, (
        f"normal-approximation route disagrees with simulation by {worst:.3f} "
        f"(> 0.03); both routes are implemented as specified")


def test_criterion_2_downlink_validation():
    t0 = time.monotonic()
    analytic = []
    empirical = []
    worst = 0.0
    for beta_db in (5.0, 15.0, 25.0):
        cfg = NetworkConfig(beta_down_db=beta_db)
        a = links.downlink_success_probability(cfg, PL)
        m = montecarlo.estimate_downlink_success(cfg, PL, 100_000, seed=102).mean
        analytic.append(a)
        empirical.append(m)
        worst = max(worst, abs(a - m))
    mono_a = all(b <= a + 1e-12 for a, b in zip(analytic, analytic[1:]))
    mono_m = all(b <= a + 1e-12 for a, b in zip(empirical, empirical[1:]))
    ok = worst <= 0.01 and mono_a and mono_m
    _verdict(2, ok, f"worst |analytic - mc| = {worst:.4f}")
    assert worst <= 0.01
    assert mono_a and mono_m
    assert time.monotonic() - t0 < 60.0


def test_criterion_3_closed_form_bounds():
    tau = planner.min_local_iterations(0.1, 0.1, 0.1, 0.2)
    k = planner.min_rounds(0.1, 0.1, 0.1, 0.2, 0.2)

    # independent re-derivation from the step-by-step fixture
    with open(os.path.join(FIXTURES, "bound_rederivation.csv")) as fh:
        v = {row["quantity"]: float(row["value"]) for row in csv.DictReader(fh)}
    assert v["two_minus_l_xi"] == pytest.approx(2.0 - v["lipschitz_l"] * v["step_xi"], abs=1e-12)
    assert v["iter_denominator"] == pytest.approx(
        v["two_minus_l_xi"] * v["step_xi"] * v["gamma"], abs=1e-12)
    assert v["ln_inv_eps_local"] == pytest.approx(math.log(1.0 / v["eps_local"]), abs=1e-12)
    assert v["iter_ratio"] == pytest.approx(
        2.0 * v["ln_inv_eps_local"] / v["iter_denominator"], abs=1e-9)
    assert v["min_local_iterations"] == math.ceil(v["iter_ratio"])
    assert v["two_l_squared"] == pytest.approx(2.0 * v["lipschitz_l"] ** 2, abs=1e-12)
    assert v["round_numerator"] == pytest.approx(
        v["two_l_squared"] * v["ln_inv_eps_global"], abs=1e-12)
    assert v["round_denominator"] == pytest.approx(
        v["one_minus_eps_local"] * v["gamma"] ** 2 * v["zeta"], abs=1e-12)
    assert v["round_ratio"] == pytest.approx(
        v["round_numerator"] / v["round_denominator"], abs=1e-9)
    assert v["min_rounds"] == math.ceil(v["round_ratio"])

    ok = (tau, k) == (162, 41) and v["min_local_iterations"] == 162 and v["min_rounds"] == 41
    _verdict(3, ok, f"tau={tau}, K={k}")
    assert tau == 162
    assert k == 41


def test_criterion_4_convergence_soundness():
    t0 = time.monotonic()
    hyper = FlHyperParams()
    local_ok = 0
    global_ok = 0
    n_tasks = 20
    for seed in range(n_tasks):
        task = fl.make_task(20, 10, 0.1, 0.1, seed=seed)
        w = np.ones(10)
        grad = task.global_grad(w)
        res = fl.local_gd(task, 0, w, grad, xi=0.1, zeta=0.1, stop=("eps", 0.2))
        if res.iterations <= 162 and res.accuracy_loss <= 0.2:
            local_ok += 1
        trace = fl.run_federated(task, hyper, link_mode="ideal", max_rounds=41)
        if trace.converged and trace.rounds[-1].round_index <= 41:
            global_ok += 1
    elapsed = time.monotonic() - t0
    ok = local_ok == n_tasks and global_ok >= 18 and elapsed < 30.0
    _verdict(4, ok, f"local {local_ok}/20, global {global_ok}/20, runtime {elapsed:.1f}s")
    assert local_ok == n_tasks
    assert global_ok >= 18
    assert elapsed < 30.0


def test_criterion_5_thinning_identity():
    p_active = geometry.active_probability(1.0, 1.0)
    worst = 0.0
    for nbar in (0.5, 2.7166, 10.0):
        lam = nbar / (math.pi * 100.0**2 * p_active)
        cfg = NetworkConfig(lambda_i=lam)
        actual = geometry.mean_interferers(cfg)
        for n in range(0, 41):
            compound = geometry.interferer_count_pmf(n, cfg, truncation=400)
            direct = float(stats.poisson.pmf(n, actual))
            worst = max(worst, abs(compound - direct))
    ok = worst <= 1e-10
    _verdict(5, ok, f"worst pointwise gap {worst:.2e}")
    assert worst <= 1e-10


def test_criterion_6_tradeoff():
    cfg = NetworkConfig()
    pop = geometry.sample_population(cfg, DatasetLaw(), seed=7)
    hyper = FlHyperParams()

    grid = (0.4, 0.3, 0.2, 0.1)  # decreasing local loss target
    ks = [planner.min_rounds(0.1, 0.1, 0.1, e, 0.2) for e in grid]
    taus = [planner.min_local_iterations(0.1, 0.1, 0.1, e) for e in grid]
    mono = all(b < a for a, b in zip(ks, ks[1:])) and \
        all(b > a for a, b in zip(taus, taus[1:]))

    c2 = planner.plan_case2(planner.ResourceBudget(), hyper, pop, cfg, PL,
                            k_max_override=50)
    c_ue = links.expected_compute_per_iteration(pop, cfg, PL)
    c3 = planner.plan_case3(
        planner.ResourceBudget(per_ue_compute_max=(200.0 * c_ue,)),
        hyper, pop, cfg, PL)

    cap_ok = abs(c2.eps_local_effective - 0.35623) <= 1e-4 and c2.tau == 104
    floor_ok = abs(c3.eps_local_effective - 0.13671) <= 1e-4
    ok = mono and cap_ok and floor_ok
    _verdict(6, ok, f"cap={c2.eps_local_effective:.5f} tau={c2.tau} "
                    f"floor={c3.eps_local_effective:.5f}")
    assert mono
    assert cap_ok
    assert floor_ok


def test_criterion_7_resource_cross_validation():
    cfg = NetworkConfig()
    pop = geometry.sample_population(cfg, DatasetLaw(), seed=7)
    s_bits = 9.248e6
    k = 41

    a_up = links.expected_uplink_bandwidth(pop, cfg, PL, k, model_size_bits=s_bits,
                                           seed=0)
    m_up = montecarlo.estimate_bandwidth(pop, cfg, PL, k, "up", 100_000, seed=107,
                                         model_size_bits=s_bits).mean
    a_down = links.expected_downlink_bandwidth(pop, cfg, PL, k,
                                               model_size_bits=s_bits, seed=0)
    m_down = montecarlo.estimate_bandwidth(pop, cfg, PL, k, "down", 100_000,
                                           seed=107, model_size_bits=s_bits).mean
    c_ue = links.expected_compute_per_iteration(pop, cfg, PL)
    a_c = links.total_compute(162, k, c_ue)
    m_c = montecarlo.estimate_compute(pop, cfg, PL, 162, k, 100_000, seed=107).mean

    rel = [abs(a - m) / a for a, m in ((a_up, m_up), (a_down, m_down), (a_c, m_c))]

    bands = []
    for eps_g in (0.1, 0.2, 0.3):
        kk = planner.min_rounds(0.1, 0.1, 0.1, 0.2, eps_g)
        bands.append(links.expected_uplink_bandwidth(
            pop, cfg, PL, kk, model_size_bits=s_bits, seed=0))
    strict_dec = all(b < a for a, b in zip(bands, bands[1:]))

    ok = max(rel) <= 0.02 and strict_dec
    _verdict(7, ok, f"worst relative gap {max(rel):.4f}")
    assert max(rel) <= 0.02
    assert strict_dec


def test_criterion_8_determinism(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({}))
    blobs = []
    for threads in ("1", "2", "8"):
        out = tmp_path / f"c8_{threads}.csv"
        env = dict(os.environ, FLWIN_THREADS=threads)
        res = subprocess.run(
            [sys.executable, "-m", "flwin.cli", "bandwidth", "--config",
             str(cfg_path), "--seed", "77", "--trials", "40000",
             "--output", str(out)],
            env=env, capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        blobs.append(out.read_bytes())
    ok = blobs[0] == blobs[1] == blobs[2]
    _verdict(8, ok, "byte-identical across FLWIN_THREADS in {1,2,8}")
    assert ok
