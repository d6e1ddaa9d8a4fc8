#!/usr/bin/env python3
"""Delay-constrained energy minimisation over a vacation-parameter pool.

Scans 9 vacation lengths x 6 vacation counts at λ=0.3, μ=0.8 under the mean
wait bound 2.0, prints the analytic table and the optimum, then re-scores the
frontier cells with the simulator to show where the model flatters reality:
the closed-form wait dips under the bound for short stages while the
simulated wait for any vacation policy stays above the no-policy baseline
(which already sits exactly at the bound here).
"""
from bmvq import PowerProfile, SearchPool, TrafficModel, opt_search, replicate
from bmvq import PolicyConfig, PolicyKind, validate_config
from bmvq.optimizer import CASE_STUDY_LV_POOL, CASE_STUDY_NV_POOL, analytic_evaluator

traffic = TrafficModel(0.3, 0.8)
power = PowerProfile(p_active=130.0, stage_powers=(75.0,))
pool = SearchPool(CASE_STUDY_LV_POOL, CASE_STUDY_NV_POOL, d_const=2.0)

result = opt_search(pool, analytic_evaluator(traffic, power))
print("analytic table (NE / W, * = feasible):")
header = "  lv\\nv " + "".join(f"{nv:>16d}" for nv in CASE_STUDY_NV_POOL)
print(header)
for lv in CASE_STUDY_LV_POOL:
    cells = []
    for nv in CASE_STUDY_NV_POOL:
        c = result.cell(lv, nv)
        mark = "*" if c.feasible else " "
        cells.append(f"  {c.ne:.3f}/{c.w:.3f}{mark}")
    print(f"  {lv:>5.1f} " + "".join(cells))
print(f"\nanalytic optimum: (L_v, N_v) = {result.best}, NE = {result.best_ne:.4f}")

# simulate the picked cell and its column to see the model's wait underestimate
print("\nsimulated wait at the frontier (30 reps each):")
for lv, nv in [(0.8, 6), (0.8, 3), (0.2, 1)]:
    cfg = validate_config(
        traffic,
        PolicyConfig(kind=PolicyKind.BMV, stage_lengths=(lv,) * nv, queue_cap=50),
        PowerProfile(p_active=130.0, stage_powers=(75.0,) * nv),
    )
    m = replicate(cfg, 1e6 / traffic.lam, base_seed=1, reps=30)
    c = result.cell(lv, nv)
    print(f"  ({lv}, {nv}): analytic W = {c.w:.4f}   simulated W = "
          f"{m.w_mean:.4f} ± {m.w_ci_halfwidth:.4f}   NE {c.ne:.4f} vs {m.ne:.4f}")
print("\nevery simulated wait exceeds the bound 2.0: with this traffic the"
      "\nbound equals the no-policy sojourn, so no sleeping policy can meet it"
      "\nin simulation; the analytic pick is where the model's optimism lands.")
