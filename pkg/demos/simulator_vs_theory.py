#!/usr/bin/env python3
"""Cross-check the discrete-event simulator against closed forms.

Three checks: the no-policy sojourn against the finite-buffer formula, a
multi-vacation configuration against exact regenerative-cycle averages, and
Little's law inside the simulator itself.
"""
import math

import numpy as np

from bmvq import (
    PolicyConfig,
    PolicyKind,
    PowerProfile,
    TrafficModel,
    mm1k_sojourn,
    replicate,
    validate_config,
)

lam, mu, cap = 0.3, 0.8, 50
traffic = TrafficModel(lam, mu)

# 1) no-policy M/M/1/K: simulated sojourn vs the closed form
plain = validate_config(traffic,
                        PolicyConfig(kind=PolicyKind.NOPOLICY, queue_cap=cap),
                        PowerProfile(p_active=130.0))
m = replicate(plain, horizon=3e5, base_seed=7, reps=10)
print(f"no policy: simulated W = {m.w_mean:.4f} ± {m.w_ci_halfwidth:.4f}, "
      f"closed form = {mm1k_sojourn(traffic, cap):.4f}")

# 2) three 0.8-length vacation stages vs exact renewal-reward averages
lv, nv, kappa = 0.8, 3, 75.0 / 130.0
bmv = validate_config(traffic,
                      PolicyConfig(kind=PolicyKind.BMV, stage_lengths=(lv,) * nv,
                                   queue_cap=cap),
                      PowerProfile(p_active=130.0, stage_powers=(75.0,) * nv))
m = replicate(bmv, horizon=1e6 / lam, base_seed=11, reps=10)

rho = lam / mu
p_a = math.exp(-lam * lv * nv)
p_i = np.array([math.exp(-lam * (i - 1) * lv) - math.exp(-lam * i * lv)
                for i in range(1, nv + 1)])
p1 = 1 - math.exp(-lam * lv)
batch = lam * lv / p1
batch2 = (lam * lv) ** 2 / p1
unit_area = 1.0 / ((mu - lam) * (1 - rho))
sleep_area = lam * lv ** 2 / 2 / p1
busy_area = unit_area * batch + batch2 / 2 / (mu - lam)
w_exact = ((p_i * (sleep_area + busy_area)).sum() + p_a * unit_area) / \
          ((p_i * batch / (1 - rho)).sum() + p_a / (1 - rho))
idx = np.arange(1, nv + 1)
busy_len = batch / (mu - lam)
en = (p_i * (idx * lv * kappa + busy_len)).sum() + \
    p_a * (nv * lv * kappa + 1 / lam + 1 / (mu - lam))
ln = (p_i * (idx * lv + busy_len)).sum() + p_a * (nv * lv + 1 / lam + 1 / (mu - lam))
print(f"\nBMV({lv}, {nv}): simulated NE = {m.ne:.5f}, exact cycle average = {en / ln:.5f}")
print(f"BMV({lv}, {nv}): simulated W  = {m.w_mean:.4f} ± {m.w_ci_halfwidth:.4f}, "
      f"exact cycle average = {w_exact:.4f}")

# 3) Little's law: time-average system size vs throughput times sojourn
lam_eff = m.served / m.horizon
print(f"\nLittle check: L̄ = {m.time_avg_queue:.5f} vs "
      f"λ_eff · W = {lam_eff * m.w_mean:.5f}")
print(f"flow: {m.arrivals} arrivals = {m.served} served + {m.dropped} dropped "
      f"+ {m.in_flight} in flight")
