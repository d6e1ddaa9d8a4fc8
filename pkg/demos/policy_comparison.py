#!/usr/bin/env python3
"""Simulated comparison of sleep policies at λ=550, μ=1000, 130 W on / 75 W off.

The threshold (N-) policy's energy ratio is pinned near one value no matter
the threshold, while its delay grows with N.  Splitting one fixed vacation
into n equal stages (the bounded multi-vacation scheme) walks the delay down
with n at a roughly flat energy level.
"""
from bmvq.compare import bmv_vs_n_sweep, bmv_vs_t_sweep

print("threshold policy, N = 1..10 (the off/on ratio is 75/130 = 0.5769):")
print(f"  {'N':>3} {'NE':>8} {'W (s)':>11}")
for r in bmv_vs_n_sweep(n_values=range(1, 11), base_seed=3, reps=8,
                        bmv_candidates=()):
    print(f"  {r.parameter:>3.0f} {r.ne:>8.4f} {r.w:>11.3e}")
print("  -> NE stays above 0.6 at every threshold: this policy cannot reach"
      "\n     the deeper-saving region, and its delay climbs with N")

print("\nsingle vacation of 0.01 split into n equal stages, n = 1..7:")
print(f"  {'n':>3} {'policy':>9} {'NE':>8} {'W (s)':>11}")
for r in bmv_vs_t_sweep(total_vacation=0.01, n_values=range(1, 8),
                        base_seed=3, reps=8):
    print(f"  {r.parameter:>3.0f} {r.policy:>9} {r.ne:>8.4f} {r.w:>11.3e}")
print("  -> finer stages check the queue more often: delay falls with n"
      "\n     while the energy level only drifts")
