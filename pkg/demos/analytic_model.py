#!/usr/bin/env python3
"""Walk through the closed-form energy and delay models for one configuration.

A bounded multi-vacation server at λ=0.3, μ=0.8 with six sleep stages of 0.8
time units each (the delay-constrained optimum for a bound of 2.0).
"""
import numpy as np

from bmvq import (
    MarkovEngine,
    PolicyConfig,
    PolicyKind,
    PowerProfile,
    TrafficModel,
    delta_dist,
    expected_busy_epochs,
    expected_normalized_energy,
    expected_waiting_time,
    first_arrival_stage_probs,
    initial_queue_dist,
    validate_config,
)

traffic = TrafficModel(lam=0.3, mu=0.8)
config = validate_config(
    traffic,
    PolicyConfig(kind=PolicyKind.BMV, stage_lengths=(0.8,) * 6, queue_cap=50),
    PowerProfile(p_active=130.0, stage_powers=(75.0,) * 6),
)
print(f"rho = {config.rho:.4f}, total sleep window = {config.policy.total_sleep}")

# Which stage sees the first arrival? The probabilities telescope to one.
sp = first_arrival_stage_probs(traffic.lam, config.policy.stage_lengths)
print("\nfirst-arrival stage probabilities:")
for i, p in enumerate(sp.p_first_arrival, start=1):
    print(f"  stage {i}: {p:.5f}")
print(f"  no arrival in any stage: {sp.p_no_arrival:.5f}")
print(f"  total: {sp.total:.12f}")

# The queue found at wake-up is Poisson over the triggering stage, conditioned
# nonempty, and the busy period drains it through the departure-epoch chain.
engine = MarkovEngine(traffic, cap=50)
init = initial_queue_dist(traffic.lam, 0.8, 50, condition_nonempty=True)
z, ql = engine.absorption(init)
print(f"\nwake-up batch mean: {ql[0]:.5f} packets")
print(f"busy period: {expected_busy_epochs(z):.5f} departures "
      f"-> {expected_busy_epochs(z) / traffic.mu:.5f} time units")
z1, _ = engine.absorption(delta_dist(1, 50))
print(f"busy period from a single packet: "
      f"{expected_busy_epochs(z1) / traffic.mu:.5f} time units")

# Energy: per-event ratios weighted by the stage probabilities.
energy = expected_normalized_energy(config, engine)
print("\nenergy decomposition (event, ratio, weight):")
for ev in energy.per_event:
    tag = f"stage {ev.index}" if ev.index <= 6 else "no arrival (idle)"
    print(f"  {tag:18s} E={ev.energy_ratio:.5f}  P={ev.weight:.5f}")
print(f"normalised energy per bit: {energy.ne:.5f}")

# Delay: closed M/M/1/K form for empty-vacation cycles, accumulated
# sleep + busy waiting for the rest.
delay = expected_waiting_time(config, engine)
print(f"\nmean wait, empty-vacation cycles (w_a): {delay.w_a:.5f}")
print(f"mean wait, interrupted-sleep cycles (w_b): {delay.w_b:.5f}")
print(f"  sleep-phase accumulation a_s = {delay.a_s:.5f}")
print(f"  busy-phase accumulation  a_b = {delay.a_b:.5f}")
print(f"  departures per cycle         = {delay.alpha_b:.5f}")
print(f"mixture mean wait: {delay.w:.5f}  (bound in the case study: 2.0)")
