"""Simulation-based policy comparisons.

Two scenarios, both simulated:

* ``bmv_vs_n_sweep`` sweeps the N-policy threshold at the reference
  comparison parameters (lambda=550, mu=1000, K=50, 130 W on / 75 W off) and
  overlays caller-supplied bounded-multi-vacation candidates.
* ``bmv_vs_t_sweep`` splits a single vacation of length L into n equal
  stages for n = 1..7; the n = 1 row is the T-policy itself.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

from .config import PolicyConfig, PolicyKind, PowerProfile, TrafficModel, validate_config
from .simulator import replicate

FIG1_LAMBDA = 550.0
FIG1_MU = 1000.0
FIG1_P_ON = 130.0
FIG1_P_OFF = 75.0

# illustrative BMV overlay candidates (not tied to any reference
# configuration)
DEFAULT_BMV_CANDIDATES = (
    (0.002, 4),
    (0.005, 2),
)


@dataclass(frozen=True)
class CompareRow:
    policy: str
    parameter: float       # N for the N-policy, n (stage count) for BMV rows
    ne: float
    w: float
    w_ci_halfwidth: float


def bmv_vs_n_sweep(n_values=range(1, 11), lam: float = FIG1_LAMBDA,
                   mu: float = FIG1_MU, queue_cap: int = 50,
                   p_on: float = FIG1_P_ON, p_off: float = FIG1_P_OFF,
                   bmv_candidates=DEFAULT_BMV_CANDIDATES,
                   base_seed: int = 1, reps: int = 10,
                   horizon: float | None = None, workers: int = 1):
    traffic = TrafficModel(lam=lam, mu=mu)
    h = horizon if horizon is not None else 1e6 / lam
    rows = []
    for i, n in enumerate(n_values):
        config = validate_config(
            traffic,
            PolicyConfig(kind=PolicyKind.NPOLICY, n_threshold=int(n),
                         queue_cap=queue_cap),
            PowerProfile(p_active=p_on, stage_powers=(p_off,), p_idle=p_off),
        )
        m = replicate(config, h, base_seed + i * 1000, reps, workers=workers)
        rows.append(CompareRow(policy="npolicy", parameter=float(n), ne=m.ne,
                               w=m.w_mean, w_ci_halfwidth=m.w_ci_halfwidth))
    for j, (lv, nv) in enumerate(bmv_candidates or ()):
        config = validate_config(
            traffic,
            PolicyConfig(kind=PolicyKind.BMV, stage_lengths=(lv,) * int(nv),
                         queue_cap=queue_cap),
            PowerProfile(p_active=p_on, stage_powers=(p_off,) * int(nv),
                         p_idle=p_on),
        )
        m = replicate(config, h, base_seed + (100 + j) * 1000, reps,
                      workers=workers)
        rows.append(CompareRow(policy=f"bmv({lv},{nv})", parameter=float(nv),
                               ne=m.ne, w=m.w_mean,
                               w_ci_halfwidth=m.w_ci_halfwidth))
    return rows


def bmv_vs_t_sweep(total_vacation: float = 0.01, n_values=range(1, 8),
                   lam: float = FIG1_LAMBDA, mu: float = FIG1_MU,
                   queue_cap: int = 50, p_on: float = FIG1_P_ON,
                   p_off: float = FIG1_P_OFF, base_seed: int = 1,
                   reps: int = 10, horizon: float | None = None,
                   workers: int = 1):
    """Split a T-policy vacation into n equal stages; n = 1 is the T-policy."""
    traffic = TrafficModel(lam=lam, mu=mu)
    h = horizon if horizon is not None else 1e6 / lam
    rows = []
    for i, n in enumerate(n_values):
        n = int(n)
        config = validate_config(
            traffic,
            PolicyConfig(kind=PolicyKind.BMV,
                         stage_lengths=(total_vacation / n,) * n,
                         queue_cap=queue_cap),
            PowerProfile(p_active=p_on, stage_powers=(p_off,) * n, p_idle=p_on),
        )
        m = replicate(config, h, base_seed + i * 1000, reps, workers=workers)
        rows.append(CompareRow(policy="tpolicy" if n == 1 else "bmv",
                               parameter=float(n), ne=m.ne, w=m.w_mean,
                               w_ci_halfwidth=m.w_ci_halfwidth))
    return rows


def write_compare_csv(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["policy", "parameter", "ne", "w", "w_ci_halfwidth"])
        for r in rows:
            w.writerow([r.policy, r.parameter, r.ne, r.w, r.w_ci_halfwidth])
