"""Evaluation layer for the four-stage 5G base-station sleep configuration.

The reference hardware profile has four nested sleep depths with
progressively longer activation times and lower draws, a 234.2 W active
power and a 38.2 W awake-idle power.  Case 1 sweeps the input rate at fixed
service rate; Case 2 fixes the input rate and sweeps the traffic load with
the service power scaling linearly in the service rate (dynamic frequency
scaling at fixed voltage, p = beta * mu).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .config import PolicyConfig, PolicyKind, PowerProfile, TrafficModel, validate_config
from .delay import expected_waiting_time
from .energy import expected_normalized_energy
from .markov import DEFAULT_EPSILON, MarkovEngine

STAGE_LENGTHS_5G = (0.0000714, 0.001, 0.01, 1.0)
STAGE_POWERS_5G = (25.5, 2.9, 2.0, 1.8)
P_ACTIVE_5G = 234.2
P_IDLE_5G = 38.2
MU_CASE1 = 35025.0
LAMBDA_CASE2 = 2000.0


@dataclass(frozen=True)
class BaseStationProfile:
    """Four-stage sleep configuration; defaults pin the cited hardware values."""

    stage_lengths: tuple = STAGE_LENGTHS_5G
    stage_powers: tuple = STAGE_POWERS_5G
    p_active: float = P_ACTIVE_5G
    p_idle: float = P_IDLE_5G
    queue_cap: int = 50

    def __post_init__(self):
        if len(self.stage_lengths) != 4 or len(self.stage_powers) != 4:
            raise ValueError("base-station profile has exactly 4 sleep stages")

    def config(self, traffic: TrafficModel, p_active: float | None = None):
        return validate_config(
            traffic,
            PolicyConfig(kind=PolicyKind.BMV, stage_lengths=self.stage_lengths,
                         queue_cap=self.queue_cap),
            PowerProfile(p_active=self.p_active if p_active is None else p_active,
                         stage_powers=self.stage_powers, p_idle=self.p_idle),
        )


@dataclass(frozen=True)
class DfsModel:
    """Dynamic frequency scaling: service power beta per unit service rate."""

    beta: float

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")


def beta_from_operating_point(p_active: float, mu: float) -> DfsModel:
    """Calibrate beta so dfs_power(model, mu) reproduces the operating point."""
    if p_active <= 0 or mu <= 0:
        raise ValueError("p_active and mu must be > 0")
    return DfsModel(beta=p_active / mu)


def dfs_power(model: DfsModel, mu: float) -> float:
    """Service power at rate mu under fixed-voltage frequency scaling."""
    if mu <= 0:
        raise ValueError(f"mu must be > 0, got {mu}")
    return model.beta * mu


@dataclass(frozen=True)
class SweepRow:
    lam: float
    mu: float
    rho: float
    p_active: float
    ne: float
    w: float
    power_avg: float = field(init=False)       # watts
    energy_per_packet: float = field(init=False)  # joules per served packet

    def __post_init__(self):
        object.__setattr__(self, "power_avg", self.ne * self.p_active)
        object.__setattr__(self, "energy_per_packet", self.ne * self.p_active / self.lam)


def _evaluate(profile: BaseStationProfile, lam: float, mu: float,
              p_active: float | None, epsilon: float) -> SweepRow:
    traffic = TrafficModel(lam=lam, mu=mu)
    config = profile.config(traffic, p_active=p_active)
    engine = MarkovEngine(traffic, profile.queue_cap, epsilon=epsilon)
    ne = expected_normalized_energy(config, engine, epsilon).ne
    w = expected_waiting_time(config, engine, epsilon).w
    return SweepRow(lam=lam, mu=mu, rho=lam / mu,
                    p_active=config.power.p_active, ne=ne, w=w)


def default_case1_lambdas(mu: float = MU_CASE1, points: int = 10):
    """Input rates spanning traffic intensity (0, 0.4]."""
    return [mu * 0.4 * (i + 1) / points for i in range(points)]


def case1_sweep(lambda_grid=None, mu: float = MU_CASE1,
                profile: BaseStationProfile | None = None,
                epsilon: float = DEFAULT_EPSILON):
    """Analytic (NE, W) per input rate at a fixed service rate."""
    profile = profile or BaseStationProfile()
    grid = list(lambda_grid) if lambda_grid is not None else default_case1_lambdas(mu)
    if not grid:
        raise ValueError("lambda grid must be non-empty")
    return [_evaluate(profile, lam, mu, None, epsilon) for lam in sorted(grid)]


def default_case2_rhos(points: int = 10):
    """Traffic loads spanning 0.005 -> 0.4."""
    lo, hi = 0.005, 0.4
    return [lo + (hi - lo) * i / (points - 1) for i in range(points)]


def case2_sweep(rho_grid=None, lambda_fixed: float = LAMBDA_CASE2,
                model: DfsModel | None = None,
                profile: BaseStationProfile | None = None,
                epsilon: float = DEFAULT_EPSILON):
    """Analytic sweep of traffic load at a fixed input rate under DFS.

    Each row recomputes the service rate mu = lambda/rho and the active power
    beta*mu.  Alongside the normalised ratio the rows carry the average power
    and the absolute joules per served packet, since normalising by a
    mu-dependent active power makes the ratio alone ambiguous.
    """
    profile = profile or BaseStationProfile()
    model = model or beta_from_operating_point(P_ACTIVE_5G, MU_CASE1)
    grid = list(rho_grid) if rho_grid is not None else default_case2_rhos()
    if not grid:
        raise ValueError("rho grid must be non-empty")
    rows = []
    for rho in sorted(grid):
        mu = lambda_fixed / rho
        rows.append(_evaluate(profile, lambda_fixed, mu, dfs_power(model, mu),
                              epsilon))
    return rows


def write_sweep_csv(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["lambda", "mu", "rho", "p_active", "ne", "w",
                    "power_avg", "energy_per_packet"])
        for r in rows:
            w.writerow([r.lam, r.mu, r.rho, r.p_active, r.ne, r.w,
                        r.power_avg, r.energy_per_packet])


def sweep_to_json_dict(rows) -> dict:
    """JSON variant of a sweep table (same columns, per-row objects)."""
    return {
        "rows": [
            {"lambda": r.lam, "mu": r.mu, "rho": r.rho, "p_active": r.p_active,
             "ne": r.ne, "w": r.w, "power_avg": r.power_avg,
             "energy_per_packet": r.energy_per_packet}
            for r in rows
        ]
    }
