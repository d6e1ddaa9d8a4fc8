"""Closed-form normalised energy per bit for the bounded multi-vacation policy.

A running cycle starts when the queue empties and the server begins stage 1.
Event i (i <= N_v): the first arrival lands in stage i, so the server sleeps
through stages 1..i and wakes to a Poisson(lam * l_i) queue conditioned on
being nonempty.  The no-arrival event adds a memoryless idle interval of mean
1/lam followed by a busy period seeded with a single packet.  Per-event energy
ratios are weighted by the event probabilities:

    NE = sum_i E_i * P(i) + E_idle * P(no arrival),

where, with uniform stage lengths and a single sleep power, each E_i reduces
to the two-power form 1 - r + r * p_sleep / p_active, r = L_s / (L_s + L_b).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .config import PolicyKind, ValidatedConfig
from .errors import InvalidPolicyError
from .markov import (
    DEFAULT_EPSILON,
    MarkovEngine,
    QueueDist,
    delta_dist,
    expected_busy_epochs,
)


@dataclass(frozen=True)
class StageProbabilities:
    """First-arrival-stage probabilities plus the no-arrival mass."""

    p_first_arrival: np.ndarray
    p_no_arrival: float

    def __post_init__(self):
        object.__setattr__(self, "p_first_arrival",
                           np.asarray(self.p_first_arrival, dtype=float))

    @property
    def total(self) -> float:
        return float(self.p_first_arrival.sum() + self.p_no_arrival)


@dataclass(frozen=True)
class EventEnergy:
    """One row of the energy decomposition."""

    index: int              # 1..N_v, or N_v + 1 for the no-arrival event
    energy_ratio: float     # per-cycle energy / always-active energy
    weight: float           # event probability
    sleep_time: float
    busy_time: float
    idle_time: float = 0.0


@dataclass(frozen=True)
class EnergyBreakdown:
    """Normalised energy per bit with its per-event audit trail."""

    ne: float
    per_event: tuple
    e_busy_len: float       # probability-weighted expected busy length
    e_idle_len: float       # expected idle interval of the no-arrival event

    def to_json_dict(self) -> dict:
        return {
            "ne": self.ne,
            "e_busy_len": self.e_busy_len,
            "e_idle_len": self.e_idle_len,
            "per_event": [
                {
                    "index": ev.index,
                    "energy_ratio": ev.energy_ratio,
                    "weight": ev.weight,
                    "sleep_time": ev.sleep_time,
                    "busy_time": ev.busy_time,
                    "idle_time": ev.idle_time,
                }
                for ev in self.per_event
            ],
        }


def first_arrival_stage_probs(lam: float, stage_lengths) -> StageProbabilities:
    """P(first arrival in stage i) = exp(-lam*S_{i-1}) - exp(-lam*S_i).

    S_i is the cumulative sleep time through stage i.  The terms telescope,
    so together with p_no_arrival = exp(-lam*S_Nv) they sum to one exactly.
    """
    ells = np.asarray(stage_lengths, dtype=float)
    if lam <= 0 or (ells <= 0).any():
        raise ValueError("lam and every stage length must be > 0")
    edges = np.concatenate(([0.0], np.cumsum(ells)))
    tail = np.exp(-lam * edges)
    return StageProbabilities(p_first_arrival=tail[:-1] - tail[1:],
                              p_no_arrival=float(tail[-1]))


def initial_queue_dist(lam: float, stage_len: float, cap: int,
                       condition_nonempty: bool = True) -> QueueDist:
    """Queue length at wake-up: Poisson(lam*stage_len) folded at the cap.

    All tail mass at or beyond K is folded into state K.  With
    ``condition_nonempty`` the zero entry is removed and the vector
    renormalised, matching the conditioning of a stage that triggered
    the wake-up.
    """
    if stage_len <= 0:
        raise ValueError(f"stage length must be > 0, got {stage_len}")
    mean = lam * stage_len
    p = stats.poisson.pmf(np.arange(cap + 1), mean)
    p[cap] = stats.poisson.sf(cap - 1, mean)  # fold tail mass >= K into K
    if condition_nonempty:
        p[0] = 0.0
        p /= p.sum()
    return QueueDist(p)


def expected_idle_length(lam: float) -> float:
    """Mean awake-empty interval after all vacations expire with no arrival.

    The conditional residual inter-arrival time beyond the sleep window is
    exactly 1/lam by memorylessness; the defining integral is kept as a test
    oracle.
    """
    if lam <= 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    return 1.0 / lam


def expected_normalized_energy(config: ValidatedConfig,
                               engine: MarkovEngine | None = None,
                               epsilon: float = DEFAULT_EPSILON) -> EnergyBreakdown:
    """Evaluate the cycle-event energy mixture for a BMV configuration."""
    if config.policy.kind is not PolicyKind.BMV:
        raise InvalidPolicyError("analytic energy model applies to the BMV policy only")
    lam, mu = config.traffic.lam, config.traffic.mu
    pol, pw = config.policy, config.power
    cap = pol.queue_cap
    if engine is None:
        engine = MarkovEngine(config.traffic, cap, epsilon=epsilon)

    probs = first_arrival_stage_probs(lam, pol.stage_lengths)
    cum_sleep = np.cumsum(pol.stage_lengths)
    cum_sleep_energy = np.cumsum(np.asarray(pol.stage_lengths) * np.asarray(pw.stage_powers))

    rows = []
    ne = 0.0
    weighted_busy = 0.0
    for i, ell in enumerate(pol.stage_lengths):
        init = initial_queue_dist(lam, ell, cap, condition_nonempty=True)
        z, _ = engine.absorption(init, key=("stage", ell))
        busy = expected_busy_epochs(z) / mu
        ratio = (busy * pw.p_active + cum_sleep_energy[i]) / \
                ((busy + cum_sleep[i]) * pw.p_active)
        w = float(probs.p_first_arrival[i])
        rows.append(EventEnergy(index=i + 1, energy_ratio=ratio, weight=w,
                                sleep_time=float(cum_sleep[i]), busy_time=busy))
        ne += ratio * w
        weighted_busy += busy * w

    # no-arrival event: full sleep window, idle interval, busy period from one packet
    z1, _ = engine.absorption(delta_dist(1, cap), key=("delta", 1))
    busy1 = expected_busy_epochs(z1) / mu
    ilen = expected_idle_length(lam)
    sleep_all = float(cum_sleep[-1])
    ratio_a = (busy1 * pw.p_active + ilen * pw.idle_power + cum_sleep_energy[-1]) / \
              ((busy1 + ilen + sleep_all) * pw.p_active)
    rows.append(EventEnergy(index=pol.n_stages + 1, energy_ratio=ratio_a,
                            weight=probs.p_no_arrival, sleep_time=sleep_all,
                            busy_time=busy1, idle_time=ilen))
    ne += ratio_a * probs.p_no_arrival
    weighted_busy += busy1 * probs.p_no_arrival

    return EnergyBreakdown(ne=ne, per_event=tuple(rows),
                           e_busy_len=weighted_busy, e_idle_len=ilen)
