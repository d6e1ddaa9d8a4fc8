"""Closed-form mean sojourn time for the bounded multi-vacation policy.

The long-run mean decomposes over two cycle events: with probability
P(A) = exp(-lam * S_Nv) no packet arrives during any vacation and the cycle
behaves like a plain M/M/1/K system (closed form below); otherwise the
cycle consists of a sleep phase, whose accumulated waiting A_s follows the
spaced-arrivals algorithm below, and a busy phase whose accumulated in-system
time A_b is summed over departure epochs of the absorption recursion.  The
per-cycle ratio

    w_b = (A_s + A_b) / expected departures per cycle

is the event-B mean; the total is the mixture w = P(A)*w_a + P(B)*w_b.

The busy accumulation weights each epoch's conditional mean queue length by
the probability the cycle is still running, i.e. it sums the raw (survivor-
weighted) first moments of the recursion:

    A_b = sum_k  ql[k] * survivor[k] / mu.

This epoch sum is what reproduces the reference optimisation case study;
adding the within-service arrival-growth term would instead track the exact
busy-period area (kept as a test oracle) but shifts the feasibility boundary
off the reference optimum.  The model deliberately underestimates sleep-phase
waiting at long stages, matching the reference validation behaviour.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import PolicyKind, TrafficModel, ValidatedConfig
from .errors import InvalidPolicyError, LengthMismatchError, RhoUnityError
from .markov import (
    DEFAULT_EPSILON,
    MarkovEngine,
    QueueDist,
    ZeroHitDist,
    expected_busy_epochs,
)
from .energy import first_arrival_stage_probs, initial_queue_dist


@dataclass(frozen=True)
class DelayBreakdown:
    """Mean waiting time with the event decomposition's intermediates."""

    w: float
    p_event_a: float
    w_a: float
    w_b: float
    a_s: float
    a_b: float
    alpha_b: float

    def to_json_dict(self) -> dict:
        return {
            "w": self.w,
            "p_event_a": self.p_event_a,
            "w_a": self.w_a,
            "w_b": self.w_b,
            "a_s": self.a_s,
            "a_b": self.a_b,
            "alpha_b": self.alpha_b,
        }


def mm1k_sojourn(traffic: TrafficModel, cap: int) -> float:
    """Mean sojourn of the plain M/M/1/K queue.

    W = rho * (1 + K*rho^(K+1) - (K+1)*rho^K) / ((1-rho) * (1-rho^(K+1))) / lam.

    Evaluated through the algebraically identical truncated-geometric mean
    sum(n * rho^n) / sum(rho^n) / lam, which is free of the catastrophic
    cancellation the factored form suffers near rho = 1 (the K = 1 value at
    rho -> 1 is 1/(lam+mu), unobtainable from the factored form in doubles).
    Singular at rho = 1 exactly: typed error, never silently perturbed.
    """
    rho = traffic.rho
    if rho == 1.0:
        raise RhoUnityError("sojourn formula is singular at rho = 1")
    n = np.arange(cap + 1)
    powers = rho ** (n if rho <= 1.0 else n - cap)  # keep magnitudes bounded
    L = float(n @ powers) / float(powers.sum())
    return L / traffic.lam


def initial_conditional_queue_len(init: QueueDist) -> float:
    """Conditional mean queue length at wake-up, sum_{i>=1} i p_i / sum p_i."""
    return init.conditional_mean_above_zero()


def calc_as(lam: float, l_init: float) -> float:
    """Sleep-phase waiting accumulated by the wake-up batch.

    Models the l_init packets as arriving 1/lam apart before the stage
    boundary: the j-th-from-last contributes j/lam, fractional residue
    prorated.  Faithful to the reference stepwise procedure, including the
    l_init < 1 early branch.
    """
    if l_init < 0:
        raise ValueError(f"l_init must be >= 0, got {l_init}")
    if l_init < 1:
        return l_init / lam
    a_s = 0.0
    i = 0
    res = l_init
    while i <= l_init:
        a_s += i * (1.0 / lam) * (res if res < 1 else 1.0)
        i += 1
        res = l_init - i
    return a_s


def calc_ab(traffic: TrafficModel, z: ZeroHitDist, ql) -> float:
    """Busy-phase in-system time accumulated per cycle.

    ``ql`` holds the conditional mean queue lengths for epochs 0..n_stop
    (entry 0 is the wake-up conditional mean).  Each epoch contributes its
    mean times the probability the cycle is still alive, divided by the
    service rate:

        A_b = sum_k ql[k] * survivor[k] / mu.
    """
    ql = np.asarray(ql, dtype=float)
    if len(ql) != z.n_stop + 1:
        raise LengthMismatchError(
            f"{len(ql)} queue-length entries for {z.n_stop} epochs "
            f"(expected {z.n_stop + 1})")
    surv = z.survivor_mass()  # alive mass after k departures, k = 0..n_stop
    return float((ql * surv).sum()) / traffic.mu


def expected_waiting_time(config: ValidatedConfig,
                          engine: MarkovEngine | None = None,
                          epsilon: float = DEFAULT_EPSILON) -> DelayBreakdown:
    """Mixture mean sojourn for a BMV configuration.

    Heterogeneous stages aggregate A_s, A_b and the per-cycle departure count
    with weights P(i)/P(B) before the ratio is taken (cycle-mean over
    cycle-mean); uniform stages collapse to a single evaluation.
    """
    if config.policy.kind is not PolicyKind.BMV:
        raise InvalidPolicyError("analytic delay model applies to the BMV policy only")
    traffic = config.traffic
    lam = traffic.lam
    pol = config.policy
    cap = pol.queue_cap
    if engine is None:
        engine = MarkovEngine(traffic, cap, epsilon=epsilon)

    probs = first_arrival_stage_probs(lam, pol.stage_lengths)
    p_a = probs.p_no_arrival
    p_b = 1.0 - p_a
    w_a = mm1k_sojourn(traffic, cap)

    a_s = a_b = alpha_b = 0.0
    for i, ell in enumerate(pol.stage_lengths):
        weight = float(probs.p_first_arrival[i]) / p_b
        init = initial_queue_dist(lam, ell, cap, condition_nonempty=True)
        z, ql = engine.absorption(init, key=("stage", ell))
        a_s += weight * calc_as(lam, ql[0])
        a_b += weight * calc_ab(traffic, z, ql)
        alpha_b += weight * expected_busy_epochs(z)
    w_b = (a_s + a_b) / alpha_b
    w = p_a * w_a + p_b * w_b
    return DelayBreakdown(w=w, p_event_a=p_a, w_a=w_a, w_b=w_b,
                          a_s=a_s, a_b=a_b, alpha_b=alpha_b)
