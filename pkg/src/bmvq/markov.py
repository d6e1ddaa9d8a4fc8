"""Departure-epoch embedded Markov chain of the M/M/1/K queue.

States are queue lengths 0..K just after a departure.  For 1 <= i <= K and
i-1 <= j < K the one-step probability has the closed form

    p[i, j] = (mu / (lam + mu)) * (lam / (lam + mu)) ** (j - i + 1),

the geometric law of the number of arrivals during one exponential service
(the defining integral evaluates to exactly this; numerical quadrature of the
integrand is kept as a test oracle only).  Column K absorbs the remaining tail
mass so each row sums to one.  Row 0 duplicates row 1: it is provably unused
by the absorption recursion, which masks state-0 mass before every multiply,
and is defined only so the matrix is a total function.

The zero-hit recursion iterates

    [p_zero(k), surviving(k)] = [0, surviving(k-1)] @ P

recording the state-0 mass absorbed at each departure epoch k.  The surviving
mass decreases strictly (each epoch leaks the absorbed mass), so the loop
terminates for any epsilon > 0; a configurable epoch cap converts pathological
configurations into a typed error instead of a hang.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TrafficModel
from .errors import (
    NoMassAboveZeroError,
    NonConvergenceError,
    ResidualTooLargeError,
    SurvivorMassUnderflowError,
)

DEFAULT_EPSILON = 1e-9
DEFAULT_EPOCH_CAP = 10_000_000


@dataclass(frozen=True)
class QueueDist:
    """Probability vector over queue lengths 0..K."""

    probs: np.ndarray
    substochastic: bool = False

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if (p < -1e-15).any():
            raise ValueError("queue distribution has negative entries")
        if not self.substochastic and abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"queue distribution sums to {p.sum()!r}, not 1")

    @property
    def cap(self) -> int:
        return len(self.probs) - 1

    def mean(self) -> float:
        return float(np.arange(len(self.probs)) @ self.probs)

    def conditional_mean_above_zero(self) -> float:
        """Mean queue length conditioned on being nonempty."""
        mass = float(self.probs[1:].sum())
        if mass <= 0.0:
            raise NoMassAboveZeroError("no probability mass above queue length 0")
        idx = np.arange(1, len(self.probs))
        return float(idx @ self.probs[1:]) / mass


def delta_dist(k: int, cap: int) -> QueueDist:
    p = np.zeros(cap + 1)
    p[k] = 1.0
    return QueueDist(p)


@dataclass(frozen=True)
class TransitionMatrix:
    """Departure-epoch transition probabilities, states 0..K."""

    entries: np.ndarray

    @property
    def cap(self) -> int:
        return self.entries.shape[0] - 1

    def write_csv(self, path) -> None:
        """Debug dump: one row per pre-departure state, full precision."""
        header = ",".join(f"to_{j}" for j in range(self.cap + 1))
        np.savetxt(path, self.entries, delimiter=",", header=header, comments="")


@dataclass(frozen=True)
class ZeroHitDist:
    """First-emptying probabilities per departure epoch (truncation record).

    ``p_zero[k-1]`` is the probability the queue first hits 0 at epoch k;
    ``residuals[k-1]`` is the mass still unabsorbed after epoch k.  The final
    residual is at most the requested epsilon.  ``init_mass`` records the
    above-zero mass of the starting vector (1 for a conditioned start).
    """

    p_zero: np.ndarray
    residuals: np.ndarray
    residual: float
    n_stop: int
    init_mass: float

    def survivor_mass(self) -> np.ndarray:
        """Mass alive after k departures for k = 0..n_stop."""
        return np.concatenate(([self.init_mass], self.residuals))


def build_transition_matrix(traffic: TrafficModel, cap: int) -> TransitionMatrix:
    """Closed-form transition matrix for the given traffic and capacity."""
    lam, mu = traffic.lam, traffic.mu
    k1 = cap + 1
    P = np.zeros((k1, k1))
    a = mu / (lam + mu)
    b = lam / (lam + mu)
    # powers of b up to the longest row (row 1 spans j = 0..K-1 -> b^0..b^(K-1))
    pw = a * np.power(b, np.arange(cap))
    for i in range(1, k1):
        width = cap - (i - 1)  # entries j = i-1 .. K-1
        P[i, i - 1:cap] = pw[:width]
        P[i, cap] = 1.0 - P[i, :cap].sum()
    P[0] = P[1]
    return TransitionMatrix(entries=P)


def _absorption_trace(init: QueueDist, P: TransitionMatrix, epsilon: float,
                      epoch_cap: int, collect_moments: bool):
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    v = init.probs.astype(float).copy()
    v[0] = 0.0
    init_mass = float(v.sum())
    idx = np.arange(len(v))
    M = P.entries
    p_zero, residuals, moments = [], [], []
    res = init_mass
    while res > epsilon:
        if len(p_zero) >= epoch_cap:
            raise NonConvergenceError(
                f"residual {res:.3e} still above epsilon {epsilon:.3e} "
                f"after {epoch_cap} epochs")
        v = v @ M
        p_zero.append(float(v[0]))
        v[0] = 0.0
        res = float(v.sum())
        residuals.append(res)
        if collect_moments:
            moments.append(float(idx @ v))
    z = ZeroHitDist(
        p_zero=np.asarray(p_zero),
        residuals=np.asarray(residuals),
        residual=res,
        n_stop=len(p_zero),
        init_mass=init_mass,
    )
    return z, (np.asarray(moments) if collect_moments else None)


def zero_hit_distribution(init: QueueDist, P: TransitionMatrix,
                          epsilon: float = DEFAULT_EPSILON,
                          epoch_cap: int = DEFAULT_EPOCH_CAP) -> ZeroHitDist:
    """Run the masking/transition recursion until the residual is <= epsilon."""
    z, _ = _absorption_trace(init, P, epsilon, epoch_cap, collect_moments=False)
    return z


def expected_busy_epochs(z: ZeroHitDist, residual_cap: float = 1e-6) -> float:
    """Expected number of departures before the queue first empties.

    Multiply by 1/mu to convert to expected busy time.
    """
    if z.residual > residual_cap:
        raise ResidualTooLargeError(
            f"residual {z.residual:.3e} exceeds {residual_cap:.1e}; "
            "tighten epsilon before taking expectations")
    return float(np.arange(1, z.n_stop + 1) @ z.p_zero)


def conditional_queue_lengths(init: QueueDist, P: TransitionMatrix,
                              epsilon: float = DEFAULT_EPSILON,
                              epoch_cap: int = DEFAULT_EPOCH_CAP) -> np.ndarray:
    """Mean queue length at each departure epoch, conditioned on survival.

    Entry k (k = 1..n_stop) is sum_i i*surviving_k(i) / sum_i surviving_k(i);
    entry 0 is the conditional mean of the initial distribution itself.
    """
    z, moments = _absorption_trace(init, P, epsilon, epoch_cap, collect_moments=True)
    out = np.empty(z.n_stop + 1)
    out[0] = init.conditional_mean_above_zero()
    surv = z.residuals
    absorbed_something = np.cumsum(z.p_zero) > 0
    for k in range(z.n_stop):
        if surv[k] > 0.0:
            out[k + 1] = moments[k] / surv[k]
        elif absorbed_something[k]:
            out[k + 1] = 0.0  # fully absorbed: no survivors, mean carries no weight
        else:
            raise SurvivorMassUnderflowError(
                f"surviving mass underflowed to zero at epoch {k + 1} "
                "before any absorption")
    return out


class MarkovEngine:
    """Caches the transition matrix and absorption traces for one (traffic, K).

    The analytic layers evaluate many stages and cells against the same
    chain; this keeps each distinct starting distribution to a single
    recursion run.  Pure functions above remain the primary API.
    """

    def __init__(self, traffic: TrafficModel, cap: int,
                 epsilon: float = DEFAULT_EPSILON, epoch_cap: int = DEFAULT_EPOCH_CAP):
        self.traffic = traffic
        self.cap = cap
        self.epsilon = epsilon
        self.epoch_cap = epoch_cap
        self.matrix = build_transition_matrix(traffic, cap)
        self._traces = {}

    def absorption(self, init: QueueDist, key=None):
        """(ZeroHitDist, conditional queue lengths) for a starting vector.

        ``key`` enables caching; pass a hashable identity such as a stage
        length.  Uncached calls recompute.
        """
        if key is not None and key in self._traces:
            return self._traces[key]
        z, moments = _absorption_trace(init, self.matrix, self.epsilon,
                                       self.epoch_cap, collect_moments=True)
        ql = np.empty(z.n_stop + 1)
        ql[0] = init.conditional_mean_above_zero()
        surv = z.residuals
        with np.errstate(invalid="ignore", divide="ignore"):
            ratios = np.where(surv > 0, moments / np.where(surv > 0, surv, 1.0), 0.0)
        ql[1:] = ratios
        result = (z, ql)
        if key is not None:
            self._traces[key] = result
        return result

    def busy_epochs_from_one(self) -> float:
        z, _ = self.absorption(delta_dist(1, self.cap), key=("delta", 1))
        return expected_busy_epochs(z)
