"""Discrete-event simulator of the M/M/1/K queue under sleep-control policies.

Ground truth for the analytic models.  The server follows the multi-stage
vacation state machine: on emptying the queue it sleeps through stages
1..N_v, checking the queue only at stage boundaries; a nonempty check resumes
service, an empty final check parks the server awake-idle until the next
arrival.  The N-policy instead powers off until the queue reaches its
threshold, and the no-policy server is a plain M/M/1/K.  A single-stage BMV
configuration is the T-policy by construction.

Arrivals finding the system at capacity K are dropped (standard loss
semantics) and excluded from the sojourn mean.  Simultaneous events break in
favour of the arrival so a boundary check sees it; this is measure-zero but
fixed for determinism.

Energy integrates the per-state power over occupancy; the normalised energy
per bit is total energy over what an always-active server would consume.
The event loop is compiled with numba when available (pure-Python fallback is
semantically identical); randomness reaches the kernel as pre-drawn uniform
blocks from the arrival/service substreams, so results are byte-identical
for a given (seed, stream_index) regardless of buffering or thread count.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats as _scistats

from .config import PolicyKind, ValidatedConfig
from .errors import HorizonTooShortWarning, InvalidPolicyError
from .streams import RandomStream

try:
    from numba import njit as _njit

    def _jit(fn):
        return _njit(cache=True, nogil=True)(fn)
except ImportError:  # pragma: no cover - numba is a declared dependency
    def _jit(fn):
        return fn

# kernel exit codes
_DONE, _NEED_ARRIVALS, _NEED_SERVICES, _TRACE_FULL = 0, 1, 2, 3

# integer state slots
_I_STATE, _I_STAGE, _I_QHEAD, _I_QLEN, _I_NSYS, _I_SERVED, _I_DROPPED, \
    _I_ARRIVALS, _I_APOS, _I_SPOS, _I_INSRV, _I_TRLEN = range(12)
# float state slots
_F_T, _F_NEXT_ARR, _F_SVC_END, _F_STAGE_END, _F_SRV_ARRT, _F_ENERGY, \
    _F_SJSUM, _F_AREA = range(8)


def _kernel_impl(ist, fst, state_time, ring, ua, us, lam, mu, horizon, warmup,
                 policy, nv, sl, powers, cap, n_threshold,
                 trace_on, tr_t, tr_code, tr_state, tr_qlen):
    idle_code = nv
    busy_code = nv + 1
    state = ist[_I_STATE]
    stage = ist[_I_STAGE]
    qhead = ist[_I_QHEAD]
    qlen = ist[_I_QLEN]
    nsys = ist[_I_NSYS]
    rsize = ring.shape[0]
    t = fst[_F_T]
    next_arr = fst[_F_NEXT_ARR]
    svc_end = fst[_F_SVC_END]
    stage_end = fst[_F_STAGE_END]
    status = _DONE
    while True:
        if ist[_I_APOS] >= ua.shape[0]:
            status = _NEED_ARRIVALS
            break
        if ist[_I_SPOS] >= us.shape[0]:
            status = _NEED_SERVICES
            break
        t_next = horizon
        if next_arr < t_next:
            t_next = next_arr
        if svc_end < t_next:
            t_next = svc_end
        if stage_end < t_next:
            t_next = stage_end
        # integrate occupancy over [t, t_next), clipped to [warmup, horizon)
        lo = t if t > warmup else warmup
        hi = t_next if t_next < horizon else horizon
        if hi > lo:
            if state == busy_code:
                p = powers[busy_code]
            else:
                p = powers[state]
            fst[_F_ENERGY] += p * (hi - lo)
            state_time[state] += hi - lo
            fst[_F_AREA] += nsys * (hi - lo)
        t = t_next
        if t >= horizon:
            break
        if next_arr <= svc_end and next_arr <= stage_end:
            # arrival (wins ties)
            if t >= warmup:
                ist[_I_ARRIVALS] += 1
            if state == busy_code:
                if nsys >= cap:
                    if t >= warmup:
                        ist[_I_DROPPED] += 1
                    if trace_on == 1:
                        code = 3
                    else:
                        code = -1
                else:
                    ring[(qhead + qlen) % rsize] = t
                    qlen += 1
                    nsys += 1
                    code = 0
            elif state == idle_code:
                fst[_F_SRV_ARRT] = t
                ist[_I_INSRV] = 1
                svc_end = t - math.log(us[ist[_I_SPOS]]) / mu
                ist[_I_SPOS] += 1
                state = busy_code
                nsys = 1
                code = 0
            else:
                # sleeping / off
                if nsys >= cap:
                    if t >= warmup:
                        ist[_I_DROPPED] += 1
                    code = 3
                else:
                    ring[(qhead + qlen) % rsize] = t
                    qlen += 1
                    nsys += 1
                    code = 0
                if policy == 1 and nsys >= n_threshold and qlen > 0:
                    fst[_F_SRV_ARRT] = ring[qhead]
                    qhead = (qhead + 1) % rsize
                    qlen -= 1
                    ist[_I_INSRV] = 1
                    svc_end = t - math.log(us[ist[_I_SPOS]]) / mu
                    ist[_I_SPOS] += 1
                    state = busy_code
                    stage_end = math.inf
            next_arr = t - math.log(ua[ist[_I_APOS]]) / lam
            ist[_I_APOS] += 1
            if trace_on == 1 and code >= 0:
                if ist[_I_TRLEN] >= tr_t.shape[0]:
                    status = _TRACE_FULL
                    break
                tr_t[ist[_I_TRLEN]] = t
                tr_code[ist[_I_TRLEN]] = code
                tr_state[ist[_I_TRLEN]] = state
                tr_qlen[ist[_I_TRLEN]] = nsys
                ist[_I_TRLEN] += 1
        elif svc_end <= stage_end:
            # departure
            if fst[_F_SRV_ARRT] >= warmup:
                ist[_I_SERVED] += 1
                fst[_F_SJSUM] += t - fst[_F_SRV_ARRT]
            nsys -= 1
            ist[_I_INSRV] = 0
            if qlen > 0:
                fst[_F_SRV_ARRT] = ring[qhead]
                qhead = (qhead + 1) % rsize
                qlen -= 1
                ist[_I_INSRV] = 1
                svc_end = t - math.log(us[ist[_I_SPOS]]) / mu
                ist[_I_SPOS] += 1
            else:
                svc_end = math.inf
                if policy == 0:
                    state = 0
                    stage = 0
                    stage_end = t + sl[0]
                elif policy == 1:
                    state = 0
                    stage_end = math.inf
                else:
                    state = idle_code
                    stage_end = math.inf
            if trace_on == 1:
                if ist[_I_TRLEN] >= tr_t.shape[0]:
                    status = _TRACE_FULL
                    break
                tr_t[ist[_I_TRLEN]] = t
                tr_code[ist[_I_TRLEN]] = 1
                tr_state[ist[_I_TRLEN]] = state
                tr_qlen[ist[_I_TRLEN]] = nsys
                ist[_I_TRLEN] += 1
        else:
            # vacation stage boundary (BMV only)
            if qlen > 0:
                fst[_F_SRV_ARRT] = ring[qhead]
                qhead = (qhead + 1) % rsize
                qlen -= 1
                ist[_I_INSRV] = 1
                svc_end = t - math.log(us[ist[_I_SPOS]]) / mu
                ist[_I_SPOS] += 1
                state = busy_code
                stage_end = math.inf
            elif stage + 1 < nv:
                stage += 1
                state = stage
                stage_end = t + sl[stage]
            else:
                state = idle_code
                stage_end = math.inf
            if trace_on == 1:
                if ist[_I_TRLEN] >= tr_t.shape[0]:
                    status = _TRACE_FULL
                    break
                tr_t[ist[_I_TRLEN]] = t
                tr_code[ist[_I_TRLEN]] = 2
                tr_state[ist[_I_TRLEN]] = state
                tr_qlen[ist[_I_TRLEN]] = nsys
                ist[_I_TRLEN] += 1
    ist[_I_STATE] = state
    ist[_I_STAGE] = stage
    ist[_I_QHEAD] = qhead
    ist[_I_QLEN] = qlen
    ist[_I_NSYS] = nsys
    fst[_F_T] = t
    fst[_F_NEXT_ARR] = next_arr
    fst[_F_SVC_END] = svc_end
    fst[_F_STAGE_END] = stage_end
    return status


_kernel = _jit(_kernel_impl)


@dataclass(frozen=True)
class SimMetrics:
    """Simulation outputs: energy ratio, sojourn stats and diagnostics."""

    ne: float
    w_mean: float
    w_ci_halfwidth: float
    served: int
    dropped: int
    arrivals: int
    in_flight: int
    per_state_time: dict
    energy: float
    horizon: float
    time_avg_queue: float
    reps: int = 1

    def to_json_dict(self) -> dict:
        return {
            "ne": self.ne,
            "w_mean": self.w_mean,
            "w_ci_halfwidth": self.w_ci_halfwidth,
            "served": self.served,
            "dropped": self.dropped,
            "arrivals": self.arrivals,
            "in_flight": self.in_flight,
            "per_state_time": self.per_state_time,
            "energy": self.energy,
            "horizon": self.horizon,
            "time_avg_queue": self.time_avg_queue,
            "reps": self.reps,
        }


def default_horizon(lam: float) -> float:
    """Default horizon of 10^6 expected arrivals."""
    return 1e6 / lam


def _policy_tables(config: ValidatedConfig):
    pol, pw = config.policy, config.power
    if pol.kind is PolicyKind.BMV:
        code, nv = 0, pol.n_stages
        sl = np.asarray(pol.stage_lengths, dtype=float)
        sleep_powers = list(pw.stage_powers)
    elif pol.kind is PolicyKind.NPOLICY:
        code, nv = 1, 1
        sl = np.array([math.inf])
        sleep_powers = list(pw.stage_powers)
    elif pol.kind is PolicyKind.NOPOLICY:
        code, nv = 2, 0
        sl = np.zeros(0)
        sleep_powers = []
    else:  # pragma: no cover
        raise InvalidPolicyError(f"unknown policy {pol.kind}")
    powers = np.array(sleep_powers + [pw.idle_power, pw.p_active], dtype=float)
    return code, nv, sl, powers


def simulate(config: ValidatedConfig, horizon: float, stream: RandomStream,
             warmup: float = 0.0, trace_path=None, trace_cap: int = 1_000_000,
             block: int = 1 << 16) -> SimMetrics:
    """Run one replication and return its metrics.

    ``stream`` fixes the randomness; arrival and service draws come from
    substreams tagged 0 and 1 of its (seed, stream_index) identity.
    ``trace_path`` writes a per-event CSV (timestamp, event, state, queue);
    intended for short debug runs and capped at ``trace_cap`` events.
    """
    lam, mu = config.traffic.lam, config.traffic.mu
    if lam * horizon < 1000:
        warnings.warn(
            f"horizon {horizon:g} covers only {lam * horizon:.0f} expected arrivals",
            HorizonTooShortWarning, stacklevel=2)
    policy, nv, sl, powers = _policy_tables(config)
    cap = config.policy.queue_cap

    arr_stream = stream.substream(0)
    svc_stream = stream.substream(1)
    ua = arr_stream.uniform_block(block)
    us = svc_stream.uniform_block(block)

    ist = np.zeros(12, dtype=np.int64)
    fst = np.zeros(8, dtype=np.float64)
    state_time = np.zeros(nv + 2)
    ring = np.zeros(cap + 2)
    trace_on = 1 if trace_path is not None else 0
    tr_n = trace_cap if trace_on else 1
    tr_t = np.zeros(tr_n)
    tr_code = np.zeros(tr_n, dtype=np.int64)
    tr_state = np.zeros(tr_n, dtype=np.int64)
    tr_qlen = np.zeros(tr_n, dtype=np.int64)

    # system starts empty: BMV enters its first sleep stage, the others idle/off
    if policy == 0:
        ist[_I_STATE] = 0
        fst[_F_STAGE_END] = sl[0]
    elif policy == 1:
        ist[_I_STATE] = 0
        fst[_F_STAGE_END] = math.inf
    else:
        ist[_I_STATE] = nv  # idle
        fst[_F_STAGE_END] = math.inf
    fst[_F_SVC_END] = math.inf
    fst[_F_NEXT_ARR] = -math.log(ua[0]) / lam
    ist[_I_APOS] = 1

    while True:
        status = _kernel(ist, fst, state_time, ring, ua, us, lam, mu,
                         float(horizon), float(warmup), policy, nv, sl, powers,
                         cap, config.policy.n_threshold,
                         trace_on, tr_t, tr_code, tr_state, tr_qlen)
        if status == _DONE:
            break
        if status == _NEED_ARRIVALS:
            ua = arr_stream.uniform_block(block)
            ist[_I_APOS] = 0
        elif status == _NEED_SERVICES:
            us = svc_stream.uniform_block(block)
            ist[_I_SPOS] = 0
        else:
            raise MemoryError(f"event trace exceeded {trace_cap} events; "
                              "raise trace_cap or shorten the horizon")

    if trace_path is not None:
        _write_trace(trace_path, tr_t, tr_code, tr_state, tr_qlen, int(ist[_I_TRLEN]),
                     nv)

    span = horizon - warmup
    served = int(ist[_I_SERVED])
    # in-flight packets with post-warmup arrival times
    in_flight = int(ist[_I_INSRV]) if fst[_F_SRV_ARRT] >= warmup else 0
    qhead, qlen = int(ist[_I_QHEAD]), int(ist[_I_QLEN])
    for j in range(qlen):
        if ring[(qhead + j) % (cap + 2)] >= warmup:
            in_flight += 1
    names = [f"sleep_stage_{i + 1}" for i in range(nv)] + ["idle", "busy"]
    if config.policy.kind is PolicyKind.NPOLICY:
        names[0] = "off"
    return SimMetrics(
        ne=float(fst[_F_ENERGY]) / (config.power.p_active * span),
        w_mean=float(fst[_F_SJSUM]) / served if served else math.nan,
        w_ci_halfwidth=0.0,
        served=served,
        dropped=int(ist[_I_DROPPED]),
        arrivals=int(ist[_I_ARRIVALS]),
        in_flight=in_flight,
        per_state_time={n: float(v) for n, v in zip(names, state_time)},
        energy=float(fst[_F_ENERGY]),
        horizon=span,
        time_avg_queue=float(fst[_F_AREA]) / span,
    )


def _write_trace(path, tr_t, tr_code, tr_state, tr_qlen, n, nv):
    import csv

    code_names = {0: "arrival", 1: "departure", 2: "stage_check", 3: "drop"}

    def state_name(s):
        if s < nv:
            return f"sleep_{s + 1}"
        return "idle" if s == nv else "busy"

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "event", "state", "queue_length"])
        for i in range(n):
            w.writerow([repr(float(tr_t[i])), code_names[int(tr_code[i])],
                        state_name(int(tr_state[i])), int(tr_qlen[i])])


def replicate(config: ValidatedConfig, horizon: float, base_seed: int,
              reps: int, warmup: float = 0.0, workers: int = 1) -> SimMetrics:
    """Aggregate ``reps`` independent replications (stream indices 0..reps-1).

    The result is identical regardless of ``workers``: per-replication
    outputs land in rep-indexed slots and are reduced in a fixed order.
    The 95% CI half-width for the sojourn mean is the t-interval across
    replication means.
    """
    if reps < 2:
        raise ValueError(f"reps must be >= 2, got {reps}")

    def one(idx: int) -> SimMetrics:
        return simulate(config, horizon, RandomStream(base_seed, idx), warmup=warmup)

    results: list = [None] * reps
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for idx, metrics in zip(range(reps), pool.map(one, range(reps))):
                results[idx] = metrics
    else:
        for idx in range(reps):
            results[idx] = one(idx)

    w_means = np.array([r.w_mean for r in results])
    tcrit = float(_scistats.t.ppf(0.975, reps - 1))
    per_state = {}
    for r in results:
        for k, v in r.per_state_time.items():
            per_state[k] = per_state.get(k, 0.0) + v
    return SimMetrics(
        ne=float(np.mean([r.ne for r in results])),
        w_mean=float(w_means.mean()),
        w_ci_halfwidth=tcrit * float(w_means.std(ddof=1)) / math.sqrt(reps),
        served=sum(r.served for r in results),
        dropped=sum(r.dropped for r in results),
        arrivals=sum(r.arrivals for r in results),
        in_flight=sum(r.in_flight for r in results),
        per_state_time=per_state,
        energy=float(np.sum([r.energy for r in results])),
        horizon=float(np.sum([r.horizon for r in results])),
        time_avg_queue=float(np.mean([r.time_avg_queue for r in results])),
        reps=reps,
    )
