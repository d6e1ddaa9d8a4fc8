"""Grid search for the minimum-energy vacation configuration under a delay bound.

Every (L_v, N_v) pair in the candidate pools is evaluated for normalised
energy and mean waiting time; the result is the feasible cell (strictly
W < d_const) with the smallest energy.  Ties break towards the
smaller vacation length, then the smaller vacation count, making the search
invariant to pool ordering.  Per-cell evaluator failures mark the cell and
the search continues.

The analytic evaluator drives the closed-form models; the simulation
evaluator replays the same search against replicated discrete-event runs
(the brute-force ground-truth counterpart of the analytic search).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .config import (
    PolicyConfig,
    PolicyKind,
    PowerProfile,
    TrafficModel,
    validate_config,
)
from .delay import expected_waiting_time
from .energy import expected_normalized_energy
from .markov import DEFAULT_EPSILON, MarkovEngine
from .simulator import replicate


@dataclass(frozen=True)
class SearchPool:
    """Candidate vacation lengths and counts, plus the waiting-time bound."""

    lv_pool: tuple
    nv_pool: tuple
    d_const: float

    def __post_init__(self):
        if not self.lv_pool or not self.nv_pool:
            raise ValueError("pools must be non-empty")
        if any(x <= 0 for x in self.lv_pool) or any(n <= 0 for n in self.nv_pool):
            raise ValueError("pool entries must be positive")
        if self.d_const <= 0:
            raise ValueError("d_const must be positive")

    def cells(self):
        """Cartesian product in canonical (sorted) order."""
        for lv in sorted(self.lv_pool):
            for nv in sorted(self.nv_pool):
                yield lv, nv


@dataclass(frozen=True)
class CellEval:
    lv: float
    nv: int
    ne: float
    w: float
    feasible: bool
    source: str
    error: str | None = None


@dataclass(frozen=True)
class OptResult:
    """Best feasible cell (or None) plus the full evaluation table."""

    best: tuple | None
    best_ne: float
    evaluations: tuple

    def to_json_dict(self) -> dict:
        return {
            "best": list(self.best) if self.best else None,
            "best_ne": self.best_ne if self.best else None,
            "evaluations": [
                {"lv": c.lv, "nv": c.nv, "ne": c.ne, "w": c.w,
                 "feasible": c.feasible, "source": c.source, "error": c.error}
                for c in self.evaluations
            ],
        }

    def cell(self, lv: float, nv: int) -> CellEval:
        for c in self.evaluations:
            if c.lv == lv and c.nv == nv:
                return c
        raise KeyError((lv, nv))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["lv", "nv", "ne", "w", "feasible", "source"])
            for c in self.evaluations:
                w.writerow([c.lv, c.nv, c.ne, c.w, int(c.feasible), c.source])


def opt_search(pool: SearchPool, evaluate, source: str = "analytic") -> OptResult:
    """Exhaustive search over the pool; ``evaluate(lv, nv, cell_index) -> (ne, w)``."""
    rows = []
    best = None
    best_key = None
    for idx, (lv, nv) in enumerate(pool.cells()):
        try:
            ne, w = evaluate(lv, nv, idx)
        except Exception as exc:  # keep scanning; cell recorded as failed
            rows.append(CellEval(lv=lv, nv=nv, ne=math.nan, w=math.nan,
                                 feasible=False, source=source, error=str(exc)))
            continue
        ne, w = float(ne), float(w)
        feasible = w < pool.d_const
        rows.append(CellEval(lv=lv, nv=nv, ne=ne, w=w, feasible=feasible,
                             source=source))
        if feasible:
            key = (ne, lv, nv)
            if best_key is None or key < best_key:
                best_key = key
                best = (lv, nv)
    return OptResult(best=best, best_ne=best_key[0] if best else math.nan,
                     evaluations=tuple(rows))


def analytic_evaluator(traffic: TrafficModel, power: PowerProfile,
                       queue_cap: int = 50, epsilon: float = DEFAULT_EPSILON):
    """Closed-form (NE, W) evaluator sharing one Markov engine across cells."""
    engine = MarkovEngine(traffic, queue_cap, epsilon=epsilon)

    def evaluate(lv: float, nv: int, _idx: int):
        stage_powers = power.stage_powers
        if len(stage_powers) != nv:
            stage_powers = (stage_powers[0] if stage_powers else power.p_active,) * nv
        config = validate_config(
            traffic,
            PolicyConfig(kind=PolicyKind.BMV, stage_lengths=(lv,) * nv,
                         queue_cap=queue_cap),
            PowerProfile(p_active=power.p_active, stage_powers=stage_powers,
                         p_idle=power.p_idle),
        )
        ne = expected_normalized_energy(config, engine, epsilon).ne
        w = expected_waiting_time(config, engine, epsilon).w
        return ne, w

    return evaluate


def sim_evaluator(traffic: TrafficModel, power: PowerProfile, base_seed: int,
                  reps: int, horizon: float | None = None, queue_cap: int = 50,
                  workers: int = 1):
    """Replicated-simulation (NE, W) evaluator.

    Each cell gets its own disjoint block of stream indices derived from its
    canonical position, so the table is independent of evaluation order.
    """

    def evaluate(lv: float, nv: int, idx: int):
        stage_powers = power.stage_powers
        if len(stage_powers) != nv:
            stage_powers = (stage_powers[0] if stage_powers else power.p_active,) * nv
        config = validate_config(
            traffic,
            PolicyConfig(kind=PolicyKind.BMV, stage_lengths=(lv,) * nv,
                         queue_cap=queue_cap),
            PowerProfile(p_active=power.p_active, stage_powers=stage_powers,
                         p_idle=power.p_idle),
        )
        h = horizon if horizon is not None else 1e6 / traffic.lam
        metrics = replicate(config, h, base_seed + idx * 100_000, reps,
                            workers=workers)
        return metrics.ne, metrics.w_mean

    return evaluate


def brute_force_sim(traffic: TrafficModel, pool: SearchPool, power: PowerProfile,
                    base_seed: int, reps: int, horizon: float | None = None,
                    queue_cap: int = 50, workers: int = 1) -> OptResult:
    """The identical search, scored by the discrete-event simulator."""
    return opt_search(
        pool,
        sim_evaluator(traffic, power, base_seed, reps, horizon=horizon,
                      queue_cap=queue_cap, workers=workers),
        source="sim",
    )


# reference case-study pools
CASE_STUDY_LV_POOL = (0.2, 0.5, 0.8, 1.1, 1.6, 2.1, 3.0, 4.0, 6.0)
CASE_STUDY_NV_POOL = (1, 2, 3, 4, 5, 6)
