"""JSON schemas for the machine-readable command outputs."""
from __future__ import annotations

_NUMBER = {"type": "number"}
_NULLABLE_NUMBER = {"type": ["number", "null"]}

ANALYZE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["config", "ne", "w", "energy", "delay"],
    "properties": {
        "config": {"type": "object"},
        "ne": _NUMBER,
        "w": _NUMBER,
        "energy": {
            "type": "object",
            "required": ["ne", "e_busy_len", "e_idle_len", "per_event"],
            "properties": {
                "ne": _NUMBER,
                "e_busy_len": _NUMBER,
                "e_idle_len": _NUMBER,
                "per_event": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["index", "energy_ratio", "weight"],
                    },
                },
            },
        },
        "delay": {
            "type": "object",
            "required": ["w", "p_event_a", "w_a", "w_b", "a_s", "a_b", "alpha_b"],
        },
    },
}

SIMULATE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["ne", "w_mean", "w_ci_halfwidth", "served", "dropped",
                 "arrivals", "in_flight", "per_state_time", "horizon", "reps"],
    "properties": {
        "ne": _NUMBER,
        "w_mean": _NUMBER,
        "w_ci_halfwidth": _NUMBER,
        "served": {"type": "integer"},
        "dropped": {"type": "integer"},
        "arrivals": {"type": "integer"},
        "in_flight": {"type": "integer"},
        "per_state_time": {"type": "object"},
        "horizon": _NUMBER,
        "reps": {"type": "integer"},
    },
}

OPTIMIZE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["best", "best_ne", "evaluations"],
    "properties": {
        "best": {"type": ["array", "null"]},
        "best_ne": _NULLABLE_NUMBER,
        "evaluations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["lv", "nv", "ne", "w", "feasible", "source"],
            },
        },
    },
}

VALIDATE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["ne_report", "w_report"],
    "properties": {
        "ne_report": {
            "type": "object",
            "required": ["metric", "mean_error", "std_error", "rows"],
        },
        "w_report": {
            "type": "object",
            "required": ["metric", "mean_error", "std_error", "rows"],
        },
    },
}
