"""Bounded multi-vacation M/M/1/K queueing lab.

Analytic energy/delay models for multi-stage sleep control, a discrete-event
simulator as ground truth, a delay-constrained energy optimiser, and the
four-stage base-station evaluation layer.
"""
from .config import (
    PolicyConfig,
    PolicyKind,
    PowerProfile,
    TrafficModel,
    ValidatedConfig,
    load_config_file,
    parse_config_text,
    serialize_config,
    validate_config,
)
from .delay import DelayBreakdown, calc_ab, calc_as, expected_waiting_time, mm1k_sojourn
from .energy import (
    EnergyBreakdown,
    StageProbabilities,
    expected_idle_length,
    expected_normalized_energy,
    first_arrival_stage_probs,
    initial_queue_dist,
)
from .errors import (
    BmvqError,
    ConfigError,
    HorizonTooShortWarning,
    InvalidPolicyError,
    LengthMismatchError,
    NoMassAboveZeroError,
    NonConvergenceError,
    ResidualTooLargeError,
    RhoUnityError,
    SurvivorMassUnderflowError,
)
from .markov import (
    MarkovEngine,
    QueueDist,
    TransitionMatrix,
    ZeroHitDist,
    build_transition_matrix,
    conditional_queue_lengths,
    delta_dist,
    expected_busy_epochs,
    zero_hit_distribution,
)
from .optimizer import OptResult, SearchPool, brute_force_sim, opt_search
from .simulator import SimMetrics, default_horizon, replicate, simulate
from .streams import RandomStream, exp_sample

__version__ = "0.1.0"

__all__ = [
    "BmvqError",
    "ConfigError",
    "DelayBreakdown",
    "EnergyBreakdown",
    "HorizonTooShortWarning",
    "InvalidPolicyError",
    "LengthMismatchError",
    "MarkovEngine",
    "NoMassAboveZeroError",
    "NonConvergenceError",
    "OptResult",
    "PolicyConfig",
    "PolicyKind",
    "PowerProfile",
    "QueueDist",
    "RandomStream",
    "ResidualTooLargeError",
    "RhoUnityError",
    "SearchPool",
    "SimMetrics",
    "StageProbabilities",
    "SurvivorMassUnderflowError",
    "TrafficModel",
    "TransitionMatrix",
    "ValidatedConfig",
    "ZeroHitDist",
    "brute_force_sim",
    "build_transition_matrix",
    "calc_ab",
    "calc_as",
    "conditional_queue_lengths",
    "default_horizon",
    "delta_dist",
    "expected_busy_epochs",
    "expected_idle_length",
    "expected_normalized_energy",
    "expected_waiting_time",
    "exp_sample",
    "first_arrival_stage_probs",
    "initial_queue_dist",
    "load_config_file",
    "mm1k_sojourn",
    "opt_search",
    "parse_config_text",
    "replicate",
    "serialize_config",
    "simulate",
    "validate_config",
    "zero_hit_distribution",
]
