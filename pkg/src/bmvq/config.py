"""Domain types and configuration validation.

The three parameter groups (traffic, sleep policy, power profile) are plain
frozen dataclasses.  ``validate_config`` checks every invariant at once and
returns an immutable :class:`ValidatedConfig` that the analytic, simulation
and optimisation layers consume.

Two external representations are supported:

* a flat ``key = value`` text format (see :func:`parse_config_text`), and
* a JSON dictionary (``ValidatedConfig.to_json_dict``).
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .errors import ConfigError

DEFAULT_QUEUE_CAP = 50


class PolicyKind(enum.Enum):
    BMV = "bmv"
    NPOLICY = "npolicy"
    NOPOLICY = "none"


@dataclass(frozen=True)
class TrafficModel:
    """Poisson arrivals at rate ``lam``, exponential service at rate ``mu``."""

    lam: float
    mu: float

    @property
    def rho(self) -> float:
        return self.lam / self.mu


@dataclass(frozen=True)
class PolicyConfig:
    """Sleep-control policy and its parameters.

    ``stage_lengths`` lists the vacation stage durations l_1..l_Nv (BMV only);
    a uniform-length policy is the special case of one repeated value.
    ``n_threshold`` is the N-policy wake threshold.  ``queue_cap`` is the
    system capacity K (queue plus server).
    """

    kind: PolicyKind
    stage_lengths: tuple = ()
    n_threshold: int = 1
    queue_cap: int = DEFAULT_QUEUE_CAP

    @property
    def n_stages(self) -> int:
        return len(self.stage_lengths)

    @property
    def total_sleep(self) -> float:
        return float(sum(self.stage_lengths))


@dataclass(frozen=True)
class PowerProfile:
    """Power draw per server state (watts, or any consistent unit).

    ``stage_powers`` pairs positionally with the policy's stage lengths; the
    N-policy uses a single entry (the off power).  ``p_idle`` defaults to
    ``p_active`` so that the two-power energy model holds unchanged; hardware
    profiles with a distinct idle draw override it.
    """

    p_active: float
    stage_powers: tuple = ()
    p_idle: float | None = None

    @property
    def idle_power(self) -> float:
        return self.p_active if self.p_idle is None else self.p_idle


@dataclass(frozen=True)
class ValidatedConfig:
    """A configuration whose invariants have all been checked."""

    traffic: TrafficModel
    policy: PolicyConfig
    power: PowerProfile
    rho: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "rho", self.traffic.lam / self.traffic.mu)

    def to_json_dict(self) -> dict:
        d = {
            "lambda": self.traffic.lam,
            "mu": self.traffic.mu,
            "rho": self.rho,
            "policy": self.policy.kind.value,
            "queue_cap": self.policy.queue_cap,
            "p_active": self.power.p_active,
            "p_idle": self.power.idle_power,
        }
        if self.policy.kind is PolicyKind.BMV:
            d["stage_lengths"] = list(self.policy.stage_lengths)
            d["stage_powers"] = list(self.power.stage_powers)
        elif self.policy.kind is PolicyKind.NPOLICY:
            d["n_threshold"] = self.policy.n_threshold
            d["stage_powers"] = list(self.power.stage_powers)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def validate_config(traffic: TrafficModel, policy: PolicyConfig,
                    power: PowerProfile) -> ValidatedConfig:
    """Check every invariant and return a validated configuration.

    All violations are collected before raising, so a caller sees the full
    defect list in one :class:`ConfigError`.
    """
    bad = []
    if not (traffic.lam > 0):
        bad.append(("NonPositiveRate", f"arrival rate must be > 0, got {traffic.lam}"))
    if not (traffic.mu > 0):
        bad.append(("NonPositiveRate", f"service rate must be > 0, got {traffic.mu}"))

    if policy.queue_cap < 1:
        bad.append(("CapOutOfRange", f"queue cap must be >= 1, got {policy.queue_cap}"))

    if policy.kind is PolicyKind.BMV:
        if len(policy.stage_lengths) == 0:
            bad.append(("EmptyStageList", "BMV policy needs at least one vacation stage"))
        for i, ell in enumerate(policy.stage_lengths):
            if not (ell > 0):
                bad.append(("NonPositiveStageLength",
                            f"stage length {i + 1} must be > 0, got {ell}"))
        if len(power.stage_powers) != len(policy.stage_lengths):
            bad.append(("StagePowerLengthMismatch",
                        f"{len(power.stage_powers)} stage powers for "
                        f"{len(policy.stage_lengths)} stage lengths"))
    elif policy.kind is PolicyKind.NPOLICY:
        if not (1 <= policy.n_threshold <= policy.queue_cap):
            bad.append(("CapOutOfRange",
                        f"n_threshold must be in [1, K], got {policy.n_threshold}"))
        if len(power.stage_powers) != 1:
            bad.append(("StagePowerLengthMismatch",
                        "N-policy needs exactly one stage power (the off power)"))

    if not (power.p_active > 0):
        bad.append(("NonPositivePower", f"p_active must be > 0, got {power.p_active}"))
    for i, p in enumerate(power.stage_powers):
        if not (p > 0):
            bad.append(("NonPositivePower", f"stage power {i + 1} must be > 0, got {p}"))
    if power.p_idle is not None and not (power.p_idle > 0):
        bad.append(("NonPositivePower", f"p_idle must be > 0, got {power.p_idle}"))

    if bad:
        raise ConfigError(bad)
    return ValidatedConfig(traffic=traffic, policy=policy, power=power)


# --- flat key = value representation ---------------------------------------

_LIST_KEYS = {"stage_lengths", "stage_powers"}
_SCALAR_KEYS = {"lambda", "mu", "policy", "queue_cap", "n_threshold",
                "p_active", "p_idle"}


def parse_config_text(text: str):
    """Parse the flat key-value config format.

    Grammar: one ``key = value`` pair per line; ``#`` starts a comment;
    blank lines ignored; list values are whitespace- or comma-separated.
    Returns an unvalidated (traffic, policy, power) triple.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError([("BadSyntax", f"line {lineno}: expected 'key = value'")])
        key, _, val = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        val = val.strip()
        if key not in _LIST_KEYS and key not in _SCALAR_KEYS:
            raise ConfigError([("UnknownKey", f"line {lineno}: unknown key '{key}'")])
        if key in _LIST_KEYS:
            parts = val.replace(",", " ").split()
            values[key] = tuple(float(p) for p in parts)
        else:
            values[key] = val
    return config_from_values(values)


def config_from_values(values: dict):
    """Build the (traffic, policy, power) triple from a flat mapping."""
    try:
        lam = float(values["lambda"])
        mu = float(values["mu"])
    except KeyError as missing:
        raise ConfigError([("MissingKey", f"required key {missing} absent")]) from None
    kind = PolicyKind(str(values.get("policy", "bmv")).lower())
    traffic = TrafficModel(lam=lam, mu=mu)
    policy = PolicyConfig(
        kind=kind,
        stage_lengths=tuple(values.get("stage_lengths", ())),
        n_threshold=int(values.get("n_threshold", 1)),
        queue_cap=int(values.get("queue_cap", DEFAULT_QUEUE_CAP)),
    )
    p_idle = values.get("p_idle")
    power = PowerProfile(
        p_active=float(values.get("p_active", 1.0)),
        stage_powers=tuple(values.get("stage_powers", ())),
        p_idle=None if p_idle is None else float(p_idle),
    )
    return traffic, policy, power


def serialize_config(config: ValidatedConfig) -> str:
    """Render a validated config in the flat key-value format.

    Round-trips exactly: parsing the output and validating again yields an
    identical serialisation.
    """
    lines = [
        f"lambda = {config.traffic.lam!r}",
        f"mu = {config.traffic.mu!r}",
        f"policy = {config.policy.kind.value}",
        f"queue_cap = {config.policy.queue_cap}",
    ]
    if config.policy.kind is PolicyKind.BMV:
        lines.append("stage_lengths = " + " ".join(repr(x) for x in config.policy.stage_lengths))
    if config.policy.kind is PolicyKind.NPOLICY:
        lines.append(f"n_threshold = {config.policy.n_threshold}")
    lines.append(f"p_active = {config.power.p_active!r}")
    if config.power.stage_powers:
        lines.append("stage_powers = " + " ".join(repr(x) for x in config.power.stage_powers))
    lines.append(f"p_idle = {config.power.idle_power!r}")
    return "\n".join(lines) + "\n"


def load_config_file(path) -> ValidatedConfig:
    with open(path, "r", encoding="utf-8") as fh:
        traffic, policy, power = parse_config_text(fh.read())
    return validate_config(traffic, policy, power)
