"""Exception types shared across the package."""
from __future__ import annotations


class BmvqError(Exception):
    """Base class for all package errors."""


class ConfigError(BmvqError):
    """Raised by configuration validation.

    Carries every violation found, not just the first, as a list of
    (code, message) pairs.  Codes are stable strings such as
    ``NonPositiveRate`` or ``StagePowerLengthMismatch``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(f"{code}: {msg}" for code, msg in self.violations)
        super().__init__(f"invalid configuration ({lines})")

    @property
    def codes(self):
        return [code for code, _ in self.violations]


class RhoUnityError(BmvqError):
    """The finite-buffer sojourn formula is singular at rho = 1."""


class NonConvergenceError(BmvqError):
    """Absorption recursion exceeded its epoch cap before reaching epsilon."""


class ResidualTooLargeError(BmvqError):
    """A zero-hit distribution was truncated too coarsely for this use."""


class NoMassAboveZeroError(BmvqError):
    """Conditional queue length is undefined: no probability mass above 0."""


class LengthMismatchError(BmvqError):
    """Paired per-epoch sequences have inconsistent lengths."""


class SurvivorMassUnderflowError(BmvqError, ZeroDivisionError):
    """Surviving probability mass underflowed while epochs were still pending."""


class InvalidPolicyError(BmvqError):
    """An operation received a policy kind it does not support."""


class HorizonTooShortWarning(UserWarning):
    """Simulation horizon covers too few expected arrivals to be meaningful."""
