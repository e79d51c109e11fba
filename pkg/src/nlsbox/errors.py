"""Exception types shared across the package.

Every failure mode raises one of the classes below so callers can
distinguish bad parameters from numerical breakdown without string
matching.
"""

from __future__ import annotations

__all__ = [
    "NlsboxError",
    "RepresentationError",
    "DomainError",
    "ResolutionError",
    "InstabilityError",
    "ConfigError",
    "AtomicIntervalError",
    "UndersamplingWarning",
]


class NlsboxError(Exception):
    """Base class for all package-specific errors."""


class RepresentationError(NlsboxError, ValueError):
    """A field was supplied in the wrong representation (physical vs frequency)."""


class DomainError(NlsboxError, ValueError):
    """A parameter lies outside the domain an operation supports."""


class ResolutionError(NlsboxError, ValueError):
    """The grid cannot resolve the requested scale or cutoff."""


class InstabilityError(NlsboxError, RuntimeError):
    """A time evolution produced non-finite samples or blew up."""


class ConfigError(NlsboxError, ValueError):
    """An experiment configuration file is malformed or inconsistent."""


class AtomicIntervalError(NlsboxError, RuntimeError):
    """A single time step already exceeds the requested interval budget."""


class UndersamplingWarning(UserWarning):
    """A time series is too coarsely sampled for the statistic computed from it."""
