"""Exception types shared across the library.

Every error raised on a user-facing code path is one of these, so callers
can distinguish bad inputs (ConfigError and friends) from internal
invariant violations (plain AssertionError, never expected to surface).
"""


class NmsolveError(Exception):
    """Base class for all library errors."""


class InvalidGame(NmsolveError):
    """Game construction failed validation (non-finite entries, empty matrix)."""


class DimensionError(NmsolveError):
    """Operands have incompatible shapes."""


class InvalidInput(NmsolveError):
    """A numeric argument is outside its documented domain."""


class EmptyHistory(NmsolveError):
    """An aggregate was requested over an empty iterate/loss history."""


class PerfectRecallViolation(NmsolveError):
    """A decision point is reachable through two distinct parent sequences."""


class MalformedTree(NmsolveError):
    """Treeplex structure is cyclic, unreachable, or otherwise inconsistent."""


class IncompleteStrategy(NmsolveError):
    """A behavior profile is missing entries for some decision point."""


class InvalidSequenceForm(NmsolveError):
    """A sequence-form vector violates flow conservation or the root pin."""


class DomainError(NmsolveError):
    """A prox/projection input lies outside the regularizer's domain."""


class ConfigError(NmsolveError):
    """Experiment configuration is invalid or inconsistent."""


class ParseError(NmsolveError):
    """A serialized game, strategy, or log failed to parse."""
