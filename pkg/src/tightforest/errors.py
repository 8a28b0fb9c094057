"""Exception types shared across the package.

Exit-code mapping used by the CLI:
  1 usage error, 2 infeasible refusal, 3 verification mismatch,
  4 internal assertion failure.
"""


class TightForestError(Exception):
    pass


class ValidationError(TightForestError, ValueError):
    """Malformed value: bad vertex, duplicate edge, uniformity mismatch."""


class ParseError(ValidationError):
    """Malformed .hg text."""


class DomainError(TightForestError, ValueError):
    """Argument outside a formula's stated validity range."""


class InfeasibleError(TightForestError):
    """Instance exceeds the configured feasibility limits; refusal, not a crash."""


class CheckpointError(TightForestError):
    """Checkpoint file missing fields, wrong version, or not matching the instance."""


class InternalCheckError(TightForestError):
    """A bound the implementation promises to uphold failed at runtime."""


class SearchAborted(TightForestError):
    """Search stopped early on request; state is in the checkpoint."""
