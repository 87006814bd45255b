"""Shared exception types."""


class ContractError(ValueError):
    """A documented precondition was violated by the caller."""


class InternalInvariantError(RuntimeError):
    """A condition that is mathematically guaranteed failed to hold."""


class InfeasibleCompletionError(ContractError):
    """Completion vectors cannot reach the target sum under the entry bound."""


class FormatError(ValueError):
    """Malformed input text (graph6 line, vector-sequence file, or JSON payload)."""
