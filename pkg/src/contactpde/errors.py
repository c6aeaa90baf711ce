"""Error taxonomy shared across the package.

Two failure modes are distinguished everywhere: calls outside an operation's
documented domain (rejected up front) and violations of internal exactness
checks (which signal a bug, never expected input).
"""


class PreconditionError(ValueError):
    """An operation was invoked outside its documented domain."""


class ConsistencyError(RuntimeError):
    """An internal exactness or cross-check failed; indicates a bug."""
