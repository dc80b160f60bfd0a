"""Exception types shared across the package.

The CLI maps these onto process exit codes: ValidationError -> 1,
CapacityError -> 2, comparison failures (``--check``) -> 3.
"""


class FastsimError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(FastsimError, ValueError):
    """Operands act on different qubit counts."""


class DomainError(FastsimError, ValueError):
    """An argument is outside the operation's domain."""


class ContractViolationError(FastsimError, RuntimeError):
    """An internal precondition failed, e.g. a non-commuting measurement set."""


class DegenerateBranchError(FastsimError, RuntimeError):
    """A sampled ancilla branch has vanishing probability."""


class UnreliableLinkError(FastsimError, RuntimeError):
    """A chained sign-recovery link estimate is too small to trust."""

    def __init__(self, family: str, position: int, value: float):
        self.family = family
        self.position = position
        self.value = value
        super().__init__(
            f"unreliable link in {family} chain at position {position}: "
            f"|estimate| = {abs(value):.3e}"
        )


class ValidationError(FastsimError, ValueError):
    """A configuration or request failed validation (exit code 1)."""


class CapacityError(FastsimError, RuntimeError):
    """The requested system size exceeds dense-simulation capacity (exit code 2)."""
