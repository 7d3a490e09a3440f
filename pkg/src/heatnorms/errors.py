"""Exception types shared across the package.

Every raise names the violated constraint in its message so that CLI users
and verification reports can surface it verbatim.
"""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DivergenceError(ValueError):
    """The requested integral or norm diverges for these parameters."""


class InadmissibleError(ValueError):
    """An exponent tuple violates an admissibility relation or interval bound."""


class CapabilityError(ValueError):
    """The operation is not supported for these parameters (e.g. dimension)."""


class UsageError(ValueError):
    """Malformed CLI/config input."""
