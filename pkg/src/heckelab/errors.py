"""Exception types shared across the package."""


class HeckelabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(HeckelabError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class InvariantError(HeckelabError, ArithmeticError):
    """An internal exactness invariant failed (e.g. a division that the
    theory guarantees to be exact left a remainder).  This always
    indicates a bug, never bad user input."""


class ResourceError(HeckelabError, RuntimeError):
    """A requested computation exceeds the enumeration budget.  The
    message names the bound that was exceeded; nothing is silently
    truncated."""
