"""Exception types shared across the package."""


class IrsLinkError(Exception):
    """Base class for all package errors."""


class DomainError(IrsLinkError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NotPositiveSemidefiniteError(DomainError):
    """A matrix violates the positive-semidefinite tolerance."""


class DegenerateScenarioError(DomainError):
    """The link carries no power at all; the Gamma fit is undefined."""


class ContractViolationError(IrsLinkError, RuntimeError):
    """An operation was called with a design it cannot resolve."""


class InternalConsistencyError(IrsLinkError, RuntimeError):
    """Two computation paths that must agree exactly did not."""


class ScenarioFormatError(IrsLinkError, ValueError):
    """A scenario file failed schema or invariant validation.

    ``field`` names the offending key when one can be identified.
    """

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
