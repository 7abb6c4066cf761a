"""Exception hierarchy.

Each error carries the CLI exit code it maps to.
"""


class IceTorsError(Exception):
    exit_code = 1


class ContractError(IceTorsError, ValueError):
    """A caller broke an operation's precondition (shapes, algebra mismatch)."""

    exit_code = 2


class SchemaError(ContractError):
    """Malformed algebra description."""


class UsageError(ContractError):
    pass


class PreconditionError(ContractError):
    """Input is well formed but not in the operation's domain (e.g. alpha of a
    subcategory that is not ICE-closed)."""


class UnsupportedAlgebraError(IceTorsError):
    exit_code = 2


class IncompleteCatalogError(IceTorsError):
    exit_code = 1


class CapExceededError(IceTorsError):
    exit_code = 3


class WindowTooSmallError(IceTorsError):
    exit_code = 3


class FalsificationError(IceTorsError):
    """A verified identity failed. At desk scale this means a bug."""

    exit_code = 1

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}
