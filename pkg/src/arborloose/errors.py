"""Exception taxonomy shared by the library and the CLI exit codes."""


class ArborError(Exception):
    exit_code = 1


class DomainError(ArborError, ValueError):
    """Bad input: out-of-range objects, malformed morphism lists, identities where forbidden."""

    exit_code = 3


class CompositionError(DomainError):
    """Endpoints of two morphisms do not match."""


class CapacityError(ArborError):
    """An exhaustive enumeration would exceed its configured ceiling."""

    exit_code = 4


class ModelViolation(ArborError, AssertionError):
    """An internal consistency check failed. Always a bug."""

    exit_code = 5
