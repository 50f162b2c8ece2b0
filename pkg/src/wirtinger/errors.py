"""Exception types shared by the numerical modules and the CLI."""


class InputError(ValueError):
    """Malformed or out-of-range input (bad angles, non-finite entries, ...)."""


class PreconditionError(ValueError):
    """Input is valid but the requested object does not exist for it."""


class DomainError(ValueError):
    """The operation is undefined in this regime (e.g. broken combinatorics)."""
