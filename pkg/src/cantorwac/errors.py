"""Exception hierarchy shared by all modules."""


class CantorWacError(Exception):
    """Base class for every error raised by the package."""


class StructuralError(CantorWacError):
    """A diagram or partition violates a structural invariant."""


class DepthError(CantorWacError):
    """An answer needs more levels than are materialized or budgeted."""


class PartitionError(CantorWacError):
    """Pieces overlap, or do not cover what they were supposed to cover."""


class ContractError(CantorWacError):
    """An operation was called with inputs violating its precondition."""


class RefusalError(CantorWacError):
    """A constructive step was refused because a certified obstruction exists.

    The obstruction (a serializable certificate) is kept on ``certificate``.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class UnknownError(CantorWacError):
    """A precondition could be neither certified nor refuted within the bound."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
