"""Exception types shared across the package."""


class MatnormError(Exception):
    """Base class for all package errors."""


class InvalidInputError(MatnormError, ValueError):
    """Malformed input: wrong shape, ragged blocks, non-finite entries."""


class DegenerateInputError(MatnormError, ValueError):
    """Structurally valid input for which the operation is undefined."""


class InconsistencyError(MatnormError):
    """A certified lower bound exceeded an upper bound.

    Either a genuine bug or an infeasible catalog couple; both certificates
    are attached so the failure can be reproduced.
    """

    def __init__(self, message, *, lower=None, upper=None, rule=None, couple=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
        self.rule = rule
        self.couple = couple
