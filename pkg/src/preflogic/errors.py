"""Exception types shared across the package."""


class PrefLogicError(Exception):
    """Base class for all package errors."""


class AtomSyntaxError(PrefLogicError):
    """A prediction-atom token does not have the form model:role[:copy]."""


class FormulaSyntaxError(PrefLogicError):
    """Malformed formula source text."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UndeclaredAtomError(PrefLogicError):
    """A formula mentions an atom outside the declared atom set."""


class AtomLimitError(PrefLogicError):
    """An operation was asked to handle more atoms than it supports."""


class EquationSyntaxError(PrefLogicError):
    """Malformed loss-equation source text."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class NonDisjointError(PrefLogicError):
    """A polynomial has a pair of terms with a common solution."""

    def __init__(self, message, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second


class MissingWeightError(PrefLogicError):
    """A weight map does not cover an atom required for evaluation."""


class ZeroCountError(PrefLogicError):
    """A weighted model count needed in a log ratio vanished."""


class TrivialStructureError(PrefLogicError):
    """A preference structure with an empty winner or loser set cannot be compiled."""


class UnknownLossError(PrefLogicError):
    """A name is not in the loss catalog."""


class BoundViolationError(PrefLogicError):
    """Lattice bounds do not satisfy lower-entails-upper."""
