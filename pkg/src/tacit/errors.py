"""Exception types shared across the engine."""


class TacitError(Exception):
    """Base class for all errors raised by this package."""


class KernelError(TacitError):
    pass


class DuplicateName(KernelError):
    pass


class UnknownReference(KernelError):
    pass


class ArityMismatch(KernelError):
    pass


class IllTyped(KernelError):
    pass


class TerminationCheckFailure(KernelError):
    pass


class ParseError(TacitError):
    """Carries a 1-based source position."""

    def __init__(self, message, line=None, col=None):
        super().__init__(message)
        self.line = line
        self.col = col

    def __str__(self):
        base = super().__str__()
        if self.line is not None:
            return f"{base} (line {self.line}, col {self.col})"
        return base


class FuelExhausted(TacitError):
    """Tactic evaluation ran out of fuel; distinct from plain failure."""


class SoundnessError(TacitError):
    """An engine-produced derivation failed the independent checker."""


class DocumentError(TacitError):
    pass


class TacticFailed(DocumentError):
    pass


class CommandInvalid(DocumentError):
    pass


class QedOpenGoals(DocumentError):
    pass


class UnknownRequire(DocumentError):
    pass


class HashMismatch(DocumentError):
    pass


class UndoUnderflow(DocumentError):
    pass


class LearnerError(TacitError):
    pass


class DuplicateLearnerName(LearnerError):
    pass


class UnknownLearnerName(LearnerError):
    pass


class IncompleteMapping(LearnerError):
    pass
