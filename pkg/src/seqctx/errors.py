"""Exception types raised across the package."""


class SeqCtxError(Exception):
    """Base class for all errors raised by seqctx."""


class ValidationError(SeqCtxError, ValueError):
    """Input data failed structural validation.

    The message always names the offending field.
    """


class ArityMismatch(ValidationError):
    pass


class ArityTooLarge(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class DimensionTooLarge(ValidationError):
    pass


class IndexOutOfRange(ValidationError, IndexError):
    pass


class ControlEqualsTarget(ValidationError):
    pass


class NotInCommutativeClass(ValidationError):
    pass


class RationalizationFailure(SeqCtxError, ArithmeticError):
    pass


class InfeasibleModel(SeqCtxError):
    pass


class MissingContext(SeqCtxError, KeyError):
    def __str__(self):
        return Exception.__str__(self)
