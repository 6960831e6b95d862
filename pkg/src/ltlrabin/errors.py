"""Exception hierarchy shared by every stage of the translator."""


class TranslationError(Exception):
    """Base class for all errors raised by ltlrabin."""


class LTLSyntaxError(TranslationError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class NegationNotEliminable(TranslationError):
    """A negation sits above X or U and cannot be pushed to the literals."""


class UnsupportedFragment(TranslationError):
    def __init__(self, message, subformula=None):
        super().__init__(message)
        self.subformula = subformula


class StructureViolation(TranslationError):
    """A VWAA state fits none of the may/must/loopless categories."""


class NotMmaa(TranslationError):
    pass


class AlphabetMismatch(TranslationError, ValueError):
    pass


class ResourceCapExceeded(TranslationError):
    pass


class UnsupportedCombination(TranslationError, ValueError):
    """Requested output format does not exist for the requested stage."""
