"""Exception types shared across modules."""


class WordeqError(Exception):
    """Base class for all errors raised by this package."""


class UnmappedVariable(WordeqError):
    """An evaluation needed a variable the assignment does not cover."""


class LetterOutsideAlphabet(WordeqError):
    """A literal uses a letter not in the declared alphabet."""


class AlphabetMismatch(WordeqError):
    """Two automata with different alphabets were combined."""


class UnfixedPartPresent(WordeqError):
    """A parametric word with unfixed parts reached an operation
    that is only defined for fully fixed words."""


class ResourceExhausted(WordeqError):
    """A search exceeded its configured node budget."""


class CoefficientOverflow(WordeqError):
    """A linear-arithmetic coefficient fell outside the 64-bit range."""
