"""Exception types shared across the package."""


class ChancodesError(Exception):
    """Base class for all errors raised by this package."""


class WordError(ChancodesError, ValueError):
    """A word uses symbols outside the relevant alphabet, or has a bad length."""


class AlphabetMismatchError(ChancodesError, ValueError):
    """Two machines that must share an alphabet do not."""


class FormatError(ChancodesError, ValueError):
    """A text description of an automaton/transducer/code could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyLanguageError(ChancodesError, RuntimeError):
    """Uniform sampling was requested from an automaton accepting no words."""


class NotDetectingError(ChancodesError, ValueError):
    """An operation required an error-detecting code but got a violating one.

    Carries the violation witness in ``.witness``.
    """

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class ParameterError(ChancodesError, ValueError):
    """A numeric parameter is outside its allowed range."""
