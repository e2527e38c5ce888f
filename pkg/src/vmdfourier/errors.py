"""Exception hierarchy shared by every module of the package."""


class VMDError(Exception):
    """Base class for all package errors."""


class DomainError(VMDError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class EvaluationError(VMDError, ArithmeticError):
    """A function evaluation produced a non-finite value."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class CapabilityError(VMDError):
    """The input lacks data (derivatives, norms, monotone tails) the operation needs."""


class CertificationError(VMDError):
    """A numerical assumption behind an error certificate was observed to fail."""


class ParseError(VMDError, ValueError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownFunctionError(VMDError, KeyError):
    """No corpus entry with the requested name."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown function"
