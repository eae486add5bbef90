"""Exception hierarchy. Each class carries the CLI exit status it maps to."""

from __future__ import annotations


class ChernError(Exception):
    exit_code = 1

    def __init__(self, message: str, code: str = "E_GENERIC"):
        super().__init__(message)
        self.code = code


class InputError(ChernError):
    """Malformed or mathematically invalid input (exit status 2)."""

    exit_code = 2

    def __init__(self, message: str, code: str = "E_INPUT"):
        super().__init__(message, code)


class ParseError(InputError):
    def __init__(self, message: str, offset: int, text: str = ""):
        line = text.count("\n", 0, offset) + 1
        column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(
            f"{message} at offset {offset} (line {line}, column {column})", "E_SYNTAX"
        )
        self.offset = offset
        self.line = line
        self.column = column


class CertificationError(ChernError):
    """A window-based certificate could not be produced (exit status 3)."""

    exit_code = 3

    def __init__(self, message: str, code: str = "E_CERTIFICATION"):
        super().__init__(message, code)


class InconsistencyError(ChernError):
    """A proved identity failed numerically; signals a bug (exit status 4)."""

    exit_code = 4

    def __init__(self, message: str, code: str = "E_INCONSISTENT"):
        super().__init__(message, code)
