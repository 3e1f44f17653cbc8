"""
Exception hierarchy for the reasoning toolkit.

Every error carries a human readable `detail` and the CLI `exit_code` it maps to:
- 2: usage, parse and precondition errors
- 3: enumeration cap exceeded
"""
from typing import Optional

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_CAP = 3


class ReasoningError(Exception):
    exit_code = EXIT_USAGE

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


# ============================================================================
# SYNTAX
# ============================================================================

class ParseError(ReasoningError):
    """Malformed input text. `position` is a 0-based character offset when known."""

    def __init__(self, detail: str, position: Optional[int] = None):
        if position is not None:
            detail = f"{detail} (at position {position})"
        super().__init__(detail)
        self.position = position


class UnknownFunctionError(ParseError):
    pass


class ArityError(ParseError):
    pass


class DeclarationError(ParseError):
    pass


# ============================================================================
# SEMANTICS
# ============================================================================

class FormulaError(ReasoningError):
    """Well-formed input that the requested operation cannot accept."""


class PreconditionError(ReasoningError):
    pass


class UnsupportedFragmentError(ReasoningError):
    pass


class CapExceededError(ReasoningError):
    exit_code = EXIT_CAP

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap
