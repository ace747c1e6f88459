"""Exception hierarchy for mvpress.

Every domain error is also a ValueError so callers that do not care about the
distinction can catch the builtin. API misuse (bad shapes, out-of-range
arguments) raises plain ValueError and is not part of this hierarchy.
"""

from __future__ import annotations


class MvpressError(ValueError):
    """Base class for all mvpress domain errors."""


class FormatError(MvpressError):
    """A file does not follow its declared binary or text layout."""


class CorruptionError(FormatError):
    """A file follows the layout but ends early or declares impossible sizes."""


class ValidationError(MvpressError):
    """Well-formed data violates a content invariant (NaN, duplicate id, ...)."""


class ParseError(MvpressError):
    """A text line could not be parsed. Carries the 1-based line number."""

    def __init__(self, path: str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class EvaluationError(MvpressError):
    """An evaluation is undefined for the given run/qrels combination."""
