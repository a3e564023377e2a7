"""Exception types raised by the toolkit.

Every data problem maps to exactly one of these named errors so that callers
(and the CLI's per-entry error log) can handle them without string matching.
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all data errors. ``entry_id`` is set when known."""

    def __init__(self, message: str, *, entry_id: str | None = None):
        super().__init__(message)
        self.entry_id = entry_id

    def __str__(self) -> str:
        base = super().__str__()
        if self.entry_id is not None:
            return f"[{self.entry_id}] {base}"
        return base


class ValidationError(ToolkitError):
    """A record violates a structural invariant not covered by a more specific error."""


class SentenceCountError(ToolkitError):
    """Story text did not split into exactly 5 sentences."""

    def __init__(self, message: str, *, found: int, entry_id: str | None = None):
        super().__init__(message, entry_id=entry_id)
        self.found = found


class NoRelationError(ToolkitError):
    """Rule text contains no known relation connective."""


class AmbiguousRelationError(ToolkitError):
    """Rule text contains two distinct relation connectives."""

    def __init__(self, message: str, *, first: str, second: str, entry_id: str | None = None):
        super().__init__(message, entry_id=entry_id)
        self.first = first
        self.second = second


class SelectedSentenceNotFound(ToolkitError):
    """No story sentence matches the selected-sentence text closely enough."""


class DimensionRangeError(ToolkitError):
    """Dimension is not an integer in [1, 10]."""


class DegenerateStatementError(ToolkitError):
    """A rule statement is empty where a non-empty one is required."""


class EmbeddingMissError(ToolkitError):
    """A sentence is absent from the embedding table."""

    def __init__(self, text: str, *, entry_id: str | None = None):
        super().__init__(f"no embedding for {text!r}", entry_id=entry_id)
        self.text = text


class EmptyCorpusError(ToolkitError):
    """An operation that needs at least one item received none."""


class FormatError(ToolkitError):
    """A file does not follow its documented format."""

    def __init__(self, message: str, *, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class DimensionMismatchError(ToolkitError):
    """Embedding vectors in one table have differing dimensions."""


class DuplicateKeyError(ToolkitError):
    """The same sentence appears twice in an embedding table."""


class LabelSyntaxError(ToolkitError):
    """Text does not match the sentence-selection label grammar."""


class IndexOutOfRangeError(ToolkitError):
    """A label's sentence index is outside [0, 4]."""


class SelfLoopError(ToolkitError):
    """A label points a sentence at itself."""


class LengthMismatchError(ToolkitError):
    """Paired sequences have different lengths."""


class SimilarityFloorError(ToolkitError):
    """Best candidate similarity fell below the configured floor."""
