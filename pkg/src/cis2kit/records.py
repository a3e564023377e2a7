"""Core record types and parsing for annotated five-sentence stories.

A record pairs a five-sentence story with one selected sentence X, a causal
dimension in [1, 10], and two rules (specific and general), each of the form
"statement_1 REL statement_2". Dimensions 1-5 describe causes of X (X sits in
the second statement position); dimensions 6-10 describe effects of X (X sits
first).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    AmbiguousRelationError,
    DegenerateStatementError,
    DimensionRangeError,
    NoRelationError,
    SelectedSentenceNotFound,
    SentenceCountError,
    ToolkitError,
    ValidationError,
)
from .normalize import collapse_whitespace, normalize, token_f1

# A relation connective is represented by its surface string, e.g.
# ">Causes/Enables>".
RelationToken = str

# Connective surfaces seen in the source data. ">Causes/Enables>" is the one
# the worked examples use; the rest cover the remaining dimensions.
DEFAULT_RELATIONS: tuple[RelationToken, ...] = (
    ">Causes/Enables>",
    ">Motivates>",
    ">Enables>",
    ">Causes>",
    ">Results in>",
)

# Default relation surface used when rendering a label for a dimension with
# no parsed rule to take a connective from. Deliberately all the same
# surface; override via a mapping file for dimension-distinct rendering.
DEFAULT_DIMENSION_RENDER_RELATIONS: dict[int, RelationToken] = {
    d: ">Causes/Enables>" for d in range(1, 11)
}

_DIMENSION_GLOSSES = {
    1: "an event that directly causes or enables X",
    2: "an emotion or basic human drive that motivates X",
    3: "a location state that enables X",
    4: "a possession state that enables X",
    5: "another attribute that enables X",
    6: "an event that X directly causes or enables",
    7: "an emotion caused by X",
    8: "a change in location that X results in",
    9: "a change of possession that X results in",
    10: "another change in property that X results in",
}

# Fallback similarity needed before a non-exact selected-sentence match is
# accepted.
SELECTED_MATCH_THRESHOLD = 0.8

_FIVE = 5


def check_relation(surface: str, vocabulary: tuple[RelationToken, ...] | list[RelationToken] | None = None) -> str:
    """Validate a relation surface: in the vocabulary, or '>'-delimited."""
    if vocabulary is not None and surface in vocabulary:
        return surface
    if len(surface) >= 3 and surface.startswith(">") and surface.endswith(">"):
        return surface
    raise ValidationError(f"invalid relation surface {surface!r}")


def check_dimension(dimension) -> int:
    """Parse and range-check a causal dimension."""
    try:
        value = int(str(dimension).strip())
    except (TypeError, ValueError):
        raise DimensionRangeError(f"dimension {dimension!r} is not an integer in [1, 10]") from None
    if not 1 <= value <= 10:
        raise DimensionRangeError(f"dimension {value} outside [1, 10]")
    return value


@dataclass(frozen=True)
class DimensionInfo:
    """What a dimension says about X and which statement slot X occupies."""

    dimension: int
    x_is_first: bool
    description: str

    @classmethod
    def of(cls, dimension: int) -> "DimensionInfo":
        dimension = check_dimension(dimension)
        return cls(
            dimension=dimension,
            x_is_first=dimension >= 6,
            description=_DIMENSION_GLOSSES[dimension],
        )


def x_is_first(dimension: int) -> bool:
    """True when X occupies the first statement slot (dimensions 6-10)."""
    return check_dimension(dimension) >= 6


@dataclass(frozen=True)
class SpecificRule:
    """Two statements joined by a relation connective."""

    statement_1: str
    relation: RelationToken
    statement_2: str

    def __post_init__(self):
        if not self.statement_1.strip() or not self.statement_2.strip():
            raise DegenerateStatementError(
                f"rule statement empty in ({self.statement_1!r}, {self.statement_2!r})"
            )
        check_relation(self.relation)

    def text(self) -> str:
        return f"{self.statement_1} {self.relation} {self.statement_2}"

    def to_json(self) -> dict:
        return {
            "statement_1": self.statement_1,
            "relation": self.relation,
            "statement_2": self.statement_2,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SpecificRule":
        try:
            return cls(obj["statement_1"], obj["relation"], obj["statement_2"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed rule object: {exc}") from None


@dataclass(frozen=True)
class StoryEntry:
    """One annotated record: story, selected sentence position, dimension, rules."""

    entry_id: str
    sentences: tuple[str, ...]
    selected_index: int
    dimension: int
    gold_specific: SpecificRule
    gold_general: SpecificRule

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        if len(self.sentences) != _FIVE:
            raise SentenceCountError(
                f"expected {_FIVE} sentences, found {len(self.sentences)}",
                found=len(self.sentences),
                entry_id=self.entry_id,
            )
        if any(not s.strip() for s in self.sentences):
            raise ValidationError("empty sentence in story", entry_id=self.entry_id)
        if not 0 <= self.selected_index <= 4:
            raise ValidationError(
                f"selected_index {self.selected_index} outside [0, 4]", entry_id=self.entry_id
            )
        check_dimension(self.dimension)

    @property
    def selected_text(self) -> str:
        """The selected sentence X (canonically, the story sentence itself)."""
        return self.sentences[self.selected_index]

    @property
    def info(self) -> DimensionInfo:
        return DimensionInfo.of(self.dimension)

    def non_selected_indices(self) -> list[int]:
        return [i for i in range(_FIVE) if i != self.selected_index]

    def to_json(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "sentences": list(self.sentences),
            "selected_index": self.selected_index,
            "dimension": self.dimension,
            "specific": self.gold_specific.to_json(),
            "general": self.gold_general.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "StoryEntry":
        try:
            entry_id = str(obj["entry_id"])
            sentences = obj["sentences"]
            selected_index = obj["selected_index"]
            dimension = obj["dimension"]
            specific = obj["specific"]
            general = obj["general"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed entry object: {exc}") from None
        if not isinstance(sentences, list) or not all(isinstance(s, str) for s in sentences):
            raise ValidationError("sentences must be a list of strings", entry_id=entry_id)
        if not isinstance(selected_index, int) or isinstance(selected_index, bool):
            raise ValidationError("selected_index must be an integer", entry_id=entry_id)
        try:
            return cls(
                entry_id=entry_id,
                sentences=tuple(sentences),
                selected_index=selected_index,
                dimension=check_dimension(dimension),
                gold_specific=SpecificRule.from_json(specific),
                gold_general=SpecificRule.from_json(general),
            )
        except ToolkitError as exc:
            if exc.entry_id is None:
                exc.entry_id = entry_id
            raise


_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])\s+")


def split_story_into_sentences(story_text: str) -> list[str]:
    """Split a story blob into exactly 5 sentences.

    Boundaries are '.', '!' or '?' followed by whitespace. Joining the result
    with single spaces reproduces the whitespace-normalized input.
    """
    flat = collapse_whitespace(story_text)
    if not flat:
        raise SentenceCountError("empty story text", found=0)
    parts = [p for p in _SENTENCE_BOUNDARY.split(flat) if p]
    if len(parts) != _FIVE:
        raise SentenceCountError(
            f"story split into {len(parts)} sentences, expected {_FIVE}", found=len(parts)
        )
    return parts


def parse_specific_rule(
    rule_text: str, vocabulary: tuple[RelationToken, ...] | list[RelationToken] = DEFAULT_RELATIONS
) -> SpecificRule:
    """Split rule text on the single leftmost vocabulary connective."""
    hits = []
    for surface in vocabulary:
        pos = rule_text.find(surface)
        if pos >= 0:
            hits.append((pos, surface))
    if not hits:
        raise NoRelationError(f"no relation connective in {rule_text!r}")
    distinct = {surface for _, surface in hits}
    if len(distinct) > 1:
        hits.sort()
        raise AmbiguousRelationError(
            f"multiple connectives in {rule_text!r}: {hits[0][1]!r} and {hits[1][1]!r}",
            first=hits[0][1],
            second=hits[1][1],
        )
    pos, surface = min(hits)
    left = rule_text[:pos].strip()
    right = rule_text[pos + len(surface):].strip()
    return SpecificRule(statement_1=left, relation=surface, statement_2=right)


def locate_selected_sentence(
    sentences: list[str] | tuple[str, ...],
    selected_text: str,
    threshold: float = SELECTED_MATCH_THRESHOLD,
) -> int:
    """Index of the story sentence matching the selected-sentence text.

    Exact normalized match wins; otherwise the highest token-F1 candidate is
    accepted if it reaches ``threshold``. Ties break to the lowest index.
    """
    target = normalize(selected_text)
    for i, sentence in enumerate(sentences):
        if normalize(sentence) == target:
            return i
    best_index, best_score = -1, -1.0
    for i, sentence in enumerate(sentences):
        score = token_f1(sentence, selected_text)
        if score > best_score:
            best_index, best_score = i, score
    if best_score >= threshold:
        return best_index
    raise SelectedSentenceNotFound(
        f"no sentence within {threshold} of {selected_text!r} (best {best_score:.3f})"
    )


def parse_glucose_record(
    row: dict,
    column_map: dict[str, str],
    *,
    entry_id: str | None = None,
    vocabulary: tuple[RelationToken, ...] | list[RelationToken] = DEFAULT_RELATIONS,
    threshold: float = SELECTED_MATCH_THRESHOLD,
) -> StoryEntry:
    """Parse one raw record (e.g. a CSV row) into a validated StoryEntry.

    ``column_map`` maps the canonical keys (story, selected, dimension,
    specific, general, and optionally entry_id) to the row's column names.
    Errors from sub-steps propagate annotated with the entry id.
    """
    id_column = column_map.get("entry_id")
    if id_column and id_column in row:
        entry_id = str(row[id_column])
    if entry_id is None:
        entry_id = "<unknown>"
    try:
        values = {}
        for key in ("story", "selected", "dimension", "specific", "general"):
            column = column_map.get(key, key)
            if column not in row:
                raise ValidationError(f"missing column {column!r} (mapped from {key!r})")
            values[key] = str(row[column])
        sentences = split_story_into_sentences(values["story"])
        selected_index = locate_selected_sentence(sentences, values["selected"], threshold)
        return StoryEntry(
            entry_id=entry_id,
            sentences=tuple(sentences),
            selected_index=selected_index,
            dimension=check_dimension(values["dimension"]),
            gold_specific=parse_specific_rule(values["specific"], vocabulary),
            gold_general=parse_specific_rule(values["general"], vocabulary),
        )
    except ToolkitError as exc:
        if exc.entry_id is None:
            exc.entry_id = entry_id
        raise
