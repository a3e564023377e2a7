"""Sentence-selection label grammar: "<s_a> REL <s_b>".

A label names two story sentence positions and the relation between them.
With one relation token per dimension the output space is the 5P2 = 20
ordered index pairs times 10 relations, i.e. 200 sequences.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import IndexOutOfRangeError, LabelSyntaxError, SelfLoopError
from .records import DEFAULT_RELATIONS, RelationToken, check_relation

# One distinct relation surface per dimension, so labels stay a closed
# 200-sequence vocabulary: the dimension digit plus the connective family
# that dimension uses in the source data.
DIMENSION_RELATION_TOKENS: dict[int, RelationToken] = {
    1: ">1:Causes/Enables>",
    2: ">2:Motivates>",
    3: ">3:Enables>",
    4: ">4:Enables>",
    5: ">5:Enables>",
    6: ">6:Causes/Enables>",
    7: ">7:Causes>",
    8: ">8:Results in>",
    9: ">9:Results in>",
    10: ">10:Results in>",
}

# Everything parse_label accepts by default: connectives carried over from
# parsed rules plus the per-dimension tokens above.
DEFAULT_LABEL_RELATIONS: tuple[RelationToken, ...] = DEFAULT_RELATIONS + tuple(
    DIMENSION_RELATION_TOKENS[d] for d in sorted(DIMENSION_RELATION_TOKENS)
)

_SENTENCE_TAG = re.compile(r"<s_(\d+)>")


@dataclass(frozen=True)
class Cis2Label:
    """Three-token label: first sentence index, relation, second index."""

    a: int
    relation: RelationToken
    b: int

    def __post_init__(self):
        for index in (self.a, self.b):
            if not 0 <= index <= 4:
                raise IndexOutOfRangeError(f"sentence index {index} outside [0, 4]")
        if self.a == self.b:
            raise SelfLoopError(f"label relates sentence {self.a} to itself")
        check_relation(self.relation)

    def render(self) -> str:
        return f"<s_{self.a}> {self.relation} <s_{self.b}>"

    def __str__(self) -> str:
        return self.render()


def parse_label(
    text: str,
    relations: tuple[RelationToken, ...] | list[RelationToken] = DEFAULT_LABEL_RELATIONS,
) -> Cis2Label:
    """Parse "<s_i> REL <s_j>", tolerating surrounding whitespace.

    The relation must be one of ``relations``. Raises LabelSyntaxError,
    IndexOutOfRangeError, or SelfLoopError.
    """
    stripped = text.strip()
    tags = list(_SENTENCE_TAG.finditer(stripped))
    if len(tags) != 2:
        raise LabelSyntaxError(f"expected exactly 2 sentence tags in {text!r}, found {len(tags)}")
    first, second = tags
    if first.start() != 0 or second.end() != len(stripped):
        raise LabelSyntaxError(f"label must start and end with a sentence tag: {text!r}")
    middle = stripped[first.end():second.start()]
    if not middle[:1].isspace() or not middle[-1:].isspace():
        raise LabelSyntaxError(f"relation must be space-separated from tags: {text!r}")
    relation = middle.strip()
    if relation not in relations:
        raise LabelSyntaxError(f"unknown relation {relation!r} in {text!r}")
    a = int(first.group(1))
    b = int(second.group(1))
    for index in (a, b):
        if not 0 <= index <= 4:
            raise IndexOutOfRangeError(f"sentence index {index} outside [0, 4] in {text!r}")
    if a == b:
        raise SelfLoopError(f"label relates sentence {a} to itself: {text!r}")
    return Cis2Label(a=a, relation=relation, b=b)


def enumerate_label_space(relations: list[RelationToken] | tuple[RelationToken, ...]) -> list[Cis2Label]:
    """All labels over the given relations: 20 ordered index pairs each."""
    labels = []
    for relation in relations:
        for a in range(5):
            for b in range(5):
                if a != b:
                    labels.append(Cis2Label(a=a, relation=relation, b=b))
    return labels


def dimension_label_space() -> list[Cis2Label]:
    """The closed 200-label space induced by the per-dimension relation tokens."""
    relations = [DIMENSION_RELATION_TOKENS[d] for d in sorted(DIMENSION_RELATION_TOKENS)]
    return enumerate_label_space(relations)


def load_dimension_relations(path) -> dict[int, RelationToken]:
    """Load a dimension->relation JSON map, e.g. {"1": ">Causes/Enables>", ...}."""
    import json

    from .errors import FormatError
    from .records import check_dimension

    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON in relations file: {exc.msg}") from None
    if not isinstance(raw, dict) or not raw:
        raise FormatError("relations file must be a non-empty JSON object")
    mapping = {}
    for key, surface in raw.items():
        dimension = check_dimension(key)
        if not isinstance(surface, str):
            raise FormatError(f"relation for dimension {dimension} must be a string")
        mapping[dimension] = check_relation(surface)
    return mapping
