"""Convert rule annotations (gold or model-predicted) into sentence-selection labels.

Two of the three label tokens come straight from the input: the selected
sentence X gives one index, and the dimension says whether X sits in the
first or second label slot. The remaining token is the story sentence most
similar to the rule statement on the non-X side; ties break to the lowest
index so conversion is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import DegenerateStatementError, SimilarityFloorError
from .labels import Cis2Label
from .records import (
    DEFAULT_RELATIONS,
    RelationToken,
    SpecificRule,
    StoryEntry,
    parse_specific_rule,
    x_is_first,
)
from .similarity import TokenF1Similarity, make_backend


@dataclass(frozen=True)
class ConversionResult:
    """A converted label plus how the open token was chosen."""

    entry_id: str
    label: Cis2Label
    x_index: int
    y_index: int
    candidate_scores: dict

    def to_json(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "label": self.label.render(),
            "x_index": self.x_index,
            "y_index": self.y_index,
            "scores": {str(i): s for i, s in sorted(self.candidate_scores.items())},
        }


def make_label(x_index: int, y_index: int, dimension: int, relation: RelationToken) -> Cis2Label:
    """Place X per the dimension convention: first slot for dims 6-10, second for 1-5."""
    if x_is_first(dimension):
        return Cis2Label(a=x_index, relation=relation, b=y_index)
    return Cis2Label(a=y_index, relation=relation, b=x_index)


def _pick_y(entry: StoryEntry, statement: str, backend, min_similarity: float | None):
    statement = statement.strip()
    if not statement:
        raise DegenerateStatementError(
            "non-X statement is empty, nothing to match", entry_id=entry.entry_id
        )
    scores = {}
    best_index, best_score = -1, float("-inf")
    for i in entry.non_selected_indices():
        score = backend.similarity(statement, entry.sentences[i])
        scores[i] = score
        if score > best_score:
            best_index, best_score = i, score
    if min_similarity is not None and best_score < min_similarity:
        raise SimilarityFloorError(
            f"best candidate score {best_score:.3f} below floor {min_similarity}",
            entry_id=entry.entry_id,
        )
    return best_index, scores


def _convert_rule(
    entry: StoryEntry, rule: SpecificRule, backend, min_similarity: float | None
) -> ConversionResult:
    if x_is_first(entry.dimension):
        open_statement = rule.statement_2
    else:
        open_statement = rule.statement_1
    y_index, scores = _pick_y(entry, open_statement, backend, min_similarity)
    label = make_label(entry.selected_index, y_index, entry.dimension, rule.relation)
    return ConversionResult(
        entry_id=entry.entry_id,
        label=label,
        x_index=entry.selected_index,
        y_index=y_index,
        candidate_scores=scores,
    )


def convert_gold_entry(
    entry: StoryEntry, backend=None, *, min_similarity: float | None = None
) -> ConversionResult:
    """Label for a gold entry: X from the input, Y by similarity argmax."""
    backend = backend if backend is not None else TokenF1Similarity()
    return _convert_rule(entry, entry.gold_specific, backend, min_similarity)


def convert_prediction(
    entry: StoryEntry,
    predicted_output: str,
    backend=None,
    *,
    vocabulary=DEFAULT_RELATIONS,
    min_similarity: float | None = None,
) -> ConversionResult:
    """Label for a model's raw output, trusted only for the rule text.

    The specific rule is the text before " ** " (the whole output when the
    separator is missing). X's index always comes from the entry, never from
    the predicted paraphrase. Raises NoRelationError when no connective is
    found; callers count those as unparseable.
    """
    backend = backend if backend is not None else TokenF1Similarity()
    specific_text = predicted_output.split(" ** ", 1)[0]
    rule = parse_specific_rule(specific_text, vocabulary)
    result = _convert_rule(entry, rule, backend, min_similarity)
    return result


class Cis2Converter(BaseEstimator):
    """Estimator wrapper around the conversion heuristic.

    ``fit`` prepares the similarity backend (for TF-IDF: fits the IDF table
    over every story sentence of the given entries); ``transform`` maps
    entries to ConversionResults in order.
    """

    def __init__(
        self,
        similarity: str = "token-f1",
        embeddings_path=None,
        min_similarity: float | None = None,
    ):
        self.similarity = similarity
        self.embeddings_path = embeddings_path
        self.min_similarity = min_similarity

    def fit(self, entries, y=None):
        backend = make_backend(self.similarity, embeddings_path=self.embeddings_path)
        if backend.kind == "tfidf":
            sentences = [s for entry in entries for s in entry.sentences]
            backend.fit(sentences)
        self.backend_ = backend
        return self

    def _backend(self):
        if not hasattr(self, "backend_"):
            backend = make_backend(self.similarity, embeddings_path=self.embeddings_path)
            if backend.kind == "tfidf":
                raise NotFittedError(
                    "Cis2Converter(similarity='tfidf') must be fitted before converting"
                )
            # Stateless backends need no corpus; build lazily.
            self.backend_ = backend
        return self.backend_

    def convert_entry(self, entry: StoryEntry) -> ConversionResult:
        return convert_gold_entry(entry, self._backend(), min_similarity=self.min_similarity)

    def convert_prediction(self, entry: StoryEntry, predicted_output: str) -> ConversionResult:
        return convert_prediction(
            entry,
            predicted_output,
            self._backend(),
            min_similarity=self.min_similarity,
        )

    def transform(self, entries) -> list[ConversionResult]:
        return [self.convert_entry(entry) for entry in entries]
