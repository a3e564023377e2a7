"""Interchangeable sentence-similarity backends.

All backends expose ``similarity(a, b)`` and follow sklearn estimator
conventions (``fit`` returns self, constructor args are inspectable via
``get_params``) so they can be swapped and cloned. Token-F1 and TF-IDF
cosine run with no external resources; embedding cosine reads a precomputed
table so the toolkit never loads an encoder itself.
"""

from __future__ import annotations

import json
import math
import os
from collections import Counter
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import (
    DimensionMismatchError,
    DuplicateKeyError,
    EmbeddingMissError,
    EmptyCorpusError,
    FormatError,
)
from .normalize import match_tokens, normalize, token_f1

BACKEND_KINDS = ("token-f1", "tfidf", "embedding")


@dataclass(frozen=True)
class IdfTable:
    """Smoothed inverse document frequencies over normalized unigrams."""

    weights: dict
    n_documents: int

    def idf(self, token: str) -> float:
        # Unseen tokens get the df=0 smoothed weight.
        default = math.log((1 + self.n_documents) / 1.0) + 1.0
        return self.weights.get(token, default)


def fit_idf(corpus) -> IdfTable:
    """idf(t) = ln((1+N) / (1+df(t))) + 1 over normalized unigrams."""
    df = Counter()
    n_documents = 0
    for sentence in corpus:
        n_documents += 1
        df.update(set(match_tokens(sentence)))
    if n_documents == 0:
        raise EmptyCorpusError("cannot fit IDF on an empty corpus")
    weights = {
        token: math.log((1 + n_documents) / (1 + count)) + 1.0 for token, count in df.items()
    }
    return IdfTable(weights=weights, n_documents=n_documents)


@dataclass(frozen=True)
class EmbeddingTable:
    """Exact sentence string -> unit-norm vector, all of one dimension."""

    vectors: dict
    dim: int

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, text: str) -> bool:
        return text in self.vectors

    def vector(self, text: str) -> np.ndarray:
        try:
            return self.vectors[text]
        except KeyError:
            raise EmbeddingMissError(text) from None


def load_embedding_table(path) -> EmbeddingTable:
    """Load a JSON-lines embedding table ({"text": ..., "vector": [...]}).

    Vectors are renormalized to unit L2 norm; mixed dimensions and duplicate
    keys are rejected.
    """
    vectors: dict = {}
    dim = None
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc.msg}", line_no=line_no) from None
            if not isinstance(obj, dict) or "text" not in obj or "vector" not in obj:
                raise FormatError('expected {"text": ..., "vector": [...]}', line_no=line_no)
            text = obj["text"]
            raw = obj["vector"]
            if not isinstance(text, str):
                raise FormatError("text must be a string", line_no=line_no)
            if (
                not isinstance(raw, list)
                or not raw
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)
            ):
                raise FormatError("vector must be a non-empty list of numbers", line_no=line_no)
            if dim is None:
                dim = len(raw)
            elif len(raw) != dim:
                raise DimensionMismatchError(
                    f"line {line_no}: vector has dimension {len(raw)}, table has {dim}"
                )
            if text in vectors:
                raise DuplicateKeyError(f"line {line_no}: duplicate key {text!r}")
            vector = np.asarray(raw, dtype=np.float64)
            norm = float(np.linalg.norm(vector))
            if norm == 0.0:
                raise FormatError("zero vector cannot be normalized", line_no=line_no)
            vectors[text] = vector / norm
    if dim is None:
        raise FormatError(f"no embedding rows in {os.fspath(path)!r}")
    return EmbeddingTable(vectors=vectors, dim=dim)


class TokenF1Similarity(BaseEstimator):
    """Unigram-overlap F1 on normalized tokens. Stateless; fit is a no-op."""

    kind = "token-f1"

    def fit(self, sentences=None, y=None):
        return self

    def similarity(self, a: str, b: str) -> float:
        return token_f1(a, b)


class TfidfCosineSimilarity(BaseEstimator):
    """Cosine over TF-IDF bags. Fit the IDF table before scoring.

    The IDF is fitted once over all story sentences of the split being
    processed so candidate rankings are stable across entries.
    """

    kind = "tfidf"

    def __init__(self, idf_table: IdfTable | None = None):
        self.idf_table = idf_table

    def fit(self, sentences, y=None):
        self.idf_table_ = fit_idf(sentences)
        return self

    def _table(self) -> IdfTable:
        fitted = getattr(self, "idf_table_", None) or self.idf_table
        if fitted is None:
            raise NotFittedError(
                "TfidfCosineSimilarity must be fitted (or given idf_table) before scoring"
            )
        return fitted

    def _vector(self, text: str, table: IdfTable) -> dict:
        counts = Counter(match_tokens(text))
        return {token: count * table.idf(token) for token, count in counts.items()}

    def similarity(self, a: str, b: str) -> float:
        table = self._table()
        va = self._vector(a, table)
        vb = self._vector(b, table)
        if not va or not vb:
            # Token-free strings: equal-after-normalization counts as identical.
            return 1.0 if (not va and not vb and normalize(a) == normalize(b)) else 0.0
        if va == vb:
            return 1.0
        # summing in sorted token order keeps the score exactly symmetric
        shared = sorted(set(va) & set(vb))
        dot = sum(va[t] * vb[t] for t in shared)
        if dot == 0.0:
            return 0.0
        norm_a = math.sqrt(sum(w * w for w in va.values()))
        norm_b = math.sqrt(sum(w * w for w in vb.values()))
        return dot / (norm_a * norm_b)


class EmbeddingCosineSimilarity(BaseEstimator):
    """Cosine between precomputed unit-norm sentence vectors."""

    kind = "embedding"

    def __init__(self, table: EmbeddingTable | None = None):
        self.table = table

    def fit(self, sentences=None, y=None):
        return self

    def similarity(self, a: str, b: str) -> float:
        if self.table is None:
            raise NotFittedError("EmbeddingCosineSimilarity needs an embedding table")
        return float(np.dot(self.table.vector(a), self.table.vector(b)))


def similarity(backend, a: str, b: str) -> float:
    """Score two sentences with the given backend."""
    return backend.similarity(a, b)


def make_backend(kind: str, *, embeddings_path=None):
    """Construct a backend by CLI name; tfidf still needs fitting."""
    if kind == "token-f1":
        return TokenF1Similarity()
    if kind == "tfidf":
        return TfidfCosineSimilarity()
    if kind == "embedding":
        if embeddings_path is None:
            raise ValueError("embedding backend requires an embeddings path")
        return EmbeddingCosineSimilarity(table=load_embedding_table(embeddings_path))
    raise ValueError(f"unknown similarity backend {kind!r} (choose from {BACKEND_KINDS})")
