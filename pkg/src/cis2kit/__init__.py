"""Toolkit for story-based causal rule corpora.

Parse annotated five-sentence stories, render them into diagnostic seq2seq
task formats, convert gold rules and model predictions into three-token
sentence-selection labels, and score outputs with per-dimension corpus BLEU
or exact-match accuracy.
"""

from .convert import Cis2Converter, ConversionResult, convert_gold_entry, convert_prediction
from .errors import ToolkitError
from .labels import (
    DEFAULT_LABEL_RELATIONS,
    DIMENSION_RELATION_TOKENS,
    Cis2Label,
    dimension_label_space,
    enumerate_label_space,
    parse_label,
)
from .metrics import (
    EvalReport,
    corpus_bleu,
    evaluate_generation,
    exact_match_accuracy,
    random_baseline,
    tokenize_13a,
)
from .records import (
    DEFAULT_RELATIONS,
    DimensionInfo,
    SpecificRule,
    StoryEntry,
    locate_selected_sentence,
    parse_glucose_record,
    parse_specific_rule,
    split_story_into_sentences,
)
from .similarity import (
    EmbeddingCosineSimilarity,
    EmbeddingTable,
    TfidfCosineSimilarity,
    TokenF1Similarity,
    fit_idf,
    load_embedding_table,
    similarity,
)
from .tasks import DropReport, TaskFormatter, TaskKind, TaskSample, build_dataset, render_input, render_target

__version__ = "0.1.0"

__all__ = [
    "Cis2Converter",
    "Cis2Label",
    "ConversionResult",
    "DEFAULT_LABEL_RELATIONS",
    "DEFAULT_RELATIONS",
    "DIMENSION_RELATION_TOKENS",
    "DimensionInfo",
    "DropReport",
    "EmbeddingCosineSimilarity",
    "EmbeddingTable",
    "EvalReport",
    "SpecificRule",
    "StoryEntry",
    "TaskFormatter",
    "TaskKind",
    "TaskSample",
    "TfidfCosineSimilarity",
    "TokenF1Similarity",
    "ToolkitError",
    "build_dataset",
    "convert_gold_entry",
    "convert_prediction",
    "corpus_bleu",
    "dimension_label_space",
    "enumerate_label_space",
    "evaluate_generation",
    "exact_match_accuracy",
    "fit_idf",
    "load_embedding_table",
    "locate_selected_sentence",
    "parse_glucose_record",
    "parse_label",
    "parse_specific_rule",
    "random_baseline",
    "render_input",
    "render_target",
    "similarity",
    "split_story_into_sentences",
    "tokenize_13a",
]
