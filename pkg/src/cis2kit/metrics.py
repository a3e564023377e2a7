"""Scoring: corpus BLEU with per-dimension reports, exact-match accuracy,
and the uniform random baseline for sentence-selection labels.

The BLEU kernel reproduces the standard WMT pipeline: 13a tokenization,
pooled clipped n-gram counts up to 4-grams with equal weights, exponential
smoothing for zero counts, and the exp(1 - r/c) brevity penalty. Scores are
on the 0-100 scale.
"""

from __future__ import annotations

import math
import random
import re
from collections import Counter
from dataclasses import dataclass, field

from .convert import make_label
from .errors import EmptyCorpusError, LengthMismatchError
from .labels import Cis2Label

_NGRAM_ORDER = 4
# Sentinel for log(0); large enough that exp() underflows to 0.
_LOG_ZERO = -9999999999

_13A_PUNCT = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
_13A_PERIOD_COMMA_BEFORE = re.compile(r"([^0-9])([\.,])")
_13A_PERIOD_COMMA_AFTER = re.compile(r"([\.,])([^0-9])")
_13A_DASH = re.compile(r"([0-9])(-)")
_13A_SPACES = re.compile(r"\s+")


def tokenize_13a(text: str) -> list[str]:
    """WMT 13a tokenization: pad punctuation except intra-numeric '.', ','."""
    norm = text
    norm = norm.replace("<skipped>", "")
    norm = norm.replace("-\n", "")
    norm = norm.replace("\n", " ")
    norm = norm.replace("&quot;", '"')
    norm = norm.replace("&amp;", "&")
    norm = norm.replace("&lt;", "<")
    norm = norm.replace("&gt;", ">")

    norm = f" {norm} "
    norm = _13A_PUNCT.sub(r" \1 ", norm)
    norm = _13A_PERIOD_COMMA_BEFORE.sub(r"\1 \2 ", norm)
    norm = _13A_PERIOD_COMMA_AFTER.sub(r" \1 \2", norm)
    norm = _13A_DASH.sub(r"\1 \2 ", norm)
    norm = _13A_SPACES.sub(" ", norm).strip()
    return norm.split() if norm else []


def _ngram_counts(tokens: list[str]) -> list[Counter]:
    counts = []
    for n in range(1, _NGRAM_ORDER + 1):
        grams = Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))
        counts.append(grams)
    return counts


def corpus_bleu(hypotheses: list[str], references: list[str]) -> float:
    """Corpus BLEU in [0, 100] against one reference per hypothesis."""
    if len(hypotheses) != len(references):
        raise LengthMismatchError(
            f"{len(hypotheses)} hypotheses vs {len(references)} references"
        )
    if not hypotheses:
        raise EmptyCorpusError("no hypothesis/reference pairs to score")

    correct = [0] * _NGRAM_ORDER
    total = [0] * _NGRAM_ORDER
    sys_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = tokenize_13a(hyp.rstrip())
        ref_tokens = tokenize_13a(ref.rstrip())
        sys_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        hyp_grams = _ngram_counts(hyp_tokens)
        ref_grams = _ngram_counts(ref_tokens)
        for n in range(_NGRAM_ORDER):
            for gram, count in hyp_grams[n].items():
                correct[n] += min(count, ref_grams[n].get(gram, 0))
                total[n] += count

    precisions = [0.0] * _NGRAM_ORDER
    smooth = 1.0
    for n in range(_NGRAM_ORDER):
        if total[n] == 0:
            break
        if correct[n] == 0:
            smooth *= 2
            precisions[n] = 100.0 / (smooth * total[n])
        else:
            precisions[n] = 100.0 * correct[n] / total[n]

    if sys_len < ref_len:
        brevity_penalty = math.exp(1 - ref_len / sys_len) if sys_len > 0 else 0.0
    else:
        brevity_penalty = 1.0

    log_sum = sum(math.log(p) if p > 0.0 else _LOG_ZERO for p in precisions)
    return brevity_penalty * math.exp(log_sum / _NGRAM_ORDER)


@dataclass
class EvalReport:
    """Per-dimension scores plus count-weighted and macro aggregates."""

    per_dimension: dict = field(default_factory=dict)
    n_entries: dict = field(default_factory=dict)
    avg_all: float | None = None
    avg_1_5: float | None = None
    avg_6_10: float | None = None
    macro_avg: float | None = None
    unparseable_count: int = 0

    def to_json(self) -> dict:
        return {
            "per_dimension": {str(d): s for d, s in sorted(self.per_dimension.items())},
            "n_entries": {str(d): n for d, n in sorted(self.n_entries.items())},
            "avg_all": self.avg_all,
            "avg_1_5": self.avg_1_5,
            "avg_6_10": self.avg_6_10,
            "macro_avg": self.macro_avg,
            "unparseable_count": self.unparseable_count,
        }


def _weighted_avg(report: EvalReport, dims) -> float | None:
    pairs = [(report.per_dimension[d], report.n_entries[d]) for d in dims if d in report.per_dimension]
    weight = sum(n for _, n in pairs)
    if weight == 0:
        return None
    return sum(score * n for score, n in pairs) / weight


def _fill_aggregates(report: EvalReport) -> EvalReport:
    dims = sorted(report.per_dimension)
    report.avg_all = _weighted_avg(report, dims)
    report.avg_1_5 = _weighted_avg(report, [d for d in dims if d <= 5])
    report.avg_6_10 = _weighted_avg(report, [d for d in dims if d >= 6])
    report.macro_avg = sum(report.per_dimension[d] for d in dims) / len(dims) if dims else None
    return report


def split_rule_parts(target_text: str) -> tuple[str, str, bool]:
    """(specific, general, had_separator); missing " ** " puts everything in specific."""
    if " ** " in target_text:
        specific, general = target_text.split(" ** ", 1)
        return specific, general, True
    return target_text, "", False


def evaluate_generation(samples, rule_part: str) -> EvalReport:
    """Per-dimension corpus BLEU of hypotheses against gold rule targets.

    ``samples`` yields (entry, hypothesis) pairs; ``rule_part`` picks the
    specific or general half of each target and hypothesis.
    """
    if rule_part not in ("specific", "general"):
        raise ValueError(f"rule_part must be 'specific' or 'general', got {rule_part!r}")
    grouped_hyp: dict[int, list[str]] = {}
    grouped_ref: dict[int, list[str]] = {}
    report = EvalReport()
    for entry, hypothesis in samples:
        hyp_specific, hyp_general, parsed = split_rule_parts(hypothesis)
        if not parsed:
            report.unparseable_count += 1
        hyp = hyp_specific if rule_part == "specific" else hyp_general
        ref = (
            entry.gold_specific.text() if rule_part == "specific" else entry.gold_general.text()
        )
        grouped_hyp.setdefault(entry.dimension, []).append(hyp)
        grouped_ref.setdefault(entry.dimension, []).append(ref)
    if not grouped_hyp:
        raise EmptyCorpusError("no samples to evaluate")
    for dimension in sorted(grouped_hyp):
        report.per_dimension[dimension] = corpus_bleu(
            grouped_hyp[dimension], grouped_ref[dimension]
        )
        report.n_entries[dimension] = len(grouped_hyp[dimension])
    return _fill_aggregates(report)


def exact_match_accuracy(
    predicted, reference, dimensions=None
) -> tuple[float, EvalReport]:
    """Fraction of positions where the full (a, REL, b) label matches.

    ``predicted`` may contain None for unparseable predictions; those count
    as mismatches. ``dimensions`` (optional, same length) enables the
    per-dimension breakdown.
    """
    predicted = list(predicted)
    reference = list(reference)
    if len(predicted) != len(reference):
        raise LengthMismatchError(f"{len(predicted)} predictions vs {len(reference)} references")
    if dimensions is not None:
        dimensions = list(dimensions)
        if len(dimensions) != len(predicted):
            raise LengthMismatchError(
                f"{len(dimensions)} dimensions vs {len(predicted)} predictions"
            )
    if not reference:
        raise EmptyCorpusError("no labels to score")

    report = EvalReport()
    hits: dict[int, int] = {}
    counts: dict[int, int] = {}
    matched_total = 0
    for i, (pred, ref) in enumerate(zip(predicted, reference)):
        if pred is None:
            report.unparseable_count += 1
            matched = False
        else:
            matched = (pred.a, pred.relation, pred.b) == (ref.a, ref.relation, ref.b)
        matched_total += matched
        if dimensions is not None:
            d = dimensions[i]
            counts[d] = counts.get(d, 0) + 1
            hits[d] = hits.get(d, 0) + matched
    accuracy = matched_total / len(reference)
    if dimensions is not None:
        for d in sorted(counts):
            report.per_dimension[d] = hits[d] / counts[d]
            report.n_entries[d] = counts[d]
        _fill_aggregates(report)
    else:
        report.avg_all = accuracy
    return accuracy, report


def random_baseline(entries, seed: int) -> list[Cis2Label]:
    """Uniform-random Y among the 4 non-X sentences; X and REL as in conversion."""
    rng = random.Random(seed)
    labels = []
    for entry in entries:
        y_index = rng.choice(entry.non_selected_indices())
        labels.append(
            make_label(
                entry.selected_index, y_index, entry.dimension, entry.gold_specific.relation
            )
        )
    return labels


def format_generation_table(
    specific: EvalReport | None, general: EvalReport | None, model: str = "model"
) -> str:
    """Aligned six-column table: spec, spec1-5, spec6-10, gen, gen1-5, gen6-10."""

    def cell(report: EvalReport | None, attr: str) -> str:
        value = getattr(report, attr) if report is not None else None
        return "n/a" if value is None else f"{value:.1f}"

    headers = ["model", "spec", "spec1-5", "spec6-10", "gen", "gen1-5", "gen6-10"]
    row = [
        model,
        cell(specific, "avg_all"),
        cell(specific, "avg_1_5"),
        cell(specific, "avg_6_10"),
        cell(general, "avg_all"),
        cell(general, "avg_1_5"),
        cell(general, "avg_6_10"),
    ]
    widths = [max(len(h), len(r)) for h, r in zip(headers, row)]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)),
        "  ".join(r.ljust(w) for r, w in zip(row, widths)),
    ]
    return "\n".join(lines)
