"""Render entries into the five diagnostic task formats.

Every task shares the same target (specific rule ** general rule) except the
sentence-selection task, whose target is the converted three-token label.
Inputs vary: the full story with X marked, only the pre-context, the story
with X masked, or the pre-context plus X.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator, TransformerMixin

from .convert import Cis2Converter
from .errors import ToolkitError
from .records import StoryEntry

MASK_TOKEN = "<masked>"


class TaskKind(enum.Enum):
    ORIGINAL = "original"
    HISTORY = "history"
    MASK_X = "mask-x"
    HISTORY_X = "history-x"
    CIS2 = "cis2"

    @classmethod
    def from_slug(cls, slug: str) -> "TaskKind":
        for kind in cls:
            if kind.value == slug:
                return kind
        raise ValueError(f"unknown task {slug!r} (choose from {[k.value for k in cls]})")


@dataclass(frozen=True)
class TaskSample:
    """One rendered (input, target) pair."""

    entry_id: str
    task: TaskKind
    input_text: str
    target_text: str
    dimension: int

    def to_json(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "task": self.task.value,
            "input_text": self.input_text,
            "target_text": self.target_text,
            "dimension": self.dimension,
        }


@dataclass
class DropReport:
    """Counts of entries dropped per reason while building a dataset."""

    total: int = 0
    kept: int = 0
    dropped: dict = field(default_factory=dict)

    def drop(self, reason: str) -> None:
        self.dropped[reason] = self.dropped.get(reason, 0) + 1

    def to_json(self) -> dict:
        return {"total": self.total, "kept": self.kept, "dropped": dict(sorted(self.dropped.items()))}


def render_input(entry: StoryEntry, task: TaskKind, *, mask_x_dimension_prefix: bool = True) -> str:
    """Input text for one entry and task.

    The dimension digit prefixes every input; for the masked task this is
    configurable because presentations of that task differ on it.
    """
    x = entry.selected_index
    pre = list(entry.sentences[:x])
    post = list(entry.sentences[x + 1:])
    marked = f"* {entry.sentences[x]} *"
    prefix = f"{entry.dimension}:"

    if task in (TaskKind.ORIGINAL, TaskKind.CIS2):
        parts = [prefix] + pre + [marked] + post
    elif task == TaskKind.HISTORY:
        parts = [prefix] + pre
    elif task == TaskKind.HISTORY_X:
        parts = [prefix] + pre + [marked]
    elif task == TaskKind.MASK_X:
        parts = ([prefix] if mask_x_dimension_prefix else []) + pre + [MASK_TOKEN] + post
    else:
        raise ValueError(f"unknown task {task!r}")
    return " ".join(parts)


def render_target(entry: StoryEntry, task: TaskKind, converter: Cis2Converter | None = None) -> str:
    """Target text: "specific ** general", or the label for the selection task."""
    if task == TaskKind.CIS2:
        converter = converter if converter is not None else Cis2Converter()
        return converter.convert_entry(entry).label.render()
    return f"{entry.gold_specific.text()} ** {entry.gold_general.text()}"


def render_sample(
    entry: StoryEntry,
    task: TaskKind,
    converter: Cis2Converter | None = None,
    *,
    mask_x_dimension_prefix: bool = True,
) -> TaskSample:
    return TaskSample(
        entry_id=entry.entry_id,
        task=task,
        input_text=render_input(entry, task, mask_x_dimension_prefix=mask_x_dimension_prefix),
        target_text=render_target(entry, task, converter),
        dimension=entry.dimension,
    )


def build_dataset(
    entries,
    task: TaskKind,
    converter: Cis2Converter | None = None,
    *,
    mask_x_dimension_prefix: bool = True,
    strict: bool = False,
    errors: list | None = None,
) -> tuple[list[TaskSample], DropReport]:
    """Render a corpus, applying the per-task drop rules.

    The pre-context-plus-X task drops entries whose X is the last sentence
    (its input would repeat the full-story input). Rendering errors are
    collected per entry and counted, not fatal, unless ``strict``.
    """
    if task == TaskKind.CIS2 and converter is None:
        converter = Cis2Converter()
    report = DropReport()
    samples: list[TaskSample] = []
    for entry in entries:
        report.total += 1
        if task == TaskKind.HISTORY_X and entry.selected_index == 4:
            report.drop("x_is_last")
            continue
        try:
            sample = render_sample(
                entry, task, converter, mask_x_dimension_prefix=mask_x_dimension_prefix
            )
        except ToolkitError as exc:
            if exc.entry_id is None:
                exc.entry_id = entry.entry_id
            if strict:
                raise
            report.drop("conversion_error" if task == TaskKind.CIS2 else "render_error")
            if errors is not None:
                errors.append(exc)
            continue
        samples.append(sample)
        report.kept += 1
    return samples, report


class TaskFormatter(BaseEstimator, TransformerMixin):
    """Transformer over entries; the last build's DropReport lands on ``drop_report_``."""

    def __init__(
        self,
        task: str = "original",
        similarity: str = "token-f1",
        embeddings_path=None,
        mask_x_dimension_prefix: bool = True,
    ):
        self.task = task
        self.similarity = similarity
        self.embeddings_path = embeddings_path
        self.mask_x_dimension_prefix = mask_x_dimension_prefix

    def fit(self, entries, y=None):
        kind = TaskKind.from_slug(self.task)
        converter = None
        if kind == TaskKind.CIS2:
            converter = Cis2Converter(
                similarity=self.similarity, embeddings_path=self.embeddings_path
            )
            converter.fit(entries)
        self.task_kind_ = kind
        self.converter_ = converter
        return self

    def transform(self, entries) -> list[TaskSample]:
        if not hasattr(self, "task_kind_"):
            raise ValueError("TaskFormatter.transform called before fit")
        samples, report = build_dataset(
            entries,
            self.task_kind_,
            self.converter_,
            mask_x_dimension_prefix=self.mask_x_dimension_prefix,
        )
        self.drop_report_ = report
        return samples


def split_train_dev(items, dev_fraction: float, seed: int) -> tuple[list, list]:
    """Seeded random split preserving input order within each side."""
    if not 0.0 <= dev_fraction <= 1.0:
        raise ValueError(f"dev_fraction {dev_fraction} outside [0, 1]")
    items = list(items)
    indices = list(range(len(items)))
    rng = random.Random(seed)
    rng.shuffle(indices)
    n_dev = round(len(items) * dev_fraction)
    dev_set = set(indices[:n_dev])
    train = [item for i, item in enumerate(items) if i not in dev_set]
    dev = [item for i, item in enumerate(items) if i in dev_set]
    return train, dev
