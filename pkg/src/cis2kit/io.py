"""File formats: canonical JSON-lines entries, CSV import, label files.

All files are UTF-8 and newline-delimited. The canonical entry format is one
JSON object per line with the fields entry_id, sentences (5-element array),
selected_index, dimension, specific, general.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor

from .errors import LabelSyntaxError, IndexOutOfRangeError, SelfLoopError, ToolkitError, ValidationError
from .labels import Cis2Label, parse_label
from .records import (
    DEFAULT_RELATIONS,
    SELECTED_MATCH_THRESHOLD,
    StoryEntry,
    parse_glucose_record,
)

UNPARSEABLE_LABEL = "<unparseable>"

DEFAULT_COLUMN_MAP = {
    "entry_id": "entry_id",
    "story": "story",
    "selected": "selected_sentence",
    "dimension": "dimension",
    "specific": "specific_rule",
    "general": "general_rule",
}

_COLUMN_KEYS = tuple(DEFAULT_COLUMN_MAP)


def parse_column_map(pairs) -> dict[str, str]:
    """Build a column map from key=value strings, on top of the defaults."""
    column_map = dict(DEFAULT_COLUMN_MAP)
    for pair in pairs:
        key, sep, value = pair.partition("=")
        key = key.strip()
        if not sep or not key or not value.strip():
            raise ValidationError(f"column mapping must be key=value, got {pair!r}")
        if key not in _COLUMN_KEYS:
            raise ValidationError(f"unknown column key {key!r} (choose from {_COLUMN_KEYS})")
        column_map[key] = value.strip()
    return column_map


def read_column_map_file(path) -> dict[str, str]:
    """key=value lines; blank lines and # comments ignored."""
    pairs = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line and not line.startswith("#"):
                pairs.append(line)
    return parse_column_map(pairs)


def iter_jsonl(path):
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if line.strip():
                yield line_no, json.loads(line)


def read_entries(path, *, errors: list | None = None, strict: bool = True):
    """Load canonical entries; invalid lines raise or are collected."""
    entries = []
    for line_no, obj in iter_jsonl(path):
        try:
            entries.append(StoryEntry.from_json(obj))
        except ToolkitError as exc:
            if strict:
                raise
            if errors is not None:
                errors.append((line_no, exc))
    return entries


def write_entries(path, entries) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for entry in entries:
            handle.write(json.dumps(entry.to_json(), ensure_ascii=False) + "\n")
            count += 1
    return count


def import_csv(
    path,
    column_map=None,
    *,
    errors: list | None = None,
    strict: bool = False,
    vocabulary=DEFAULT_RELATIONS,
    threshold: float = SELECTED_MATCH_THRESHOLD,
):
    """Parse a header-based CSV into validated entries.

    Rows that fail to parse are collected into ``errors`` (with their row
    number) unless ``strict``, in which case the first failure raises.
    """
    column_map = column_map or DEFAULT_COLUMN_MAP
    entries = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row_no, row in enumerate(reader, start=1):
            try:
                entries.append(
                    parse_glucose_record(
                        row,
                        column_map,
                        entry_id=f"row{row_no:06d}",
                        vocabulary=vocabulary,
                        threshold=threshold,
                    )
                )
            except ToolkitError as exc:
                if strict:
                    raise
                if errors is not None:
                    errors.append((row_no, exc))
    return entries


def read_labels(path, *, relations=None):
    """Read one label per line; unparseable lines become None (and count).

    Returns (labels, n_unparseable). Blank lines are preserved as None so
    line alignment with the entries file survives.
    """
    labels: list[Cis2Label | None] = []
    n_unparseable = 0
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            text = line.rstrip("\n")
            try:
                if relations is None:
                    labels.append(parse_label(text))
                else:
                    labels.append(parse_label(text, relations))
            except (LabelSyntaxError, IndexOutOfRangeError, SelfLoopError):
                labels.append(None)
                n_unparseable += 1
    return labels, n_unparseable


def write_labels(path, labels) -> int:
    """Write labels one per line; None becomes the unparseable placeholder."""
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for label in labels:
            handle.write((label.render() if label is not None else UNPARSEABLE_LABEL) + "\n")
            count += 1
    return count


def read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as handle:
        return [line.rstrip("\n") for line in handle]


def write_jsonl(path, objects) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for obj in objects:
            handle.write(json.dumps(obj, ensure_ascii=False) + "\n")
            count += 1
    return count


def ordered_parallel_map(fn, items, threads: int = 1) -> list:
    """Map preserving input order; thread count never changes the result."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
