"""Command-line pipelines.

Subcommands: import, build-task, convert, eval-bleu, eval-cis2, baseline,
enumerate-labels. Exit codes: 0 success, 1 data errors (after a per-entry
error log on stderr), 2 usage errors. All randomness flows from an explicit
--seed; reruns with identical inputs and flags are byte-identical, and
--threads changes wall time only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io as kio
from .convert import Cis2Converter
from .errors import ToolkitError
from .labels import (
    DIMENSION_RELATION_TOKENS,
    enumerate_label_space,
    load_dimension_relations,
)
from .metrics import (
    EvalReport,
    evaluate_generation,
    exact_match_accuracy,
    format_generation_table,
    random_baseline,
)
from .records import DEFAULT_RELATIONS, SELECTED_MATCH_THRESHOLD
from .tasks import DropReport, TaskKind, render_sample

DEFAULT_SEED = 13
RELATIONS_FILE_ENV = "CIS2KIT_RELATIONS_FILE"


def _log_errors(errors) -> None:
    for item in errors:
        if isinstance(item, tuple):
            line_no, exc = item
            print(f"error: line {line_no}: {exc}", file=sys.stderr)
        else:
            print(f"error: {item}", file=sys.stderr)


def _print_json(obj) -> None:
    print(json.dumps(obj, ensure_ascii=False))


def cmd_import(args) -> int:
    column_map = (
        kio.read_column_map_file(args.column_map_file)
        if args.column_map_file
        else dict(kio.DEFAULT_COLUMN_MAP)
    )
    if args.col:
        overrides = kio.parse_column_map(args.col)
        column_map.update(overrides)
    vocabulary = DEFAULT_RELATIONS + tuple(args.relation or ())
    errors: list = []
    entries = kio.import_csv(
        args.input,
        column_map,
        errors=errors,
        strict=args.strict,
        vocabulary=vocabulary,
        threshold=args.match_threshold,
    )
    kio.write_entries(args.output, entries)
    _log_errors(errors)
    _print_json({"imported": len(entries), "errors": len(errors)})
    return 1 if errors else 0


def _load_converter(args, entries) -> Cis2Converter:
    converter = Cis2Converter(
        similarity=args.similarity,
        embeddings_path=args.embeddings,
        min_similarity=getattr(args, "min_similarity", None),
    )
    converter.fit(entries)
    return converter


def cmd_build_task(args) -> int:
    task = TaskKind.from_slug(args.task)
    entries = kio.read_entries(args.input)
    converter = _load_converter(args, entries) if task == TaskKind.CIS2 else None
    errors: list = []
    samples = []
    report = DropReport()
    candidates = []
    for entry in entries:
        report.total += 1
        if task == TaskKind.HISTORY_X and entry.selected_index == 4:
            report.drop("x_is_last")
            continue
        candidates.append(entry)

    def safe_render(entry):
        try:
            return (
                "ok",
                render_sample(
                    entry, task, converter, mask_x_dimension_prefix=args.mask_x_dimension_prefix
                ),
            )
        except ToolkitError as exc:
            if exc.entry_id is None:
                exc.entry_id = entry.entry_id
            return ("err", exc)

    outcomes = kio.ordered_parallel_map(safe_render, candidates, threads=args.threads)
    for status, value in outcomes:
        if status == "ok":
            samples.append(value)
            report.kept += 1
        else:
            if args.strict:
                print(f"error: {value}", file=sys.stderr)
                return 1
            errors.append(value)
            report.drop("conversion_error" if task == TaskKind.CIS2 else "render_error")

    if args.format == "tsv":
        with open(args.output, "w", encoding="utf-8") as handle:
            for sample in samples:
                handle.write(f"{sample.input_text}\t{sample.target_text}\n")
    else:
        kio.write_jsonl(args.output, (s.to_json() for s in samples))
    _log_errors(errors)
    _print_json(report.to_json())
    return 1 if errors else 0


def cmd_convert(args) -> int:
    entries = kio.read_entries(args.input)
    converter = _load_converter(args, entries)
    rows: list[dict] = []
    labels: list = []
    errors: list = []
    unparseable = 0

    if args.predictions:
        predictions = kio.read_lines(args.predictions)
        if len(predictions) != len(entries):
            print(
                f"error: {len(predictions)} predictions for {len(entries)} entries",
                file=sys.stderr,
            )
            return 1
        work = list(zip(entries, predictions))

        def convert_one(pair):
            entry, predicted = pair
            try:
                return ("ok", converter.convert_prediction(entry, predicted))
            except ToolkitError as exc:
                if exc.entry_id is None:
                    exc.entry_id = entry.entry_id
                return ("unparseable", (entry, exc))

        outcomes = kio.ordered_parallel_map(convert_one, work, threads=args.threads)
        for status, value in outcomes:
            if status == "ok":
                rows.append(value.to_json())
                labels.append(value.label)
            else:
                entry, exc = value
                unparseable += 1
                rows.append({"entry_id": entry.entry_id, "label": None, "error": str(exc)})
                labels.append(None)
    else:

        def convert_one(entry):
            try:
                return ("ok", converter.convert_entry(entry))
            except ToolkitError as exc:
                if exc.entry_id is None:
                    exc.entry_id = entry.entry_id
                return ("err", (entry, exc))

        outcomes = kio.ordered_parallel_map(convert_one, entries, threads=args.threads)
        for status, value in outcomes:
            if status == "ok":
                rows.append(value.to_json())
                labels.append(value.label)
            else:
                entry, exc = value
                if args.strict:
                    print(f"error: {exc}", file=sys.stderr)
                    return 1
                errors.append(exc)
                rows.append({"entry_id": entry.entry_id, "label": None, "error": str(exc)})
                labels.append(None)

    kio.write_jsonl(args.output, rows)
    if args.labels_out:
        kio.write_labels(args.labels_out, labels)
    _log_errors(errors)
    _print_json(
        {
            "total": len(entries),
            "converted": sum(1 for l in labels if l is not None),
            "unparseable": unparseable,
            "errors": len(errors),
        }
    )
    return 1 if errors else 0


def cmd_eval_bleu(args) -> int:
    entries = kio.read_entries(args.entries)
    hypotheses = kio.read_lines(args.predictions)
    if len(hypotheses) != len(entries):
        print(
            f"error: {len(hypotheses)} predictions for {len(entries)} entries", file=sys.stderr
        )
        return 1
    samples = list(zip(entries, hypotheses))
    parts = ("specific", "general") if args.part == "both" else (args.part,)
    reports: dict[str, EvalReport] = {part: evaluate_generation(samples, part) for part in parts}
    table = format_generation_table(
        reports.get("specific"), reports.get("general"), model=args.model_name
    )
    print(table)
    payload = {part: report.to_json() for part, report in reports.items()}
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, ensure_ascii=False, indent=2)
            handle.write("\n")
    else:
        _print_json(payload)
    return 0


def cmd_eval_cis2(args) -> int:
    predicted, _ = kio.read_labels(args.predictions)
    reference, bad_refs = kio.read_labels(args.references)
    if bad_refs:
        print(f"error: {bad_refs} unparseable reference labels", file=sys.stderr)
        return 1
    dimensions = None
    if args.entries:
        entries = kio.read_entries(args.entries)
        if len(entries) != len(reference):
            print(
                f"error: {len(entries)} entries for {len(reference)} references", file=sys.stderr
            )
            return 1
        dimensions = [entry.dimension for entry in entries]
    try:
        accuracy, report = exact_match_accuracy(predicted, reference, dimensions)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"exact-match accuracy: {accuracy:.4f}")
    payload = {"accuracy": accuracy, **report.to_json()}
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, ensure_ascii=False, indent=2)
            handle.write("\n")
    else:
        _print_json(payload)
    return 0


def cmd_baseline(args) -> int:
    entries = kio.read_entries(args.entries)
    labels = random_baseline(entries, seed=args.seed)
    kio.write_labels(args.output, labels)
    _print_json({"n": len(labels), "seed": args.seed})
    return 0


def cmd_enumerate_labels(args) -> int:
    relations_file = args.relations_file or os.environ.get(RELATIONS_FILE_ENV)
    if relations_file:
        mapping = load_dimension_relations(relations_file)
    else:
        mapping = DIMENSION_RELATION_TOKENS
    relations = [mapping[d] for d in sorted(mapping)]
    for label in enumerate_label_space(relations):
        print(label.render())
    return 0


def _add_similarity_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--similarity",
        choices=("token-f1", "tfidf", "embedding"),
        default="token-f1",
        help="sentence-similarity backend for label conversion",
    )
    parser.add_argument("--embeddings", help="embedding table (JSON-lines) for --similarity embedding")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cis2kit",
        description="Build diagnostic story-rule datasets, convert rules to "
        "sentence-selection labels, and score model outputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="CSV to canonical JSON-lines entries")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--col", action="append", default=[], metavar="KEY=COLUMN")
    p.add_argument("--column-map-file")
    p.add_argument(
        "--relation",
        action="append",
        default=[],
        metavar="SURFACE",
        help="extra relation connectives on top of the defaults",
    )
    p.add_argument(
        "--match-threshold",
        type=float,
        default=SELECTED_MATCH_THRESHOLD,
        help="token-F1 floor for fuzzy selected-sentence matching",
    )
    p.add_argument("--strict", action="store_true", help="fail on the first bad row")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("build-task", help="render entries into a task dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument(
        "--task", required=True, choices=[k.value for k in TaskKind], help="task format"
    )
    p.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")
    p.add_argument(
        "--mask-x-dimension-prefix",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="include the dimension prefix in masked-task inputs",
    )
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--strict", action="store_true")
    _add_similarity_flags(p)
    p.set_defaults(func=cmd_build_task)

    p = sub.add_parser("convert", help="convert gold entries or predictions to labels")
    p.add_argument("--input", required=True, help="canonical entries (JSON-lines)")
    p.add_argument("--output", required=True, help="conversion results (JSON-lines)")
    p.add_argument("--predictions", help="raw model outputs, one line per entry")
    p.add_argument("--labels-out", help="also write canonical labels, one per line")
    p.add_argument("--min-similarity", type=float, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--strict", action="store_true")
    _add_similarity_flags(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("eval-bleu", help="per-dimension corpus BLEU of predictions")
    p.add_argument("--entries", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--part", choices=("specific", "general", "both"), default="both")
    p.add_argument("--json", help="write the JSON report here instead of stdout")
    p.add_argument("--model-name", default="model", help="row label for the table")
    p.set_defaults(func=cmd_eval_bleu)

    p = sub.add_parser("eval-cis2", help="exact-match accuracy of label files")
    p.add_argument("--predictions", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--entries", help="entries file for the per-dimension breakdown")
    p.add_argument("--json", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_eval_cis2)

    p = sub.add_parser("baseline", help="seeded uniform-random sentence-selection labels")
    p.add_argument("--entries", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("enumerate-labels", help="print the closed label space")
    p.add_argument(
        "--relations-file",
        help=f"JSON dimension->relation map (default: built-in, or ${RELATIONS_FILE_ENV})",
    )
    p.set_defaults(func=cmd_enumerate_labels)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
