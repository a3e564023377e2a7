from __future__ import annotations

import csv
import json

import pytest

from cis2kit.cli import run
from cis2kit.io import read_entries, write_entries

from synth import entry_to_csv_row, make_corpus


def write_corpus(tmp_path, n=20, seed=61, cycle_x=False):
    entries = make_corpus(n, seed=seed, cycle_x=cycle_x)
    path = tmp_path / "entries.jsonl"
    write_entries(path, entries)
    return entries, path


class TestImportCommand:
    def test_import_csv(self, tmp_path, capsys):
        entries = make_corpus(6, seed=62)
        raw = tmp_path / "raw.csv"
        with open(raw, "w", encoding="utf-8", newline="") as handle:
            rows = [entry_to_csv_row(e) for e in entries]
            writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        out = tmp_path / "entries.jsonl"
        code = run(["import", "--input", str(raw), "--output", str(out)])
        assert code == 0
        summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert summary == {"imported": 6, "errors": 0}
        assert len(read_entries(out)) == 6

    def test_import_with_custom_relation_and_threshold(self, tmp_path, capsys):
        entries = make_corpus(2, seed=66)
        rows = [entry_to_csv_row(e) for e in entries]
        rows[0]["specific_rule"] = "left part >Sparks> right part"
        rows[0]["general_rule"] = "Someone_A does >Sparks> Someone_A gets"
        raw = tmp_path / "raw.csv"
        with open(raw, "w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        out = tmp_path / "entries.jsonl"
        assert run(["import", "--input", str(raw), "--output", str(out)]) == 1
        capsys.readouterr()
        code = run(
            [
                "import", "--input", str(raw), "--output", str(out),
                "--relation", ">Sparks>", "--match-threshold", "0.7",
            ]
        )
        assert code == 0
        assert json.loads(capsys.readouterr().out.strip())["imported"] == 2

    def test_import_reports_bad_rows(self, tmp_path, capsys):
        entries = make_corpus(3, seed=63)
        rows = [entry_to_csv_row(e) for e in entries]
        rows[1]["dimension"] = "0"
        raw = tmp_path / "raw.csv"
        with open(raw, "w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        out = tmp_path / "entries.jsonl"
        code = run(["import", "--input", str(raw), "--output", str(out)])
        captured = capsys.readouterr()
        assert code == 1
        assert "dimension" in captured.err
        assert json.loads(captured.out.strip())["imported"] == 2


class TestBuildTaskCommand:
    def test_history_x_drop_report(self, tmp_path, capsys):
        _, path = write_corpus(tmp_path, n=10, cycle_x=True)
        out = tmp_path / "samples.jsonl"
        code = run(["build-task", "--input", str(path), "--output", str(out), "--task", "history-x"])
        assert code == 0
        report = json.loads(capsys.readouterr().out.strip())
        assert report["dropped"] == {"x_is_last": 2}
        assert report["kept"] == 8
        assert len(out.read_text(encoding="utf-8").splitlines()) == 8

    def test_tsv_output(self, tmp_path, capsys):
        _, path = write_corpus(tmp_path, n=5)
        out = tmp_path / "samples.tsv"
        code = run(
            ["build-task", "--input", str(path), "--output", str(out), "--task", "original", "--format", "tsv"]
        )
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 5
        for line in lines:
            assert line.count("\t") == 1

    def test_mask_x_prefix_flag(self, tmp_path, capsys):
        _, path = write_corpus(tmp_path, n=4)
        with_prefix = tmp_path / "with.jsonl"
        without_prefix = tmp_path / "without.jsonl"
        run(["build-task", "--input", str(path), "--output", str(with_prefix), "--task", "mask-x"])
        run(
            [
                "build-task", "--input", str(path), "--output", str(without_prefix),
                "--task", "mask-x", "--no-mask-x-dimension-prefix",
            ]
        )
        first_with = json.loads(with_prefix.read_text(encoding="utf-8").splitlines()[0])
        first_without = json.loads(without_prefix.read_text(encoding="utf-8").splitlines()[0])
        assert first_with["input_text"].split(" ", 1)[1] == first_without["input_text"]
        assert first_with["input_text"].split(":", 1)[0].isdigit()

    def test_cis2_task_with_tfidf(self, tmp_path, capsys):
        _, path = write_corpus(tmp_path, n=8)
        out = tmp_path / "samples.jsonl"
        code = run(
            [
                "build-task", "--input", str(path), "--output", str(out),
                "--task", "cis2", "--similarity", "tfidf",
            ]
        )
        assert code == 0
        rows = [json.loads(l) for l in out.read_text(encoding="utf-8").splitlines()]
        assert all(row["target_text"].startswith("<s_") for row in rows)


class TestConvertCommand:
    def test_gold_conversion_with_labels_out(self, tmp_path, capsys):
        entries, path = write_corpus(tmp_path, n=12)
        out = tmp_path / "conv.jsonl"
        labels_out = tmp_path / "labels.txt"
        code = run(
            [
                "convert", "--input", str(path), "--output", str(out),
                "--labels-out", str(labels_out),
            ]
        )
        assert code == 0
        rows = [json.loads(l) for l in out.read_text(encoding="utf-8").splitlines()]
        assert [r["entry_id"] for r in rows] == [e.entry_id for e in entries]
        assert len(labels_out.read_text(encoding="utf-8").splitlines()) == 12

    def test_prediction_conversion_counts_unparseable(self, tmp_path, capsys):
        entries, path = write_corpus(tmp_path, n=4)
        preds = tmp_path / "preds.txt"
        lines = [f"{e.gold_specific.text()} ** {e.gold_general.text()}" for e in entries]
        lines[2] = "no connective at all"
        preds.write_text("\n".join(lines) + "\n", encoding="utf-8")
        out = tmp_path / "conv.jsonl"
        code = run(
            ["convert", "--input", str(path), "--output", str(out), "--predictions", str(preds)]
        )
        assert code == 0
        summary = json.loads(capsys.readouterr().out.strip())
        assert summary["unparseable"] == 1
        assert summary["converted"] == 3

    def test_threads_do_not_change_output(self, tmp_path, capsys):
        _, path = write_corpus(tmp_path, n=50, seed=64)
        out1 = tmp_path / "conv1.jsonl"
        out2 = tmp_path / "conv2.jsonl"
        assert run(["convert", "--input", str(path), "--output", str(out1), "--threads", "1"]) == 0
        assert run(["convert", "--input", str(path), "--output", str(out2), "--threads", "8"]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestEvalCommands:
    def test_eval_cis2_gold_vs_itself(self, tmp_path, capsys):
        entries, path = write_corpus(tmp_path, n=10)
        conv = tmp_path / "conv.jsonl"
        labels = tmp_path / "labels.txt"
        run(["convert", "--input", str(path), "--output", str(conv), "--labels-out", str(labels)])
        capsys.readouterr()
        code = run(
            [
                "eval-cis2", "--predictions", str(labels), "--references", str(labels),
                "--entries", str(path),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "accuracy: 1.0000" in out
        payload = json.loads(out.strip().splitlines()[-1])
        assert payload["accuracy"] == 1.0

    def test_eval_bleu_gold_predictions(self, tmp_path, capsys):
        entries, path = write_corpus(tmp_path, n=10)
        preds = tmp_path / "preds.txt"
        preds.write_text(
            "\n".join(f"{e.gold_specific.text()} ** {e.gold_general.text()}" for e in entries)
            + "\n",
            encoding="utf-8",
        )
        report_path = tmp_path / "report.json"
        code = run(
            [
                "eval-bleu", "--entries", str(path), "--predictions", str(preds),
                "--part", "both", "--json", str(report_path),
            ]
        )
        assert code == 0
        table = capsys.readouterr().out
        assert "spec1-5" in table
        payload = json.loads(report_path.read_text(encoding="utf-8"))
        assert payload["specific"]["avg_all"] == pytest.approx(100.0)
        assert payload["general"]["avg_all"] == pytest.approx(100.0)

    def test_eval_bleu_length_mismatch_exits_1(self, tmp_path, capsys):
        _, path = write_corpus(tmp_path, n=5)
        preds = tmp_path / "preds.txt"
        preds.write_text("only one line\n", encoding="utf-8")
        assert run(["eval-bleu", "--entries", str(path), "--predictions", str(preds)]) == 1


class TestBaselineCommand:
    def test_seeded_baseline_reproducible(self, tmp_path, capsys):
        _, path = write_corpus(tmp_path, n=30)
        out1 = tmp_path / "b1.txt"
        out2 = tmp_path / "b2.txt"
        assert run(["baseline", "--entries", str(path), "--output", str(out1), "--seed", "7"]) == 0
        assert run(["baseline", "--entries", str(path), "--output", str(out2), "--seed", "7"]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        out3 = tmp_path / "b3.txt"
        assert run(["baseline", "--entries", str(path), "--output", str(out3), "--seed", "8"]) == 0
        assert out1.read_bytes() != out3.read_bytes()


class TestEnumerateLabels:
    def test_default_space_has_200_lines(self, capsys):
        assert run(["enumerate-labels"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 200
        assert len(set(lines)) == 200

    def test_relations_file_override(self, tmp_path, capsys):
        mapping = tmp_path / "relations.json"
        mapping.write_text(json.dumps({"1": ">A>", "2": ">B>"}), encoding="utf-8")
        assert run(["enumerate-labels", "--relations-file", str(mapping)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 40

    def test_env_var_default_path(self, tmp_path, capsys, monkeypatch):
        mapping = tmp_path / "relations.json"
        mapping.write_text(json.dumps({"1": ">OnlyOne>"}), encoding="utf-8")
        monkeypatch.setenv("CIS2KIT_RELATIONS_FILE", str(mapping))
        assert run(["enumerate-labels"]) == 0
        assert len(capsys.readouterr().out.strip().splitlines()) == 20


class TestUsageErrors:
    def test_unknown_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as err:
            run(["definitely-not-a-command"])
        assert err.value.code == 2

    def test_missing_required_flag_exits_2(self):
        with pytest.raises(SystemExit) as err:
            run(["build-task", "--input", "x"])
        assert err.value.code == 2

    def test_missing_input_file_is_data_error(self, tmp_path, capsys):
        out = tmp_path / "out.jsonl"
        code = run(["convert", "--input", str(tmp_path / "nope.jsonl"), "--output", str(out)])
        assert code == 1
        assert "error" in capsys.readouterr().err
