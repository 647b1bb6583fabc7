"""On-disk formats: JSONL corpora, per-graph JSON files, CSV plot data.

All writes are atomic (temp file in the target directory, then rename) and
byte-deterministic: JSON is dumped with sorted keys and a trailing newline,
so re-running a command over identical inputs reproduces identical files.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
import tempfile
from typing import Any, Iterable, Sequence

from .fixations import FixationRecord
from .model import (
    ErrorReport,
    GazeGraphError,
    KnowledgeGraph,
    Sentence,
    graph_from_dict,
    graph_to_dict,
    sentence_from_dict,
)


class InputFormatError(GazeGraphError):
    """An input file failed schema validation; message carries the line number."""


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str, obj: Any) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write_text(path, buf.getvalue())


def sanitize_filename(name: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9._-]+", "_", name).strip("._")
    return cleaned or "unnamed"


def load_sentences(path: str) -> list[Sentence]:
    """Read sentences.jsonl strictly; any bad line aborts with its line number."""
    sentences: list[Sentence] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                sentence = sentence_from_dict(data)
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise InputFormatError(f"{path}:{line_no}: {exc}") from exc
            if sentence.sentence_id in seen:
                raise InputFormatError(f"{path}:{line_no}: duplicate sentence_id {sentence.sentence_id!r}")
            seen.add(sentence.sentence_id)
            sentences.append(sentence)
    return sentences


def graph_path(graphs_dir: str, sentence_id: str) -> str:
    return os.path.join(graphs_dir, f"{sanitize_filename(sentence_id)}.kg.json")


def save_graph(kg: KnowledgeGraph, error_report: ErrorReport | None, path: str) -> None:
    data = graph_to_dict(kg)
    data["error_report"] = error_report.as_dict() if error_report else {}
    write_json(path, data)


def load_graph(path: str) -> tuple[KnowledgeGraph, ErrorReport | None]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    kg = graph_from_dict(data)
    report_data = data.get("error_report") or {}
    report = None
    if report_data:
        report = ErrorReport(
            omitted=int(report_data.get("omitted", 0)),
            extra=int(report_data.get("extra", 0)),
            misspelled=int(report_data.get("misspelled", 0)),
        )
    return kg, report


def load_graphs_dir(graphs_dir: str) -> dict[str, tuple[KnowledgeGraph, ErrorReport | None]]:
    """All *.kg.json files keyed by sentence_id, in sorted filename order."""
    if not os.path.isdir(graphs_dir):
        raise GazeGraphError(f"graphs directory not found: {graphs_dir}")
    graphs: dict[str, tuple[KnowledgeGraph, ErrorReport | None]] = {}
    for name in sorted(os.listdir(graphs_dir)):
        if not name.endswith(".kg.json"):
            continue
        kg, report = load_graph(os.path.join(graphs_dir, name))
        graphs[kg.sentence_id] = (kg, report)
    return graphs


def load_fixations(path: str) -> tuple[list[FixationRecord], list[str]]:
    """Read fixations.jsonl tolerantly; bad lines become line-numbered warnings."""
    records: list[FixationRecord] = []
    problems: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                duration = data.get("total_duration_ms")
                records.append(
                    FixationRecord(
                        subject_id=str(data["subject_id"]),
                        sentence_id=str(data["sentence_id"]),
                        word_index=int(data["word_index"]),
                        word=str(data["word"]),
                        n_fixations=int(data["n_fixations"]),
                        total_duration_ms=None if duration is None else float(duration),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError, GazeGraphError) as exc:
                problems.append(f"{path}:{line_no}: {exc}")
    return records, problems
