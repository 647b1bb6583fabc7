"""Turning task archives into the canonical sentences/fixations bundle.

One pass over the archives (sorted by filename) builds a deduplicated
sentence list plus per-word fixation records. Sentences are deduplicated
across subjects by exact text identity; the first occurrence assigns the
sentence_id and keeps its task, control question, and target words.

word_index is defined against the canonical tokenization of the sentence
text. Archive words are whitespace chunks, so each chunk consumes as many
tokens as it tokenizes to and a fixation lands on the chunk's first token.
Chunks whose concatenated tokens disagree with the sentence tokenization,
and fixated chunks carrying no token at all (bare punctuation), are dropped
and logged rather than emitted inconsistent.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from . import IngestError
from .matfile import Archive, ArchiveReadError, parse_archive_name, read_archive
from .tokens import tokenize

TASK_BY_TAG = {"SR": "task1", "TSR": "task3"}  # NR splits per sentence below

SENTENCES_FILE = "sentences.jsonl"
FIXATIONS_FILE = "fixations.jsonl"
LOG_FILE = "conversion_log.json"


class ConvertError(IngestError):
    """No usable archives, or the output could not be written."""


@dataclass
class CanonicalBundle:
    out_dir: str
    sentences: list[dict]
    fixations: list[dict]
    log: dict

    @property
    def sentences_path(self) -> str:
        return os.path.join(self.out_dir, SENTENCES_FILE)

    @property
    def fixations_path(self) -> str:
        return os.path.join(self.out_dir, FIXATIONS_FILE)

    @property
    def log_path(self) -> str:
        return os.path.join(self.out_dir, LOG_FILE)


@dataclass
class _SentenceTable:
    by_text: dict[str, dict] = field(default_factory=dict)
    serial_by_task: dict[str, int] = field(default_factory=dict)
    records: list[dict] = field(default_factory=list)

    def intern(self, text: str, task: str, question: str | None, targets: list[str] | None) -> str:
        if text in self.by_text:
            return self.by_text[text]["sentence_id"]
        serial = self.serial_by_task.get(task, 0) + 1
        self.serial_by_task[task] = serial
        record: dict = {"sentence_id": f"{task}_{serial:04d}", "task": task, "text": text}
        if question:
            record["control_question"] = question
        if targets:
            record["target_words"] = targets
        self.by_text[text] = record
        self.records.append(record)
        return record["sentence_id"]


def _task_for(tag: str, control_question: str | None) -> str:
    if tag == "NR":
        return "task2_with_questions" if control_question else "task2_without_questions"
    return TASK_BY_TAG[tag]


def _word_indexes(text: str, chunks: list[str]) -> list[int | None] | None:
    """First-token index per chunk, or None when the tokenizations disagree.

    A chunk with no tokens of its own gets index None (nothing to land on).
    """
    sentence_tokens = tokenize(text)
    indexes: list[int | None] = []
    cursor = 0
    for chunk in chunks:
        chunk_tokens = tokenize(chunk)
        if not chunk_tokens:
            indexes.append(None)
            continue
        if sentence_tokens[cursor : cursor + len(chunk_tokens)] != chunk_tokens:
            return None
        indexes.append(cursor)
        cursor += len(chunk_tokens)
    if cursor != len(sentence_tokens):
        return None
    return indexes


def convert_dataset(source_dir: str, out_dir: str) -> CanonicalBundle:
    """Convert every readable archive under source_dir; write the bundle."""
    if not os.path.isdir(source_dir):
        raise ConvertError(f"source directory not found: {source_dir}")
    names = sorted(n for n in os.listdir(source_dir) if parse_archive_name(n))
    if not names:
        raise ConvertError(f"no task archives (results<SUBJECT>_<TAG>.mat) in {source_dir}")

    archives: list[tuple[str, Archive]] = []
    skipped: list[dict] = []
    for name in names:
        try:
            archives.append((name, read_archive(os.path.join(source_dir, name))))
        except ArchiveReadError as exc:
            skipped.append({"file": name, "error": str(exc)})
    if not archives:
        raise ConvertError(f"no readable archives in {source_dir} ({len(skipped)} skipped)")

    table = _SentenceTable()
    fixations: list[dict] = []
    drops: list[dict] = []
    per_archive: list[dict] = []
    words_read_total = 0
    dropped_total = 0

    for name, archive in archives:
        emitted = 0
        read_here = 0
        for raw in archive.sentences:
            task = _task_for(archive.task_tag, raw.control_question)
            sentence_id = table.intern(raw.text, task, raw.control_question, raw.target_words)
            fixated = [w for w in raw.words if w.n_fixations > 0]
            read_here += len(fixated)
            indexes = _word_indexes(raw.text, [w.text for w in raw.words])
            if indexes is None:
                if fixated:
                    drops.append(
                        {
                            "file": name,
                            "sentence_id": sentence_id,
                            "reason": "word chunks disagree with sentence tokenization",
                            "records": len(fixated),
                        }
                    )
                    dropped_total += len(fixated)
                continue
            for word, index in zip(raw.words, indexes):
                if word.n_fixations <= 0:
                    continue
                if index is None:
                    drops.append(
                        {
                            "file": name,
                            "sentence_id": sentence_id,
                            "reason": f"fixated chunk {word.text!r} carries no token",
                            "records": 1,
                        }
                    )
                    dropped_total += 1
                    continue
                record = {
                    "subject_id": archive.subject,
                    "sentence_id": sentence_id,
                    "word_index": index,
                    "word": word.text,
                    "n_fixations": word.n_fixations,
                }
                if word.total_duration_ms is not None:
                    record["total_duration_ms"] = word.total_duration_ms
                fixations.append(record)
                emitted += 1
        per_archive.append(
            {
                "file": name,
                "subject": archive.subject,
                "task_tag": archive.task_tag,
                "sentences": len(archive.sentences),
                "fixated_words_read": read_here,
                "records_emitted": emitted,
            }
        )
        words_read_total += read_here

    log = {
        "source_field": "nFixations",
        "archives": per_archive,
        "skipped": skipped,
        "drops": drops,
        "totals": {
            "sentences": len(table.records),
            "fixation_records": len(fixations),
            "fixated_words_read": words_read_total,
            "records_dropped": dropped_total,
        },
    }

    os.makedirs(out_dir, exist_ok=True)
    bundle = CanonicalBundle(out_dir=out_dir, sentences=table.records, fixations=fixations, log=log)
    _write_jsonl(bundle.sentences_path, table.records)
    _write_jsonl(bundle.fixations_path, fixations)
    with open(bundle.log_path, "w", encoding="utf-8") as fh:
        json.dump(log, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    return bundle


def _write_jsonl(path: str, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
