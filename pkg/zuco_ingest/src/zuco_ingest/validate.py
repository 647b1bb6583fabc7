"""Schema, referential, and bounds checking for a converted bundle."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from . import IngestError
from .convert import FIXATIONS_FILE, SENTENCES_FILE
from .tokens import tokenize

TASKS = ("task1", "task2_with_questions", "task2_without_questions", "task3")


class BundleMissingError(IngestError):
    """The bundle directory or one of its files does not exist."""


@dataclass
class Violation:
    file: str
    line_no: int
    message: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line_no}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    sentences_checked: int = 0
    fixations_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def _iter_jsonl(path: str):
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if line:
                yield line_no, line


def _check_sentences(path: str, report: ValidationReport) -> dict[str, int]:
    """Returns token counts keyed by sentence_id for the bounds check."""
    token_counts: dict[str, int] = {}
    name = os.path.basename(path)
    for line_no, line in _iter_jsonl(path):
        report.sentences_checked += 1
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            report.violations.append(Violation(name, line_no, f"invalid JSON: {exc}"))
            continue
        if not isinstance(data, dict):
            report.violations.append(Violation(name, line_no, "line is not a JSON object"))
            continue
        problems = []
        sentence_id = data.get("sentence_id")
        if not isinstance(sentence_id, str) or not sentence_id:
            problems.append("sentence_id must be a non-empty string")
        elif sentence_id in token_counts:
            problems.append(f"duplicate sentence_id {sentence_id!r}")
        if data.get("task") not in TASKS:
            problems.append(f"task must be one of {TASKS}")
        text = data.get("text")
        if not isinstance(text, str) or not text:
            problems.append("text must be a non-empty string")
        if "control_question" in data and not isinstance(data["control_question"], str):
            problems.append("control_question must be a string")
        if "target_words" in data and (
            not isinstance(data["target_words"], list)
            or not all(isinstance(t, str) for t in data["target_words"])
        ):
            problems.append("target_words must be a list of strings")
        for problem in problems:
            report.violations.append(Violation(name, line_no, problem))
        if not problems:
            token_counts[sentence_id] = len(tokenize(text))
    return token_counts


def _check_fixations(path: str, token_counts: dict[str, int], report: ValidationReport) -> None:
    name = os.path.basename(path)
    for line_no, line in _iter_jsonl(path):
        report.fixations_checked += 1
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            report.violations.append(Violation(name, line_no, f"invalid JSON: {exc}"))
            continue
        if not isinstance(data, dict):
            report.violations.append(Violation(name, line_no, "line is not a JSON object"))
            continue
        problems = []
        for key in ("subject_id", "sentence_id", "word"):
            if not isinstance(data.get(key), str) or not data.get(key):
                problems.append(f"{key} must be a non-empty string")
        word_index = data.get("word_index")
        if not isinstance(word_index, int) or isinstance(word_index, bool) or word_index < 0:
            problems.append("word_index must be a non-negative integer")
            word_index = None
        n_fixations = data.get("n_fixations")
        if not isinstance(n_fixations, int) or isinstance(n_fixations, bool) or n_fixations < 0:
            problems.append("n_fixations must be a non-negative integer")
        if "total_duration_ms" in data and not isinstance(data["total_duration_ms"], (int, float)):
            problems.append("total_duration_ms must be a number")
        sentence_id = data.get("sentence_id")
        if isinstance(sentence_id, str) and sentence_id:
            if sentence_id not in token_counts:
                problems.append(f"unknown sentence_id {sentence_id!r}")
            elif word_index is not None and word_index >= token_counts[sentence_id]:
                problems.append(
                    f"word_index {word_index} out of range "
                    f"(sentence has {token_counts[sentence_id]} tokens)"
                )
        for problem in problems:
            report.violations.append(Violation(name, line_no, problem))


def validate_canonical(bundle_dir: str) -> ValidationReport:
    """Validate sentences.jsonl and fixations.jsonl in bundle_dir."""
    sentences_path = os.path.join(bundle_dir, SENTENCES_FILE)
    fixations_path = os.path.join(bundle_dir, FIXATIONS_FILE)
    for path in (sentences_path, fixations_path):
        if not os.path.isfile(path):
            raise BundleMissingError(f"bundle file not found: {path}")
    report = ValidationReport()
    token_counts = _check_sentences(sentences_path, report)
    _check_fixations(fixations_path, token_counts, report)
    return report
