"""Reading task archives stored the MATLAB v7.3 way (HDF5 underneath).

The archives carry one struct array `sentenceData` per file. Following the
v7.3 conventions, strings are uint16 char-code matrices, struct-array fields
are object-reference arrays into a `#refs#` group, and numeric vectors are
float64 columns with NaN for absent values. Only the per-sentence word-level
summary fields are read (word content, fixation counts, total reading time);
raw gaze-sample streams are ignored.

`write_synthetic_archive` produces the same layout, so tests and demos can
build archives from known records without any corpus data.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

import h5py
import numpy as np

from . import IngestError

ARCHIVE_NAME = re.compile(r"^results([A-Za-z0-9]+)_(SR|NR|TSR)\.mat$")


class ArchiveReadError(IngestError):
    """The file is missing, not HDF5, or lacks the expected layout."""


@dataclass
class RawWord:
    text: str
    n_fixations: int
    total_duration_ms: float | None = None


@dataclass
class RawSentence:
    text: str
    words: list[RawWord] = field(default_factory=list)
    control_question: str | None = None
    target_words: list[str] | None = None


@dataclass
class Archive:
    subject: str
    task_tag: str
    sentences: list[RawSentence]


def parse_archive_name(filename: str) -> tuple[str, str] | None:
    """Subject and task tag from results<SUBJECT>_<TAG>.mat, else None."""
    m = ARCHIVE_NAME.match(filename)
    if not m:
        return None
    return m.group(1), m.group(2)


def _decode_chars(node) -> str:
    codes = np.asarray(node[()]).flatten()
    return "".join(chr(int(c)) for c in codes)


def _ref_list(f: h5py.File, dataset) -> list:
    return [f[r] for r in np.asarray(dataset[()]).flatten()]


def _float_column(group: h5py.Group, name: str) -> list[float]:
    if name not in group:
        return []
    return [float(v) for v in np.asarray(group[name][()]).flatten()]


def _read_words(f: h5py.File, word_group: h5py.Group) -> list[RawWord]:
    contents = [_decode_chars(node) for node in _ref_list(f, word_group["content"])]
    n_fix = _float_column(word_group, "nFixations")
    durations = _float_column(word_group, "TRT")
    words = []
    for i, text in enumerate(contents):
        raw_count = n_fix[i] if i < len(n_fix) else float("nan")
        count = 0 if np.isnan(raw_count) else int(raw_count)
        duration = durations[i] if i < len(durations) else float("nan")
        words.append(
            RawWord(
                text=text,
                n_fixations=count,
                total_duration_ms=None if np.isnan(duration) else float(duration),
            )
        )
    return words


def read_archive(path: str) -> Archive:
    """Load one task archive; raises ArchiveReadError on any layout problem."""
    parsed = parse_archive_name(os.path.basename(path))
    if parsed is None:
        raise ArchiveReadError(f"{path}: file name does not follow results<SUBJECT>_<TAG>.mat")
    subject, task_tag = parsed
    try:
        with h5py.File(path, "r") as f:
            if "sentenceData" not in f:
                raise ArchiveReadError(f"{path}: no sentenceData struct")
            data = f["sentenceData"]
            texts = [_decode_chars(node) for node in _ref_list(f, data["content"])]
            word_groups = _ref_list(f, data["word"])
            questions = (
                [_decode_chars(node) for node in _ref_list(f, data["controlQuestion"])]
                if "controlQuestion" in data
                else [""] * len(texts)
            )
            targets = (
                [_decode_chars(node) for node in _ref_list(f, data["targetWords"])]
                if "targetWords" in data
                else [""] * len(texts)
            )
            sentences = []
            for i, text in enumerate(texts):
                question = questions[i] if i < len(questions) else ""
                target = targets[i] if i < len(targets) else ""
                sentences.append(
                    RawSentence(
                        text=text,
                        words=_read_words(f, word_groups[i]) if i < len(word_groups) else [],
                        control_question=question or None,
                        target_words=[t.strip() for t in target.split(";") if t.strip()] or None,
                    )
                )
    except ArchiveReadError:
        raise
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise ArchiveReadError(f"{path}: {exc}") from exc
    return Archive(subject=subject, task_tag=task_tag, sentences=sentences)


class _RefPool:
    """Allocates uniquely named datasets inside #refs# and hands out refs."""

    def __init__(self, f: h5py.File):
        self.group = f.create_group("#refs#")
        self.counter = 0

    def _name(self) -> str:
        self.counter += 1
        return f"r{self.counter}"

    def chars(self, text: str):
        if text:
            codes = np.array([[ord(c)] for c in text], dtype=np.uint16)
        else:
            codes = np.zeros((0, 1), dtype=np.uint16)
        return self.group.create_dataset(self._name(), data=codes).ref

    def word_struct(self, words: list[RawWord]):
        g = self.group.create_group(self._name())
        g.create_dataset(
            "content", data=np.array([self.chars(w.text) for w in words], dtype=h5py.ref_dtype)
        )
        g.create_dataset(
            "nFixations",
            data=np.array(
                [[float("nan") if w.n_fixations == 0 else float(w.n_fixations)] for w in words]
            ).reshape(len(words), 1),
        )
        g.create_dataset(
            "TRT",
            data=np.array(
                [
                    [float("nan") if w.total_duration_ms is None else float(w.total_duration_ms)]
                    for w in words
                ]
            ).reshape(len(words), 1),
        )
        return g.ref


def write_synthetic_archive(path: str, sentences: list[RawSentence]) -> None:
    """Write a task archive in the same layout read_archive() expects."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with h5py.File(path, "w") as f:
        pool = _RefPool(f)
        data = f.create_group("sentenceData")
        data.create_dataset(
            "content", data=np.array([pool.chars(s.text) for s in sentences], dtype=h5py.ref_dtype)
        )
        data.create_dataset(
            "word",
            data=np.array([pool.word_struct(s.words) for s in sentences], dtype=h5py.ref_dtype),
        )
        data.create_dataset(
            "controlQuestion",
            data=np.array(
                [pool.chars(s.control_question or "") for s in sentences], dtype=h5py.ref_dtype
            ),
        )
        data.create_dataset(
            "targetWords",
            data=np.array(
                [pool.chars("; ".join(s.target_words or [])) for s in sentences],
                dtype=h5py.ref_dtype,
            ),
        )
