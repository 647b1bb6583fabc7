"""Align word-level eye fixations with graph elements and compare importance classes.

Sentence tokens are claimed by node labels first (longest label wins, leftmost
occurrence), then by edge relations; leftover tokens fall into an explicit
unmapped bucket so no fixation is silently dropped. Per-subject statistics
treat each (sentence, node) fixation total as one observation, split by the
node's 0/1 importance; edges get a secondary split using derived importance
(an edge is important when both its endpoints are).
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .model import GazeGraphError, KnowledgeGraph, Sentence
from .text import tokenize

ElementRef = tuple[str, Union[int, tuple[int, int]]]

AGGREGATION_MODES = ("sentence_node", "sentence")


class SubjectDataError(GazeGraphError):
    """A subject has no usable fixation data."""

    def __init__(self, subject_id: str):
        super().__init__(f"no fixation data for subject {subject_id!r}")
        self.subject_id = subject_id


class CohortTooSmallError(GazeGraphError):
    """Cohort spread is undefined for fewer than two subjects."""


@dataclass(frozen=True)
class FixationRecord:
    subject_id: str
    sentence_id: str
    word_index: int
    word: str
    n_fixations: int
    total_duration_ms: float | None = None

    def __post_init__(self):
        if self.word_index < 0:
            raise GazeGraphError(f"word_index must be non-negative, got {self.word_index}")
        if self.n_fixations < 0:
            raise GazeGraphError(f"n_fixations must be non-negative, got {self.n_fixations}")
        if self.total_duration_ms is not None and self.total_duration_ms < 0:
            raise GazeGraphError("total_duration_ms must be non-negative")


@dataclass(frozen=True)
class TokenElementMap:
    sentence_id: str
    token_count: int
    assignments: Mapping[int, ElementRef]


@dataclass
class AggregateResult:
    element_totals: dict[ElementRef, int]
    unmapped_total: int = 0
    rejected: int = 0

    @property
    def mapped_total(self) -> int:
        return sum(self.element_totals.values())


@dataclass(frozen=True)
class ClassSplit:
    mean_important: float
    mean_non_important: float
    se_important: float | None
    se_non_important: float | None
    n_important: int
    n_non_important: int


@dataclass(frozen=True)
class AlignmentStats:
    subject_id: str
    nodes: ClassSplit
    edges: ClassSplit


@dataclass
class CohortSummary:
    mean_difference: float
    sd_of_difference: float
    per_subject_differences: dict[str, float]


def build_token_map(kg: KnowledgeGraph, sentence: Sentence) -> TokenElementMap:
    """Assign each sentence token to at most one graph element.

    Node labels are matched as contiguous token phrases, longest first,
    claiming the leftmost occurrence whose tokens are all unclaimed; edge
    relations follow the same rule over what remains.
    """
    tokens = tokenize(sentence.text)
    claimed: list[ElementRef | None] = [None] * len(tokens)

    def claim(phrases: Sequence[tuple[list[str], ElementRef]]) -> None:
        ordered = sorted(enumerate(phrases), key=lambda item: (-len(item[1][0]), item[0]))
        for _, (phrase, element) in ordered:
            k = len(phrase)
            if k == 0:
                continue
            for start in range(len(tokens) - k + 1):
                if tokens[start : start + k] == phrase and all(
                    claimed[i] is None for i in range(start, start + k)
                ):
                    for i in range(start, start + k):
                        claimed[i] = element
                    break

    claim([(tokenize(n.label), ("node", n.id)) for n in kg.nodes])
    claim([(tokenize(e.relation), ("edge", e.key)) for e in kg.edges])
    assignments = {i: ref for i, ref in enumerate(claimed) if ref is not None}
    return TokenElementMap(sentence.sentence_id, len(tokens), assignments)


def aggregate_fixations(records: Iterable[FixationRecord], tmap: TokenElementMap) -> AggregateResult:
    """Sum fixation counts per element; unclaimed tokens feed the unmapped bucket.

    Records with an out-of-range word_index are rejected and counted. Mapped
    totals plus the unmapped bucket conserve the accepted records' fixations
    exactly.
    """
    totals: dict[ElementRef, int] = {}
    for ref in tmap.assignments.values():
        totals.setdefault(ref, 0)
    result = AggregateResult(totals)
    for rec in records:
        if rec.word_index >= tmap.token_count:
            result.rejected += 1
            continue
        ref = tmap.assignments.get(rec.word_index)
        if ref is None:
            result.unmapped_total += rec.n_fixations
        else:
            totals[ref] += rec.n_fixations
    return result


def _split(important: list[float], non_important: list[float]) -> ClassSplit:
    def mean(xs: list[float]) -> float:
        return statistics.fmean(xs) if xs else 0.0

    def se(xs: list[float]) -> float | None:
        return statistics.stdev(xs) / math.sqrt(len(xs)) if len(xs) >= 2 else None

    return ClassSplit(
        mean_important=mean(important),
        mean_non_important=mean(non_important),
        se_important=se(important),
        se_non_important=se(non_important),
        n_important=len(important),
        n_non_important=len(non_important),
    )


def subject_importance_stats(
    subject_id: str,
    per_sentence_totals: Mapping[str, Mapping[ElementRef, int]],
    graphs: Mapping[str, KnowledgeGraph],
    mode: str = "sentence_node",
) -> AlignmentStats:
    """Mean and SE of fixation totals split by importance for one subject.

    mode "sentence_node" (default) treats every (sentence, node) total as one
    observation; mode "sentence" first averages within each sentence so every
    sentence contributes one observation per class. Unlabeled graphs are an
    error: importance must be assigned before alignment.
    """
    if mode not in AGGREGATION_MODES:
        raise ValueError(f"unknown aggregation mode {mode!r}")
    if not per_sentence_totals:
        raise SubjectDataError(subject_id)

    node_obs: dict[int, list[float]] = {0: [], 1: []}
    edge_obs: dict[int, list[float]] = {0: [], 1: []}
    for sentence_id in sorted(per_sentence_totals):
        totals = per_sentence_totals[sentence_id]
        kg = graphs[sentence_id]
        if not kg.is_labeled:
            raise GazeGraphError(f"graph {sentence_id!r} has unlabeled nodes")
        sentence_nodes: dict[int, list[float]] = {0: [], 1: []}
        sentence_edges: dict[int, list[float]] = {0: [], 1: []}
        importance = {n.id: n.importance for n in kg.nodes}
        for n in kg.nodes:
            sentence_nodes[importance[n.id]].append(float(totals.get(("node", n.id), 0)))
        for e in kg.edges:
            derived = 1 if importance[e.src] == 1 and importance[e.dst] == 1 else 0
            sentence_edges[derived].append(float(totals.get(("edge", e.key), 0)))
        for cls in (0, 1):
            if mode == "sentence_node":
                node_obs[cls].extend(sentence_nodes[cls])
                edge_obs[cls].extend(sentence_edges[cls])
            else:
                if sentence_nodes[cls]:
                    node_obs[cls].append(statistics.fmean(sentence_nodes[cls]))
                if sentence_edges[cls]:
                    edge_obs[cls].append(statistics.fmean(sentence_edges[cls]))

    return AlignmentStats(
        subject_id=subject_id,
        nodes=_split(node_obs[1], node_obs[0]),
        edges=_split(edge_obs[1], edge_obs[0]),
    )


def cohort_summary(stats: Sequence[AlignmentStats]) -> CohortSummary:
    """Mean and sample sd of per-subject (important - non-important) node means."""
    if len(stats) < 2:
        raise CohortTooSmallError(f"need at least 2 subjects, got {len(stats)}")
    diffs = {s.subject_id: s.nodes.mean_important - s.nodes.mean_non_important for s in stats}
    values = list(diffs.values())
    return CohortSummary(
        mean_difference=statistics.fmean(values),
        sd_of_difference=statistics.stdev(values),
        per_subject_differences=diffs,
    )
