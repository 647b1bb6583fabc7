"""Core data model: sentences, knowledge graphs, and reconstruction-error reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

TASKS = (
    "task1",
    "task2_with_questions",
    "task2_without_questions",
    "task3",
)


class GazeGraphError(Exception):
    """Base class for all errors raised by this package."""


@dataclass(frozen=True)
class Sentence:
    sentence_id: str
    task: str
    text: str
    control_question: Optional[str] = None
    target_words: Optional[list[str]] = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError(f"sentence {self.sentence_id!r} has empty text")
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r} (expected one of {TASKS})")


@dataclass
class Node:
    id: int
    node_type: str
    label: str
    importance: Optional[int] = None

    def __post_init__(self):
        if self.id < 1:
            raise ValueError(f"node id must be >= 1, got {self.id}")
        if not self.label:
            raise ValueError(f"node {self.id} has an empty label")
        if self.importance not in (None, 0, 1):
            raise ValueError(f"node {self.id} importance must be 0 or 1")


@dataclass
class Edge:
    src: int
    dst: int
    relation: str

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"self-loop on node {self.src}")

    @property
    def key(self) -> tuple[int, int]:
        return (self.src, self.dst)


@dataclass
class KnowledgeGraph:
    """Directed, unweighted graph extracted from one sentence."""

    sentence_id: str
    nodes: list[Node] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    provenance: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate node ids")
        id_set = set(ids)
        for e in self.edges:
            if e.src not in id_set or e.dst not in id_set:
                raise ValueError(f"edge ({e.src}, {e.dst}) references a missing node")

    def node_ids(self) -> list[int]:
        return [n.id for n in self.nodes]

    def node_by_id(self, node_id: int) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    @property
    def is_labeled(self) -> bool:
        return bool(self.nodes) and all(n.importance is not None for n in self.nodes)


@dataclass(frozen=True)
class ErrorReport:
    """Omitted/extra/misspelled token counts of a graph against its sentence."""

    omitted: int
    extra: int
    misspelled: int

    def __post_init__(self):
        if min(self.omitted, self.extra, self.misspelled) < 0:
            raise ValueError("error counts must be non-negative")

    @property
    def total(self) -> int:
        return self.omitted + self.extra + self.misspelled

    def as_dict(self) -> dict[str, int]:
        return {
            "omitted": self.omitted,
            "extra": self.extra,
            "misspelled": self.misspelled,
            "total": self.total,
        }


@dataclass
class TrialSet:
    """Repeated extraction attempts for one sentence, with their error reports."""

    trials: list[tuple[KnowledgeGraph, ErrorReport]]

    def __post_init__(self):
        sids = {kg.sentence_id for kg, _ in self.trials}
        if len(sids) > 1:
            raise ValueError(f"trials mix sentences: {sorted(sids)}")

    def __len__(self) -> int:
        return len(self.trials)


def graph_to_dict(kg: KnowledgeGraph) -> dict[str, Any]:
    nodes = []
    for n in kg.nodes:
        d: dict[str, Any] = {"id": n.id, "type": n.node_type, "label": n.label}
        if n.importance is not None:
            d["importance"] = n.importance
        nodes.append(d)
    return {
        "sentence_id": kg.sentence_id,
        "nodes": nodes,
        "edges": [{"src": e.src, "dst": e.dst, "relation": e.relation} for e in kg.edges],
        "provenance": kg.provenance,
    }


def graph_from_dict(data: dict[str, Any]) -> KnowledgeGraph:
    nodes = [
        Node(
            id=int(n["id"]),
            node_type=str(n.get("type", "")),
            label=str(n["label"]),
            importance=None if n.get("importance") is None else int(n["importance"]),
        )
        for n in data.get("nodes", [])
    ]
    edges = [
        Edge(src=int(e["src"]), dst=int(e["dst"]), relation=str(e.get("relation", "")))
        for e in data.get("edges", [])
    ]
    return KnowledgeGraph(
        sentence_id=str(data["sentence_id"]),
        nodes=nodes,
        edges=edges,
        provenance=dict(data.get("provenance", {})),
    )


def sentence_to_dict(s: Sentence) -> dict[str, Any]:
    d: dict[str, Any] = {"sentence_id": s.sentence_id, "task": s.task, "text": s.text}
    if s.control_question is not None:
        d["control_question"] = s.control_question
    if s.target_words is not None:
        d["target_words"] = list(s.target_words)
    return d


def sentence_from_dict(data: dict[str, Any]) -> Sentence:
    targets = data.get("target_words")
    return Sentence(
        sentence_id=str(data["sentence_id"]),
        task=str(data["task"]),
        text=str(data["text"]),
        control_question=data.get("control_question"),
        target_words=None if targets is None else [str(t) for t in targets],
    )
