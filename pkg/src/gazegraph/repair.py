"""Reconstruction-error measurement, trial selection, and graph repair.

A graph "reconstructs" its sentence through the tokens of its node labels and
edge relations. Comparing that token multiset against the sentence's tokens
yields omitted/extra/misspelled counts; the best of several extraction trials
is kept and cleaned so that no extra or misspelled tokens remain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .model import Edge, ErrorReport, GazeGraphError, KnowledgeGraph, Node, Sentence, TrialSet
from .text import levenshtein, tokenize, tokenize_with_spans

# Tokens this close (but not identical after case-folding) count as misspellings.
MISSPELLING_MAX_DISTANCE = 2


class EmptyTrialSetError(GazeGraphError):
    """Trial selection was asked to choose from zero trials."""


@dataclass
class GraphToken:
    """One token of a node label or edge relation, with its source span."""

    element: tuple  # ("node", id) or ("edge", (src, dst))
    token: str
    start: int
    end: int
    status: str = "matched"  # matched | extra | misspelled
    replacement: Optional[str] = None  # sentence token, when misspelled


@dataclass
class TokenAlignment:
    sentence_tokens: list[str]
    sentence_status: list[str]  # matched | misspelled | omitted
    graph_tokens: list[GraphToken]
    report: ErrorReport = field(init=False)

    def __post_init__(self):
        self.report = ErrorReport(
            omitted=self.sentence_status.count("omitted"),
            extra=sum(1 for g in self.graph_tokens if g.status == "extra"),
            misspelled=sum(1 for g in self.graph_tokens if g.status == "misspelled"),
        )


def graph_token_sequence(kg: KnowledgeGraph) -> list[GraphToken]:
    """All label/relation tokens in graph order: nodes first, then edges."""
    out = []
    for node in kg.nodes:
        for token, start, end in tokenize_with_spans(node.label):
            out.append(GraphToken(("node", node.id), token, start, end))
    for edge in kg.edges:
        for token, start, end in tokenize_with_spans(edge.relation):
            out.append(GraphToken(("edge", edge.key), token, start, end))
    return out


def align_tokens(kg: KnowledgeGraph, sentence: Sentence) -> TokenAlignment:
    """Match graph tokens against sentence tokens.

    Exact matches cancel per token value (multiset intersection). Leftovers
    are then paired as misspellings when their edit distance is 1 or 2,
    greedily by smallest distance with leftmost-first tie-breaks. Whatever
    remains is omitted (sentence side) or extra (graph side).
    """
    s_tokens = tokenize(sentence.text)
    g_tokens = graph_token_sequence(kg)

    remaining: dict[str, int] = {}
    for t in s_tokens:
        remaining[t] = remaining.get(t, 0) + 1

    s_status = ["omitted"] * len(s_tokens)
    matched_g: dict[str, int] = {}
    for g in g_tokens:
        if remaining.get(g.token, 0) > matched_g.get(g.token, 0):
            matched_g[g.token] = matched_g.get(g.token, 0) + 1
            g.status = "matched"
        else:
            g.status = "extra"
    for token, count in matched_g.items():
        taken = 0
        for i, t in enumerate(s_tokens):
            if taken == count:
                break
            if t == token and s_status[i] == "omitted":
                s_status[i] = "matched"
                taken += 1

    leftover_s = [i for i, st in enumerate(s_status) if st == "omitted"]
    leftover_g = [i for i, g in enumerate(g_tokens) if g.status == "extra"]
    candidates = []
    for s_rank, si in enumerate(leftover_s):
        for g_rank, gi in enumerate(leftover_g):
            d = levenshtein(s_tokens[si], g_tokens[gi].token)
            if 1 <= d <= MISSPELLING_MAX_DISTANCE:
                candidates.append((d, s_rank, g_rank, si, gi))
    candidates.sort()
    used_s: set[int] = set()
    used_g: set[int] = set()
    for _, _, _, si, gi in candidates:
        if si in used_s or gi in used_g:
            continue
        used_s.add(si)
        used_g.add(gi)
        s_status[si] = "misspelled"
        g_tokens[gi].status = "misspelled"
        g_tokens[gi].replacement = s_tokens[si]

    return TokenAlignment(s_tokens, s_status, g_tokens)


def compute_error_report(kg: KnowledgeGraph, sentence: Sentence) -> ErrorReport:
    """Omitted/extra/misspelled counts of the graph's sentence reconstruction."""
    return align_tokens(kg, sentence).report


def select_best_trial(trials: TrialSet) -> int:
    """Index of the trial with the fewest omitted words.

    Ties fall back to fewer extra, then fewer misspelled, then the earliest
    trial.
    """
    if not trials.trials:
        raise EmptyTrialSetError("no trials to select from")
    reports = [r for _, r in trials.trials]
    return min(
        range(len(reports)),
        key=lambda i: (reports[i].omitted, reports[i].extra, reports[i].misspelled, i),
    )


def _splice(original: str, tokens: list[GraphToken]) -> Optional[str]:
    """Rewrite one label/relation string per its tokens' repair statuses.

    Returns None when nothing changed, so callers can keep the original
    string (including its punctuation) byte for byte.
    """
    if all(g.status == "matched" for g in tokens):
        return None
    pieces = []
    cursor = 0
    for g in tokens:
        pieces.append(original[cursor : g.start])
        if g.status == "matched":
            pieces.append(original[g.start : g.end])
        elif g.status == "misspelled":
            pieces.append(g.replacement or "")
        # extra tokens contribute nothing
        cursor = g.end
    pieces.append(original[cursor:])
    return " ".join("".join(pieces).split())


def repair_graph(kg: KnowledgeGraph, sentence: Sentence) -> KnowledgeGraph:
    """Correct misspelled tokens and delete extra ones from the graph.

    Misspelled tokens are replaced in place by their paired sentence token;
    extra tokens are removed. A node whose label loses all its tokens is
    dropped along with its incident edges. An edge may keep an empty
    relation. Node ids are preserved. Idempotent: a repaired graph passes
    through unchanged.
    """
    alignment = align_tokens(kg, sentence)
    by_element: dict[tuple, list[GraphToken]] = {}
    for g in alignment.graph_tokens:
        by_element.setdefault(g.element, []).append(g)

    replaced = []
    deleted = []
    for g in alignment.graph_tokens:
        ref = _element_name(g.element)
        if g.status == "misspelled":
            replaced.append({"element": ref, "from": g.token, "to": g.replacement})
        elif g.status == "extra":
            deleted.append({"element": ref, "token": g.token})

    dropped: list[int] = []
    new_nodes: list[Node] = []
    for node in kg.nodes:
        tokens = by_element.get(("node", node.id), [])
        new_label = _splice(node.label, tokens)
        if new_label is None:
            new_nodes.append(Node(node.id, node.node_type, node.label, node.importance))
        elif tokenize(new_label):
            new_nodes.append(Node(node.id, node.node_type, new_label, node.importance))
        else:
            dropped.append(node.id)

    kept_ids = {n.id for n in new_nodes}
    new_edges: list[Edge] = []
    for edge in kg.edges:
        if edge.src not in kept_ids or edge.dst not in kept_ids:
            continue
        tokens = by_element.get(("edge", edge.key), [])
        new_relation = _splice(edge.relation, tokens)
        new_edges.append(Edge(edge.src, edge.dst, edge.relation if new_relation is None else new_relation))

    provenance = dict(kg.provenance)
    provenance["repairs"] = {
        "replaced": replaced,
        "deleted": deleted,
        "dropped_nodes": dropped,
    }
    return KnowledgeGraph(kg.sentence_id, new_nodes, new_edges, provenance)


def _element_name(element: tuple) -> str:
    kind, ref = element
    if kind == "node":
        return f"node:{ref}"
    src, dst = ref
    return f"edge:{src}->{dst}"
