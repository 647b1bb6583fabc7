"""Parsers for the structured <nodes>/<edges> blocks returned by the model.

Raw completions are messy: surrounding prose, trailing commas, curly quotes,
unquoted field values. The parsers tolerate all of that but reject structural
defects (missing blocks, malformed tuples, duplicate or dangling ids,
self-loops) with distinct error types so the caller can log the cause of a
failed trial.
"""

from __future__ import annotations

import re

from .model import Edge, GazeGraphError, KnowledgeGraph, Node

_QUOTE_MAP = str.maketrans({"“": '"', "”": '"', "‘": "'", "’": "'"})


class OutputParseError(GazeGraphError):
    """Base for structured-output parse failures."""

    kind = "parse_error"


class MissingBlockError(OutputParseError):
    kind = "missing_block"

    def __init__(self, block: str):
        super().__init__(f"no <{block}> block found in output")
        self.block = block


class MalformedTupleError(OutputParseError):
    kind = "malformed_tuple"


class DuplicateNodeIdError(OutputParseError):
    kind = "duplicate_node_id"


class NodeNumberingError(OutputParseError):
    kind = "node_numbering"


class DanglingEdgeError(OutputParseError):
    kind = "dangling_edge"


class SelfLoopError(OutputParseError):
    kind = "self_loop"


def _extract_block(raw: str, tag: str) -> str:
    """Content of the last <tag>...</tag> block (the model's final answer)."""
    matches = re.findall(rf"<{tag}>(.*?)</{tag}>", raw, re.DOTALL | re.IGNORECASE)
    if not matches:
        raise MissingBlockError(tag)
    return matches[-1]


def _paren_groups(block: str) -> list[str]:
    """Inner text of each top-level parenthesized group, ignoring prose between."""
    groups = []
    depth = 0
    in_quote = False
    start = 0
    for i, ch in enumerate(block):
        if ch == '"':
            in_quote = not in_quote
        elif not in_quote:
            if ch == "(":
                if depth == 0:
                    start = i + 1
                depth += 1
            elif ch == ")":
                if depth == 0:
                    raise MalformedTupleError("unbalanced ')' in block")
                depth -= 1
                if depth == 0:
                    groups.append(block[start:i])
    if depth != 0 or in_quote:
        raise MalformedTupleError("unbalanced '(' or quote in block")
    return groups


def _parse_fields(text: str, start: int) -> dict[str, str]:
    """Parse the {"key": value, ...} part of a tuple starting at text[start]."""
    if text[start] != "{":
        raise MalformedTupleError(f"expected '{{' in tuple: {text.strip()!r}")
    fields: dict[str, str] = {}
    i = start + 1
    n = len(text)

    def skip_separators(i: int) -> int:
        while i < n and (text[i].isspace() or text[i] == ","):
            i += 1
        return i

    def read_value(i: int, stop: str) -> tuple[str, int]:
        if i < n and text[i] == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise MalformedTupleError(f"unterminated quote in tuple: {text.strip()!r}")
            return text[i + 1 : end], end + 1
        j = i
        while j < n and text[j] not in stop:
            j += 1
        return text[i:j].strip(), j

    while True:
        i = skip_separators(i)
        if i >= n:
            raise MalformedTupleError(f"unterminated '{{' in tuple: {text.strip()!r}")
        if text[i] == "}":
            return fields
        key, i = read_value(i, ":}")
        i = skip_separators(i)
        if i >= n or text[i] != ":":
            raise MalformedTupleError(f"expected ':' after field name in tuple: {text.strip()!r}")
        i = skip_separators(i + 1)
        value, i = read_value(i, ",}")
        fields[key.strip('"')] = value


def _parse_tuple(group: str, expected_ids: int) -> tuple[list[int], dict[str, str]]:
    brace = group.find("{")
    if brace < 0:
        raise MalformedTupleError(f"tuple has no field block: {group.strip()!r}")
    head = [p.strip() for p in group[:brace].split(",") if p.strip()]
    if len(head) != expected_ids or not all(p.isdigit() for p in head):
        raise MalformedTupleError(
            f"expected {expected_ids} node number(s) before the fields: {group.strip()!r}"
        )
    return [int(p) for p in head], _parse_fields(group, brace)


def parse_kg_output(raw: str, sentence_id: str = "") -> KnowledgeGraph:
    """Parse a graph-extraction completion into a validated KnowledgeGraph.

    Node ids must be unique and start at 1; edges must reference existing
    nodes and may not be self-loops. Repeated edges between the same ordered
    pair are collapsed with their relations concatenated.
    """
    text = raw.translate(_QUOTE_MAP)
    nodes_block = _extract_block(text, "nodes")
    edges_block = _extract_block(text, "edges")

    nodes: list[Node] = []
    seen_ids: set[int] = set()
    for group in _paren_groups(nodes_block):
        ids, fields = _parse_tuple(group, expected_ids=1)
        node_id = ids[0]
        label = fields.get("label", "")
        if not label:
            raise MalformedTupleError(f"node {node_id} has no label: {group.strip()!r}")
        if node_id in seen_ids:
            raise DuplicateNodeIdError(f"node id {node_id} appears more than once")
        if node_id < 1:
            raise NodeNumberingError(f"node id {node_id} is not a positive integer")
        seen_ids.add(node_id)
        nodes.append(Node(node_id, fields.get("type", ""), label))
    if nodes and min(seen_ids) != 1:
        raise NodeNumberingError(f"node numbering must start at 1, got {min(seen_ids)}")

    edges: list[Edge] = []
    by_key: dict[tuple[int, int], int] = {}
    for group in _paren_groups(edges_block):
        ids, fields = _parse_tuple(group, expected_ids=2)
        src, dst = ids
        if src == dst:
            raise SelfLoopError(f"edge ({src}, {dst}) is a self-loop")
        if src not in seen_ids or dst not in seen_ids:
            raise DanglingEdgeError(f"edge ({src}, {dst}) references a missing node")
        relation = fields.get("relation", "")
        if (src, dst) in by_key:
            prior = edges[by_key[(src, dst)]]
            joined = " ".join(p for p in (prior.relation, relation) if p)
            edges[by_key[(src, dst)]] = Edge(src, dst, joined)
        else:
            by_key[(src, dst)] = len(edges)
            edges.append(Edge(src, dst, relation))

    return KnowledgeGraph(sentence_id, nodes, edges)


def parse_importance_output(raw: str, kg: KnowledgeGraph) -> tuple[dict[int, int], list[str]]:
    """Read the important-node listing and label every graph node 0 or 1.

    Nodes listed in the <nodes> block get 1, all others 0. Listed ids that do
    not exist in the graph are skipped and reported as warnings.
    """
    text = raw.translate(_QUOTE_MAP)
    block = _extract_block(text, "nodes")
    listed: list[int] = []
    for group in _paren_groups(block):
        head = group.split(",", 1)[0].strip()
        if not head.isdigit():
            raise MalformedTupleError(f"expected a node number first: {group.strip()!r}")
        listed.append(int(head))

    known = set(kg.node_ids())
    warnings = [
        f"importance output lists unknown node {node_id}" for node_id in listed if node_id not in known
    ]
    important = {node_id for node_id in listed if node_id in known}
    labels = {node_id: (1 if node_id in important else 0) for node_id in kg.node_ids()}
    return labels, warnings


def serialize_graph_blocks(kg: KnowledgeGraph) -> str:
    """Render a graph in the exact block format the extraction prompt requests.

    parse_kg_output() inverts this for labels and relations that contain no
    double quotes.
    """
    lines = ["<nodes>"]
    for n in kg.nodes:
        lines.append(f'({n.id}, {{"type": "{n.node_type}", "label": "{n.label}"}}),')
    lines.append("</nodes>")
    lines.append("<edges>")
    for e in kg.edges:
        lines.append(f'({e.src}, {e.dst}, {{"relation": "{e.relation}"}}),')
    lines.append("</edges>")
    return "\n".join(lines)
