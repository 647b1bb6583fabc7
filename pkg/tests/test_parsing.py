import string

import pytest
from hypothesis import given, strategies as st

from gazegraph.model import Edge, KnowledgeGraph, Node
from gazegraph.parsing import (
    DanglingEdgeError,
    DuplicateNodeIdError,
    MalformedTupleError,
    MissingBlockError,
    NodeNumberingError,
    OutputParseError,
    SelfLoopError,
    parse_importance_output,
    parse_kg_output,
    serialize_graph_blocks,
)

WELL_FORMED = """<nodes>
(1, {"type": "person", "label": "Reynolds"}),
(2, {"type": "organization", "label": "Metro-Goldwyn-Mayer"}),
(3, {"type": "date", "label": "1950"}),
</nodes>
<edges>
(1, 2, {"relation": "signed with"}),
(2, 3, {"relation": "in"}),
</edges>"""


class TestParseKgOutput:
    def test_well_formed(self):
        kg = parse_kg_output(WELL_FORMED, sentence_id="s1")
        assert kg.sentence_id == "s1"
        assert [(n.id, n.node_type, n.label) for n in kg.nodes] == [
            (1, "person", "Reynolds"),
            (2, "organization", "Metro-Goldwyn-Mayer"),
            (3, "date", "1950"),
        ]
        assert [(e.src, e.dst, e.relation) for e in kg.edges] == [
            (1, 2, "signed with"),
            (2, 3, "in"),
        ]

    def test_surrounding_prose_ignored(self):
        raw = "Sure! Let's think step by step.\n" + WELL_FORMED + "\nHope that helps."
        assert len(parse_kg_output(raw).nodes) == 3

    def test_last_block_wins(self):
        draft = WELL_FORMED.replace("Reynolds", "Draft")
        raw = draft + "\nWait, revised answer:\n" + WELL_FORMED
        assert parse_kg_output(raw).node_by_id(1).label == "Reynolds"

    def test_curly_quotes_normalized(self):
        raw = WELL_FORMED.replace('"', "“", 1).replace('"', "”", 1)
        assert parse_kg_output(raw).node_by_id(1).node_type == "person"

    def test_unquoted_field_values_tolerated(self):
        raw = """<nodes>
(1, {"type": person, "label": "Reynolds"}),
</nodes>
<edges>
</edges>"""
        kg = parse_kg_output(raw)
        assert kg.node_by_id(1).node_type == "person"

    def test_trailing_comma_optional(self):
        raw = WELL_FORMED.replace("}),\n</nodes>", "})\n</nodes>")
        assert len(parse_kg_output(raw).nodes) == 3

    def test_missing_nodes_block(self):
        with pytest.raises(MissingBlockError) as exc:
            parse_kg_output("<edges>(1, 2, {\"relation\": \"x\"})</edges>")
        assert exc.value.block == "nodes"
        assert exc.value.kind == "missing_block"

    def test_missing_edges_block(self):
        raw = '<nodes>(1, {"type": "t", "label": "a"})</nodes>'
        with pytest.raises(MissingBlockError) as exc:
            parse_kg_output(raw)
        assert exc.value.block == "edges"

    def test_prose_only_fails(self):
        with pytest.raises(OutputParseError):
            parse_kg_output("I could not construct a graph for this sentence.")

    def test_empty_label_rejected(self):
        raw = '<nodes>(1, {"type": "t", "label": ""})</nodes><edges></edges>'
        with pytest.raises(MalformedTupleError):
            parse_kg_output(raw)

    def test_duplicate_node_id_rejected(self):
        raw = (
            '<nodes>(1, {"type": "t", "label": "a"}), (1, {"type": "t", "label": "b"})'
            "</nodes><edges></edges>"
        )
        with pytest.raises(DuplicateNodeIdError):
            parse_kg_output(raw)

    def test_numbering_must_start_at_one(self):
        raw = '<nodes>(2, {"type": "t", "label": "a"})</nodes><edges></edges>'
        with pytest.raises(NodeNumberingError):
            parse_kg_output(raw)

    def test_dangling_edge_rejected(self):
        raw = (
            '<nodes>(1, {"type": "t", "label": "a"})</nodes>'
            '<edges>(1, 9, {"relation": "r"})</edges>'
        )
        with pytest.raises(DanglingEdgeError):
            parse_kg_output(raw)

    def test_self_loop_rejected(self):
        raw = (
            '<nodes>(1, {"type": "t", "label": "a"})</nodes>'
            '<edges>(1, 1, {"relation": "r"})</edges>'
        )
        with pytest.raises(SelfLoopError):
            parse_kg_output(raw)

    def test_repeated_edges_collapse_with_joined_relation(self):
        raw = (
            '<nodes>(1, {"type": "t", "label": "a"}), (2, {"type": "t", "label": "b"})</nodes>'
            '<edges>(1, 2, {"relation": "was"}), (1, 2, {"relation": "seen"})</edges>'
        )
        kg = parse_kg_output(raw)
        assert [(e.src, e.dst, e.relation) for e in kg.edges] == [(1, 2, "was seen")]

    def test_empty_relation_allowed(self):
        raw = (
            '<nodes>(1, {"type": "t", "label": "a"}), (2, {"type": "t", "label": "b"})</nodes>'
            '<edges>(1, 2, {"relation": ""})</edges>'
        )
        assert parse_kg_output(raw).edges[0].relation == ""

    def test_parentheses_inside_quoted_label(self):
        raw = (
            '<nodes>(1, {"type": "t", "label": "a (small) word"})</nodes>'
            "<edges></edges>"
        )
        assert parse_kg_output(raw).node_by_id(1).label == "a (small) word"

    def test_empty_graph_parses(self):
        kg = parse_kg_output("<nodes></nodes><edges></edges>")
        assert kg.nodes == [] and kg.edges == []


LABEL_ALPHABET = string.ascii_letters + string.digits + " .,'-"


@st.composite
def random_graphs(draw):
    n = draw(st.integers(min_value=0, max_value=6))
    nodes = []
    for i in range(1, n + 1):
        label = draw(
            st.text(alphabet=LABEL_ALPHABET, min_size=1, max_size=20).filter(str.strip)
        )
        node_type = draw(st.sampled_from(["entity", "person", "object", "date"]))
        nodes.append(Node(i, node_type, label))
    edges = []
    if n >= 2:
        pairs = draw(
            st.lists(
                st.tuples(st.integers(1, n), st.integers(1, n)).filter(lambda p: p[0] != p[1]),
                unique=True,
                max_size=8,
            )
        )
        for src, dst in pairs:
            relation = draw(st.text(alphabet=LABEL_ALPHABET, max_size=12))
            edges.append(Edge(src, dst, relation))
    return KnowledgeGraph("rt", nodes, edges)


class TestRoundTrip:
    @given(random_graphs())
    def test_serialize_then_parse_is_identity(self, kg):
        got = parse_kg_output(serialize_graph_blocks(kg), sentence_id="rt")
        assert [(n.id, n.node_type, n.label) for n in got.nodes] == [
            (n.id, n.node_type, n.label) for n in kg.nodes
        ]
        # Parsing collapses repeated (src, dst) pairs; the generator never
        # produces them, so edges must survive exactly.
        assert [(e.src, e.dst, e.relation.strip()) for e in got.edges] == [
            (e.src, e.dst, " ".join(e.relation.split())) for e in kg.edges
        ]


class TestParseImportanceOutput:
    @staticmethod
    def graph():
        return parse_kg_output(WELL_FORMED, sentence_id="s1")

    def test_listed_nodes_get_one_rest_zero(self):
        raw = '<nodes>\n(1, {"type": "person", "label": "Reynolds"}),\n</nodes>'
        labels, warnings = parse_importance_output(raw, self.graph())
        assert labels == {1: 1, 2: 0, 3: 0}
        assert warnings == []

    def test_every_node_gets_a_label(self):
        raw = "<nodes></nodes>"
        labels, _ = parse_importance_output(raw, self.graph())
        assert labels == {1: 0, 2: 0, 3: 0}

    def test_unknown_ids_warn_but_do_not_fail(self):
        raw = '<nodes>(9, {"type": "x", "label": "ghost"})</nodes>'
        labels, warnings = parse_importance_output(raw, self.graph())
        assert labels == {1: 0, 2: 0, 3: 0}
        assert len(warnings) == 1 and "9" in warnings[0]

    def test_missing_block_raises(self):
        with pytest.raises(MissingBlockError):
            parse_importance_output("no structure here", self.graph())

    def test_non_numeric_head_raises(self):
        raw = '<nodes>(first, {"label": "a"})</nodes>'
        with pytest.raises(MalformedTupleError):
            parse_importance_output(raw, self.graph())
