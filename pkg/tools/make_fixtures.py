#!/usr/bin/env python3
"""Regenerate the deterministic test corpus under tests/data/.

Builds ten sentences across the four tasks, a mock-provider fixture file with
three extraction attempts plus one importance attempt per sentence, and a
two-subject fixation file. Each attempt is derived from a hand-written ground
truth graph with a known perturbation, so tests know exactly which trial the
extraction loop must select and what the repaired graph looks like.

Run from the repository root:  python3 tools/make_fixtures.py
"""

from __future__ import annotations

import copy
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from gazegraph.fixations import build_token_map
from gazegraph.model import Edge, KnowledgeGraph, Node, Sentence
from gazegraph.parsing import serialize_graph_blocks
from gazegraph.prompts import IMPORTANCE_EXTRACTION, KG_EXTRACTION
from gazegraph.text import tokenize

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "data")

SUBJECTS = ("S01", "S02")


def graph(sid, nodes, edges):
    return KnowledgeGraph(
        sid,
        [Node(i + 1, t, label) for i, (t, label) in enumerate(nodes)],
        [Edge(s, d, r) for s, d, r in edges],
    )


# Ground-truth graphs reconstruct their sentences exactly (errors 0/0/0).
CORPUS = [
    {
        "sentence": Sentence("t1_0001", "task1", "Reynolds signed with Metro-Goldwyn-Mayer in 1950."),
        "nodes": [("Person", "Reynolds"), ("Organization", "Metro-Goldwyn-Mayer"), ("Date", "1950")],
        # The empty-relation edge closes a directed 3-cycle without adding tokens.
        "edges": [(1, 2, "signed with"), (2, 3, "in"), (3, 1, "")],
        "important": [1, 2],
    },
    {
        "sentence": Sentence("t1_0002", "task1", "The old lighthouse guided ships through the storm."),
        "nodes": [("Structure", "The old lighthouse"), ("Object", "ships"), ("Event", "the storm")],
        "edges": [(1, 2, "guided"), (2, 3, "through")],
        "important": [1],
    },
    {
        "sentence": Sentence("t1_0003", "task1", "A quiet library hides countless forgotten stories."),
        "nodes": [("Place", "A quiet library"), ("Object", "countless forgotten stories")],
        "edges": [(1, 2, "hides")],
        "important": [2],
    },
    {
        "sentence": Sentence("t1_0004", "task1", "Marie Curie discovered radium in Paris."),
        "nodes": [("Person", "Marie Curie"), ("Element", "radium"), ("Place", "Paris")],
        "edges": [(1, 2, "discovered"), (2, 3, "in")],
        "important": [1, 2],
    },
    {
        "sentence": Sentence(
            "t2q_0001",
            "task2_with_questions",
            "The engineer repaired the bridge before winter.",
            control_question="What did the engineer repair?",
            target_words=["bridge"],
        ),
        "nodes": [("Person", "The engineer"), ("Structure", "the bridge"), ("Time", "winter")],
        "edges": [(1, 2, "repaired"), (2, 3, "before")],
        "important": [2],
    },
    {
        "sentence": Sentence(
            "t2q_0002",
            "task2_with_questions",
            "His sister accepted the job at the museum.",
            control_question="Where did his sister work?",
            target_words=["job", "museum"],
        ),
        "nodes": [("Person", "His sister"), ("Position", "the job"), ("Place", "the museum")],
        "edges": [(1, 2, "accepted"), (2, 3, "at")],
        "important": [2, 3],
    },
    {
        "sentence": Sentence("t2n_0001", "task2_without_questions", "Famous actors often avoid public interviews."),
        "nodes": [("Person", "Famous actors"), ("Event", "public interviews")],
        "edges": [(1, 2, "often avoid")],
        "important": [2],
    },
    {
        "sentence": Sentence("t2n_0002", "task2_without_questions", "The committee approved the new budget."),
        "nodes": [("Group", "The committee"), ("Document", "the new budget")],
        "edges": [(1, 2, "approved")],
        "important": [1],
    },
    {
        "sentence": Sentence("t3_0001", "task3", "Wilson founded a small observatory near the coast."),
        "nodes": [("Person", "Wilson"), ("Structure", "a small observatory"), ("Place", "the coast")],
        "edges": [(1, 2, "founded"), (2, 3, "near")],
        "important": [1, 2],
    },
    {
        "sentence": Sentence("t3_0002", "task3", "The novel describes a journey across frozen mountains."),
        "nodes": [("Object", "The novel"), ("Event", "a journey"), ("Place", "frozen mountains")],
        "edges": [(1, 2, "describes"), (2, 3, "across")],
        "important": [2, 3],
    },
]


def edit_label(kg, node_id, new_label):
    kg = copy.deepcopy(kg)
    kg.node_by_id(node_id).label = new_label
    return kg


def edit_relation(kg, src, dst, new_relation):
    kg = copy.deepcopy(kg)
    for e in kg.edges:
        if (e.src, e.dst) == (src, dst):
            e.relation = new_relation
            return kg
    raise KeyError((src, dst))


def wrap(blocks, style=0):
    prose = [
        "Here is the knowledge graph:\n{b}\nDone.",
        "Let's think step by step. Nodes are the entities; the remaining words become edges.\n{b}",
        "{b}",
    ]
    return prose[style % len(prose)].format(b=blocks)


# Per-sentence attempt scripts. Each entry is (raw_text, note); error counts
# noted as (omitted, extra, misspelled) for the parseable ones.
def attempts_for(entry):
    sid = entry["sentence"].sentence_id
    kg = graph(sid, entry["nodes"], entry["edges"])
    perfect = serialize_graph_blocks(kg)

    if sid == "t1_0001":
        extra = serialize_graph_blocks(edit_label(kg, 2, "Metro-Goldwyn-Mayer hollywood"))  # (0,1,0)
        missp = serialize_graph_blocks(edit_relation(kg, 1, 2, "signd with"))  # (0,0,1)
        return [wrap(extra, 0), wrap(perfect, 1), wrap(missp, 2)]  # best: attempt 2
    if sid == "t1_0002":
        omit1 = serialize_graph_blocks(edit_relation(kg, 1, 2, ""))  # (1,0,0)
        omit2 = serialize_graph_blocks(edit_label(edit_relation(kg, 2, 3, ""), 3, "storm"))  # (2,0,0)
        # Unquoted field values in the winning attempt exercise the tolerant parser.
        bare = perfect.replace('"type": "Structure"', '"type": Structure', 1)
        return [wrap(bare, 2), wrap(omit1, 0), wrap(omit2, 1)]  # best: attempt 1
    if sid == "t1_0003":
        malformed = "I could not find any entities worth extracting here."
        omit1 = serialize_graph_blocks(edit_label(kg, 1, "A library"))  # (1,0,0)
        return [malformed, wrap(omit1, 0), wrap(perfect, 1)]  # best: attempt 3
    if sid == "t1_0004":
        both = serialize_graph_blocks(
            edit_relation(edit_label(kg, 2, "radum"), 1, 2, "discovered quickly")
        )  # (0,1,1): repair must fix "radum" and delete "quickly"
        omit1 = serialize_graph_blocks(edit_relation(kg, 2, 3, ""))  # (1,0,0)
        omit_extra = serialize_graph_blocks(
            edit_relation(edit_label(kg, 3, "France"), 2, 3, "in old")
        )  # (1,1,1)-ish
        return [wrap(both, 0), wrap(omit1, 1), wrap(omit_extra, 2)]  # best: attempt 1
    if sid == "t2q_0001":
        # A draft nodes block before the real one exercises last-block selection.
        decoy = "<nodes>\n(draft, incomplete)\n</nodes>\nFinal answer:\n" + perfect
        omit1 = serialize_graph_blocks(edit_label(kg, 3, "next winter"))  # (0,1,0) actually extra
        return [decoy, wrap(perfect, 1), wrap(omit1, 2)]  # tie on zero errors: attempt 1
    if sid == "t2q_0002":
        extra2 = serialize_graph_blocks(
            edit_label(edit_relation(kg, 1, 2, "accepted today"), 1, "His famous sister")
        )  # (0,2,0)
        missp = serialize_graph_blocks(edit_label(kg, 3, "the musem"))  # (0,0,1)
        return [wrap(extra2, 0), wrap(missp, 1), wrap(perfect, 2)]  # best: attempt 3
    if sid == "t2n_0001":
        omit_extra = serialize_graph_blocks(edit_relation(kg, 1, 2, "avoid loudly"))  # (1,1,0)
        omit_clean = serialize_graph_blocks(edit_relation(kg, 1, 2, "avoid"))  # (1,0,0)
        omit3 = serialize_graph_blocks(edit_label(edit_relation(kg, 1, 2, "avoid"), 1, "actors"))  # (3,0,0)
        return [wrap(omit_extra, 0), wrap(omit_clean, 1), wrap(omit3, 2)]  # best: attempt 2
    if sid == "t2n_0002":
        curly = perfect.replace('"', "“")  # curly quotes everywhere still parse
        omit1 = serialize_graph_blocks(edit_label(kg, 2, "the budget"))  # (1,0,0)
        omit1b = serialize_graph_blocks(edit_label(kg, 1, "committee"))  # (1,0,0)
        return [wrap(curly, 2), wrap(omit1, 0), wrap(omit1b, 1)]  # best: attempt 1
    if sid == "t3_0001":
        omit1 = serialize_graph_blocks(edit_label(kg, 2, "a observatory"))  # (1,0,0)
        omit2 = serialize_graph_blocks(edit_label(edit_label(kg, 2, "an observatory"), 3, "coast"))
        return [wrap(omit1, 0), wrap(omit2, 1), wrap(perfect, 2)]  # best: attempt 3
    if sid == "t3_0002":
        dangling = perfect.replace("(2, 3,", "(2, 9,")  # parse error: dangling endpoint
        extra1 = serialize_graph_blocks(edit_relation(kg, 2, 3, "across the"))  # (0,1,0)
        return [wrap(perfect, 0), dangling, wrap(extra1, 1)]  # best: attempt 1
    raise KeyError(sid)


def importance_response(entry):
    kg = graph(entry["sentence"].sentence_id, entry["nodes"], entry["edges"])
    lines = ["Based on the target words and the core message:", "<nodes>"]
    for node_id in entry["important"]:
        n = kg.node_by_id(node_id)
        lines.append(f'({n.id}, {{"type": "{n.node_type}", "label": "{n.label}"}}),')
    lines.append("</nodes>")
    return "\n".join(lines)


def fixation_records(entry):
    """Every token of every sentence fixated by both subjects.

    Tokens of important nodes receive a deterministic bonus so important
    means exceed non-important means for both subjects.
    """
    sentence = entry["sentence"]
    kg = graph(sentence.sentence_id, entry["nodes"], entry["edges"])
    tmap = build_token_map(kg, sentence)
    tokens = tokenize(sentence.text)
    important = set(entry["important"])
    records = []
    for subject_index, subject in enumerate(SUBJECTS):
        for i, token in enumerate(tokens):
            ref = tmap.assignments.get(i)
            bonus = 2 if ref and ref[0] == "node" and ref[1] in important else 0
            n = (i * 7 + subject_index * 2) % 3 + bonus
            records.append(
                {
                    "subject_id": subject,
                    "sentence_id": sentence.sentence_id,
                    "word_index": i,
                    "word": token,
                    "n_fixations": n,
                    "total_duration_ms": 80.0 * n,
                }
            )
    return records


def main():
    os.makedirs(DATA_DIR, exist_ok=True)
    sentences = []
    fixtures = []
    fixations = []
    for entry in CORPUS:
        s = entry["sentence"]
        row = {"sentence_id": s.sentence_id, "task": s.task, "text": s.text}
        if s.control_question:
            row["control_question"] = s.control_question
        if s.target_words:
            row["target_words"] = s.target_words
        sentences.append(row)

        for attempt, raw in enumerate(attempts_for(entry), start=1):
            fixtures.append(
                {
                    "sentence_id": s.sentence_id,
                    "prompt_kind": KG_EXTRACTION,
                    "attempt": attempt,
                    "raw_text": raw,
                }
            )
        fixtures.append(
            {
                "sentence_id": s.sentence_id,
                "prompt_kind": IMPORTANCE_EXTRACTION,
                "attempt": 1,
                "raw_text": importance_response(entry),
            }
        )
        fixations.extend(fixation_records(entry))

    def dump(name, rows):
        path = os.path.join(DATA_DIR, name)
        with open(path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
        print(f"wrote {path} ({len(rows)} lines)")

    dump("sentences.jsonl", sentences)
    dump("fixtures.jsonl", fixtures)
    dump("fixations.jsonl", fixations)


if __name__ == "__main__":
    main()
