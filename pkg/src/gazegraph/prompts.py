"""Prompt templates for graph extraction and important-node selection."""

from __future__ import annotations

from dataclasses import dataclass

from .model import GazeGraphError, KnowledgeGraph, Sentence

KG_EXTRACTION = "kg_extraction"
IMPORTANCE_EXTRACTION = "importance_extraction"

GRAPH_PROMPT_TEMPLATE = """Your task is to build a structured and accurate knowledge graph that captures the semantic meaning of the sentence.
Let's think step by step.
First, identify all minimal semantic units of the main entity, including articles like "the" and possessive pronouns like "his" in the node phrase.
Then, all the words in the original sentence except the node contents become the relations (edges).
Last, format the output into the format below:
<nodes>
(node_number, {{"type": the_type_of_label, "label": node_content}}),
</nodes>
<edges>
(starting_node_number, ending_node_number, {{"relation": phrase_content}}),
</edges>
The node number should start from 1.
Now you have to process this sentence: {sentence}"""

IMPORTANCE_PROMPT_TEMPLATE = """Your task is to extract the important nodes from the given knowledge graph.
Let's think step by step.
You should determine which nodes are important based on the provided target words and the nodes' relevance to the core message of the sentence.
Use this approach to identify the important nodes based on the following inputs:
1. Input 1: the sentence: {sentence}
2. Input 2: nodes in the knowledge graph for the sentence: {nodes}
3. Input 3: the target word: {target_words}
Ensure that the output follows the format below:
<nodes>
(node_number, {{"type": the_type_of_label, "label": node_content}}),
</nodes>"""


@dataclass(frozen=True)
class PromptRequest:
    prompt_kind: str
    rendered_text: str
    model_name: str
    temperature: float


def format_node_tuple(node_id: int, node_type: str, label: str) -> str:
    return f'({node_id}, {{"type": "{node_type}", "label": "{label}"}})'


def format_edge_tuple(src: int, dst: int, relation: str) -> str:
    return f'({src}, {dst}, {{"relation": "{relation}"}})'


def serialize_nodes(kg: KnowledgeGraph) -> str:
    return ", ".join(format_node_tuple(n.id, n.node_type, n.label) for n in kg.nodes)


def render_prompt1(sentence: Sentence, model_name: str = "gpt-4o", temperature: float = 0.7) -> PromptRequest:
    """Fill the graph-extraction template with the sentence."""
    text = GRAPH_PROMPT_TEMPLATE.format(sentence=sentence.text)
    return PromptRequest(KG_EXTRACTION, text, model_name, temperature)


def render_prompt2(
    sentence: Sentence,
    kg: KnowledgeGraph,
    model_name: str = "gpt-4o",
    temperature: float = 0.7,
) -> PromptRequest:
    """Fill the importance-selection template with the sentence and its graph.

    The target-word slot carries the sentence's target words and control
    question when it has them, and the literal token "none" otherwise.
    """
    if not kg.nodes:
        raise GazeGraphError(f"cannot request importance for empty graph {kg.sentence_id!r}")
    parts = []
    if sentence.target_words:
        parts.append(", ".join(sentence.target_words))
    if sentence.control_question:
        parts.append(f"(control question: {sentence.control_question})")
    target_slot = " ".join(parts) if parts else "none"
    text = IMPORTANCE_PROMPT_TEMPLATE.format(
        sentence=sentence.text,
        nodes=serialize_nodes(kg),
        target_words=target_slot,
    )
    return PromptRequest(IMPORTANCE_EXTRACTION, text, model_name, temperature)
