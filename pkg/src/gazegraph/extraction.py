"""Graph extraction and importance labeling driven by a model provider.

extract_kg runs the full trial loop for one sentence: query the model
loop_time times, score each parsed graph against the sentence, keep the trial
with the fewest reconstruction errors, then repair it. assign_importance asks
the model which nodes matter and writes 0/1 labels onto the chosen graph.
Everything the loop did (per-attempt outcomes, error counts, the selected
trial) is recorded in the graph's provenance.
"""

from __future__ import annotations

import dataclasses

from . import parsing, prompts
from .model import GazeGraphError, KnowledgeGraph, Sentence, TrialSet
from .providers import Provider, ProviderError
from .repair import compute_error_report, repair_graph, select_best_trial

DEFAULT_LOOP_TIME = 3
DEFAULT_MODEL = "gpt-4o"
DEFAULT_TEMPERATURE = 0.7


class ExtractionFailedError(GazeGraphError):
    """Every trial failed to parse or the provider failed on all of them."""

    def __init__(self, sentence_id: str, attempts: list[dict]):
        super().__init__(f"all extraction trials failed for {sentence_id!r}")
        self.attempts = attempts


class ImportanceFailedError(GazeGraphError):
    """No importance vote succeeded within the retry budget."""


def _attempt_record(attempt: int, status: str, **extra) -> dict:
    record = {"attempt": attempt, "status": status}
    record.update(extra)
    return record


def extract_kg(
    sentence: Sentence,
    provider: Provider,
    loop_time: int = DEFAULT_LOOP_TIME,
    model_name: str = DEFAULT_MODEL,
    temperature: float = DEFAULT_TEMPERATURE,
) -> KnowledgeGraph:
    """Run the extraction loop for one sentence and return the repaired graph.

    The provider is called exactly loop_time times even if an early trial is
    already error-free; the best trial is the one minimizing (omitted, extra,
    misspelled), earliest on ties. Raises ExtractionFailedError if no trial
    yields a parseable graph.
    """
    if loop_time < 1:
        raise ValueError("loop_time must be at least 1")
    request = prompts.render_prompt1(sentence, model_name=model_name, temperature=temperature)

    attempts: list[dict] = []
    trials: list[tuple[int, KnowledgeGraph]] = []
    for attempt in range(1, loop_time + 1):
        try:
            raw = provider.complete(request, sentence.sentence_id, attempt)
        except ProviderError as exc:
            attempts.append(_attempt_record(attempt, "provider_error", error=str(exc)))
            continue
        try:
            kg = parsing.parse_kg_output(raw, sentence.sentence_id)
        except parsing.OutputParseError as exc:
            attempts.append(
                _attempt_record(attempt, "parse_error", error=str(exc), error_kind=exc.kind, raw_text=raw)
            )
            continue
        report = compute_error_report(kg, sentence)
        attempts.append(_attempt_record(attempt, "ok", errors=report.as_dict()))
        trials.append((attempt, kg))

    if not trials:
        raise ExtractionFailedError(sentence.sentence_id, attempts)

    reports = [compute_error_report(kg, sentence) for _, kg in trials]
    best = select_best_trial(TrialSet(list(zip((kg for _, kg in trials), reports))))
    chosen_attempt, chosen_kg = trials[best]

    repaired = repair_graph(chosen_kg, sentence)
    provenance = dict(repaired.provenance)
    provenance.update(
        {
            "model": model_name,
            "temperature": temperature,
            "loop_time": loop_time,
            "attempts": attempts,
            "selected_trial": chosen_attempt - 1,
            "selected_attempt": chosen_attempt,
            "pre_repair_errors": reports[best].as_dict(),
        }
    )
    return KnowledgeGraph(repaired.sentence_id, repaired.nodes, repaired.edges, provenance)


def assign_importance(
    kg: KnowledgeGraph,
    sentence: Sentence,
    provider: Provider,
    votes: int = 1,
    retry_budget: int = 2,
    model_name: str = DEFAULT_MODEL,
    temperature: float = DEFAULT_TEMPERATURE,
) -> KnowledgeGraph:
    """Label every node with 0/1 importance by majority over model votes.

    votes must be odd so the majority is always decided. A failed query
    (provider error or unparseable output) consumes one unit of the shared
    retry budget; attempt numbers keep counting up across retries. Raises
    ImportanceFailedError if fewer than `votes` queries succeed.
    """
    if votes < 1 or votes % 2 == 0:
        raise ValueError("votes must be a positive odd number")
    if not kg.nodes:
        raise GazeGraphError(f"cannot label an empty graph for {sentence.sentence_id!r}")
    request = prompts.render_prompt2(sentence, kg, model_name=model_name, temperature=temperature)

    attempts: list[dict] = []
    warnings: list[str] = []
    ballots: list[dict[int, int]] = []
    retries_left = retry_budget
    attempt = 0
    while len(ballots) < votes:
        attempt += 1
        try:
            raw = provider.complete(request, sentence.sentence_id, attempt)
            labels, vote_warnings = parsing.parse_importance_output(raw, kg)
        except (ProviderError, parsing.OutputParseError) as exc:
            attempts.append(_attempt_record(attempt, "failed", error=str(exc)))
            if retries_left == 0:
                raise ImportanceFailedError(
                    f"importance labeling failed for {sentence.sentence_id!r} "
                    f"after {attempt} attempt(s): {exc}"
                ) from exc
            retries_left -= 1
            continue
        attempts.append(_attempt_record(attempt, "ok", important=sorted(k for k, v in labels.items() if v)))
        warnings.extend(vote_warnings)
        ballots.append(labels)

    majority = votes // 2 + 1
    labels = {
        node_id: (1 if sum(b[node_id] for b in ballots) >= majority else 0) for node_id in kg.node_ids()
    }
    nodes = [dataclasses.replace(n, importance=labels[n.id]) for n in kg.nodes]
    provenance = dict(kg.provenance)
    provenance["importance"] = {"votes": votes, "attempts": attempts, "warnings": warnings}
    return KnowledgeGraph(kg.sentence_id, nodes, list(kg.edges), provenance)
