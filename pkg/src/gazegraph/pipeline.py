"""Pipeline commands: extract, label, metrics, roc, fixations, report.

Each command reads its inputs, fans per-sentence work over a bounded thread
pool where it helps, writes its artifacts atomically into the output
directory, and records a manifest with one entry per input sentence. Failures
are isolated per sentence: one bad fixture never aborts the corpus, and the
exit code is nonzero only when some sentence hard-failed.

Manifests are the only outputs carrying timestamps; everything else is
byte-identical across re-runs over identical inputs.
"""

from __future__ import annotations

import os
import statistics
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import reference
from .centrality import MEASURES, centrality_scores, top_fraction_selection
from .extraction import (
    DEFAULT_LOOP_TIME,
    DEFAULT_MODEL,
    DEFAULT_TEMPERATURE,
    ExtractionFailedError,
    GazeGraphError,
    ImportanceFailedError,
    assign_importance,
    extract_kg,
)
from .fixations import (
    aggregate_fixations,
    build_token_map,
    cohort_summary,
    subject_importance_stats,
)
from .graphstats import PATTERN_NAMES, graph_statistics_for
from .model import KnowledgeGraph, Sentence
from .providers import HttpProvider, MockProvider, Provider
from .repair import compute_error_report
from .rocauc import UndefinedAucError, roc_curve
from .storage import (
    graph_path,
    load_fixations,
    load_graphs_dir,
    load_sentences,
    save_graph,
    write_csv,
    write_json,
)

DEFAULT_CONCURRENCY = 4
DEFAULT_TOP_FRACTION = 0.5


@dataclass
class PipelineConfig:
    provider_kind: str = "mock"
    endpoint: str = ""
    model: str = DEFAULT_MODEL
    loop_time: int = DEFAULT_LOOP_TIME
    temperature: float = DEFAULT_TEMPERATURE
    top_fraction: float = DEFAULT_TOP_FRACTION
    concurrency: int = DEFAULT_CONCURRENCY
    votes: int = 1
    aggregation_mode: str = "sentence_node"
    sentences_path: str = ""
    fixtures_path: str = ""
    fixations_path: str = ""
    out_dir: str = "out"
    graphs_dir: str = ""
    metric: str = ""

    def __post_init__(self):
        if self.loop_time < 1:
            raise ValueError("loop_time must be at least 1")
        if not 0 < self.top_fraction <= 1:
            raise ValueError("top_fraction must be in (0, 1]")
        if self.concurrency < 1:
            raise ValueError("concurrency must be at least 1")
        if self.provider_kind not in ("mock", "http"):
            raise ValueError(f"unknown provider kind {self.provider_kind!r}")
        if self.metric and self.metric not in MEASURES:
            raise ValueError(f"unknown metric {self.metric!r} (choose from {sorted(MEASURES)})")

    def resolved_graphs_dir(self) -> str:
        return self.graphs_dir or os.path.join(self.out_dir, "graphs")

    def make_provider(self) -> "CountingProvider":
        if self.provider_kind == "mock":
            if not self.fixtures_path:
                raise GazeGraphError("mock provider requires --fixtures")
            return CountingProvider(MockProvider(self.fixtures_path))
        if not self.endpoint:
            raise GazeGraphError("http provider requires --endpoint")
        return CountingProvider(HttpProvider(self.endpoint))

    def snapshot(self) -> dict:
        return {
            "provider": self.provider_kind,
            "endpoint": self.endpoint,
            "model": self.model,
            "loop_time": self.loop_time,
            "temperature": self.temperature,
            "top_fraction": self.top_fraction,
            "concurrency": self.concurrency,
            "votes": self.votes,
            "aggregation_mode": self.aggregation_mode,
            "sentences": self.sentences_path,
            "fixtures": self.fixtures_path,
            "fixations": self.fixations_path,
            "out": self.out_dir,
            "graphs_dir": self.resolved_graphs_dir(),
            "metric": self.metric,
        }


class CountingProvider:
    """Wraps any provider with a thread-safe call counter for manifests."""

    def __init__(self, inner: Provider):
        self.inner = inner
        self._lock = threading.Lock()
        self.call_count = 0

    def complete(self, request, sentence_id: str, attempt: int) -> str:
        with self._lock:
            self.call_count += 1
        return self.inner.complete(request, sentence_id, attempt)


@dataclass
class CommandResult:
    statuses: list[dict] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)
    provider_calls: int = 0

    @property
    def exit_code(self) -> int:
        return 1 if any(s["status"] == "failed" for s in self.statuses) else 0


def _write_manifest(config: PipelineConfig, command: str, result: CommandResult, started: float) -> None:
    manifest = {
        "command": command,
        "config": config.snapshot(),
        "sentences": result.statuses,
        "problems": result.problems,
        "provider_calls": result.provider_calls,
        "started_at": started,
        "finished_at": time.time(),
    }
    write_json(os.path.join(config.out_dir, f"{command}.manifest.json"), manifest)


def _run_pool(config: PipelineConfig, items, worker):
    """Apply worker over items with bounded concurrency, preserving item order."""
    if not items:
        return []
    with ThreadPoolExecutor(max_workers=config.concurrency) as pool:
        return list(pool.map(worker, items))


def cmd_extract(config: PipelineConfig) -> int:
    """Extract one repaired graph per sentence into the graphs directory."""
    started = time.time()
    sentences = load_sentences(config.sentences_path)
    provider = config.make_provider()
    graphs_dir = config.resolved_graphs_dir()
    os.makedirs(graphs_dir, exist_ok=True)
    result = CommandResult()

    def work(sentence: Sentence) -> dict:
        try:
            kg = extract_kg(
                sentence,
                provider,
                loop_time=config.loop_time,
                model_name=config.model,
                temperature=config.temperature,
            )
        except (ExtractionFailedError, GazeGraphError) as exc:
            return {"sentence_id": sentence.sentence_id, "status": "failed", "cause": str(exc)}
        provenance = dict(kg.provenance)
        provenance["task"] = sentence.task
        kg = KnowledgeGraph(kg.sentence_id, kg.nodes, kg.edges, provenance)
        report = compute_error_report(kg, sentence)
        save_graph(kg, report, graph_path(graphs_dir, sentence.sentence_id))
        return {"sentence_id": sentence.sentence_id, "status": "extracted"}

    result.statuses = _run_pool(config, sentences, work)
    result.provider_calls = provider.call_count
    _write_manifest(config, "extract", result, started)
    return result.exit_code


def cmd_label(config: PipelineConfig) -> int:
    """Assign importance labels to every extracted graph; idempotent re-run."""
    started = time.time()
    sentences = {s.sentence_id: s for s in load_sentences(config.sentences_path)}
    graphs = load_graphs_dir(config.resolved_graphs_dir())
    provider = config.make_provider()
    graphs_dir = config.resolved_graphs_dir()
    result = CommandResult()

    def work(sentence_id: str) -> dict:
        sentence = sentences[sentence_id]
        if sentence_id not in graphs:
            return {"sentence_id": sentence_id, "status": "failed", "cause": "no extracted graph"}
        kg, report = graphs[sentence_id]
        if not kg.nodes:
            return {"sentence_id": sentence_id, "status": "failed", "cause": "graph has no nodes"}
        try:
            labeled = assign_importance(
                kg,
                sentence,
                provider,
                votes=config.votes,
                model_name=config.model,
                temperature=config.temperature,
            )
        except (ImportanceFailedError, GazeGraphError) as exc:
            return {"sentence_id": sentence_id, "status": "failed", "cause": str(exc)}
        save_graph(labeled, report, graph_path(graphs_dir, sentence_id))
        return {"sentence_id": sentence_id, "status": "labeled"}

    result.statuses = _run_pool(config, sorted(sentences), work)
    for sentence_id in sorted(set(graphs) - set(sentences)):
        result.problems.append(f"graph {sentence_id!r} has no sentence in the input file; skipped")
    result.provider_calls = provider.call_count
    _write_manifest(config, "label", result, started)
    return result.exit_code


def _tasks_of(graphs: dict) -> dict[str, str]:
    return {sid: kg.provenance.get("task", "unknown") for sid, (kg, _) in graphs.items()}


def _aggregate_stats(rows: list[dict]) -> dict:
    """Corpus-level averages of the per-graph statistics battery."""
    total = len(rows)
    disconnected = sum(1 for r in rows if not r["is_weakly_connected"])

    def avg(key: str) -> float:
        return statistics.fmean(r[key] for r in rows) if rows else 0.0

    aggregate = {
        "total_graphs": total,
        "disconnected_graphs": disconnected,
        "disconnection_pct": 100.0 * disconnected / total if total else 0.0,
        "avg_nodes": avg("node_count"),
        "avg_edges": avg("edge_count"),
        "avg_degree": avg("average_degree"),
        "avg_path_length": avg("average_path_length"),
        "avg_clustering": avg("clustering_coefficient"),
        "avg_diameter": avg("diameter"),
        "avg_density": avg("density"),
        "avg_triangles": avg("triangle_count"),
        "avg_adjacency_rank": avg("adjacency_rank"),
    }
    for pattern in PATTERN_NAMES:
        hits = sum(1 for r in rows if pattern in r["pattern_flags"])
        aggregate[f"{pattern}_pct"] = 100.0 * hits / total if total else 0.0
    return aggregate


def compute_metrics(graphs: dict) -> tuple[list[dict], dict]:
    """Per-graph statistics rows plus per-task and overall aggregates."""
    tasks = _tasks_of(graphs)
    rows = []
    for sentence_id in sorted(graphs):
        kg, _ = graphs[sentence_id]
        stats = graph_statistics_for(kg).as_dict()
        stats["sentence_id"] = sentence_id
        stats["task"] = tasks[sentence_id]
        rows.append(stats)
    summary = {"all": _aggregate_stats(rows)}
    for task in sorted({r["task"] for r in rows}):
        summary[task] = _aggregate_stats([r for r in rows if r["task"] == task])
    return rows, summary


def metrics_impl(config: PipelineConfig) -> tuple[CommandResult, list[dict], dict]:
    started = time.time()
    graphs = load_graphs_dir(config.resolved_graphs_dir())
    if not graphs:
        raise GazeGraphError(f"no graphs found in {config.resolved_graphs_dir()}")
    rows, summary = compute_metrics(graphs)

    columns = [
        "sentence_id",
        "task",
        "node_count",
        "edge_count",
        "is_weakly_connected",
        "average_degree",
        "average_path_length",
        "clustering_coefficient",
        "diameter",
        "density",
        "triangle_count",
        "adjacency_rank",
        "pattern_flags",
    ]
    csv_rows = [
        [";".join(r[c]) if c == "pattern_flags" else r[c] for c in columns] for r in rows
    ]
    os.makedirs(config.out_dir, exist_ok=True)
    write_csv(os.path.join(config.out_dir, "metrics.csv"), columns, csv_rows)
    write_json(os.path.join(config.out_dir, "metrics_summary.json"), summary)

    result = CommandResult(statuses=[{"sentence_id": sid, "status": "measured"} for sid in sorted(graphs)])
    _write_manifest(config, "metrics", result, started)
    return result, rows, summary


def cmd_metrics(config: PipelineConfig) -> int:
    return metrics_impl(config)[0].exit_code


def compute_roc(graphs: dict, metric_filter: str = "") -> tuple[dict, list[dict], list[str]]:
    """Pooled per-task ROC/AUC for each centrality measure, plus per-graph AUCs.

    Returns (summary keyed task -> metric, per-graph AUC rows, problems).
    Unlabeled graphs are skipped with a problem note; a single-class task is
    reported as undefined rather than failing the run.
    """
    tasks = _tasks_of(graphs)
    metrics = [metric_filter] if metric_filter else sorted(MEASURES)
    problems = []
    labeled: dict[str, KnowledgeGraph] = {}
    for sentence_id in sorted(graphs):
        kg, _ = graphs[sentence_id]
        if kg.is_labeled:
            labeled[sentence_id] = kg
        else:
            problems.append(f"graph {sentence_id!r} is unlabeled; excluded from ROC")
    if not labeled:
        raise GazeGraphError("no labeled graphs found; run the label command first")

    scores = {sid: centrality_scores(kg) for sid, kg in labeled.items()}
    summary: dict[str, dict] = {}
    per_graph_rows: list[dict] = []
    for task in sorted({tasks[sid] for sid in labeled}):
        task_sids = [sid for sid in sorted(labeled) if tasks[sid] == task]
        summary[task] = {}
        for metric in metrics:
            pooled = []
            for sid in task_sids:
                kg = labeled[sid]
                pooled.extend((n.importance, scores[sid][metric][n.id]) for n in kg.nodes)
            try:
                curve = roc_curve(pooled)
                summary[task][metric] = {
                    "auc": curve.auc,
                    "nodes": len(pooled),
                    "points": [(p.threshold, p.fpr, p.tpr) for p in curve.points],
                }
            except UndefinedAucError as exc:
                summary[task][metric] = {"auc": None, "nodes": len(pooled), "undefined": str(exc)}
    for sid in sorted(labeled):
        kg = labeled[sid]
        for metric in metrics:
            pairs = [(n.importance, scores[sid][metric][n.id]) for n in kg.nodes]
            try:
                value = roc_curve(pairs).auc
            except UndefinedAucError:
                value = None
            per_graph_rows.append(
                {"sentence_id": sid, "task": tasks[sid], "metric": metric, "auc": value}
            )
    return summary, per_graph_rows, problems


def roc_impl(config: PipelineConfig) -> tuple[CommandResult, dict, list[dict]]:
    started = time.time()
    graphs = load_graphs_dir(config.resolved_graphs_dir())
    summary, per_graph_rows, problems = compute_roc(graphs, config.metric)

    os.makedirs(config.out_dir, exist_ok=True)
    summary_out: dict[str, dict] = {}
    for task, metrics in summary.items():
        summary_out[task] = {}
        for metric, entry in metrics.items():
            if entry.get("auc") is not None:
                write_csv(
                    os.path.join(config.out_dir, f"roc_{task}_{metric}.csv"),
                    ["threshold", "fpr", "tpr"],
                    entry["points"],
                )
            summary_out[task][metric] = {k: v for k, v in entry.items() if k != "points"}
    write_json(os.path.join(config.out_dir, "auc_summary.json"), summary_out)
    write_csv(
        os.path.join(config.out_dir, "per_graph_auc.csv"),
        ["sentence_id", "task", "metric", "auc"],
        [
            [r["sentence_id"], r["task"], r["metric"], "" if r["auc"] is None else r["auc"]]
            for r in per_graph_rows
        ],
    )

    result = CommandResult(
        statuses=[{"sentence_id": sid, "status": "scored"} for sid in sorted(graphs)],
        problems=problems,
    )
    _write_manifest(config, "roc", result, started)
    return result, summary, per_graph_rows


def cmd_roc(config: PipelineConfig) -> int:
    return roc_impl(config)[0].exit_code


def compute_fixation_stats(graphs: dict, sentences: dict[str, Sentence], records) -> tuple[dict, list[str]]:
    """Per-subject alignment statistics plus the cohort summary.

    Returns a JSON-ready dict and a list of warnings (skipped records,
    rejected indices). Only labeled graphs with a matching sentence take part.
    """
    problems: list[str] = []
    usable: dict[str, KnowledgeGraph] = {}
    token_maps = {}
    for sentence_id in sorted(graphs):
        kg, _ = graphs[sentence_id]
        if sentence_id not in sentences:
            problems.append(f"graph {sentence_id!r} has no sentence; fixations skipped")
            continue
        if not kg.is_labeled:
            problems.append(f"graph {sentence_id!r} is unlabeled; fixations skipped")
            continue
        usable[sentence_id] = kg
        token_maps[sentence_id] = build_token_map(kg, sentences[sentence_id])

    by_subject_sentence: dict[str, dict[str, list]] = {}
    skipped = 0
    for rec in records:
        if rec.sentence_id not in usable:
            skipped += 1
            continue
        by_subject_sentence.setdefault(rec.subject_id, {}).setdefault(rec.sentence_id, []).append(rec)
    if skipped:
        problems.append(f"{skipped} fixation record(s) referenced sentences without labeled graphs")

    subjects_out = {}
    stats_list = []
    rejected_total = 0
    for subject_id in sorted(by_subject_sentence):
        per_sentence_totals = {}
        unmapped = {}
        for sentence_id, recs in by_subject_sentence[subject_id].items():
            agg = aggregate_fixations(recs, token_maps[sentence_id])
            per_sentence_totals[sentence_id] = agg.element_totals
            unmapped[sentence_id] = agg.unmapped_total
            rejected_total += agg.rejected
        stats = subject_importance_stats(subject_id, per_sentence_totals, usable)
        stats_list.append(stats)

        def split_dict(split):
            return {
                "mean_important": split.mean_important,
                "mean_non_important": split.mean_non_important,
                "se_important": split.se_important,
                "se_non_important": split.se_non_important,
                "n_important": split.n_important,
                "n_non_important": split.n_non_important,
            }

        subjects_out[subject_id] = {
            "nodes": split_dict(stats.nodes),
            "edges": split_dict(stats.edges),
            "unmapped_fixations": sum(unmapped.values()),
        }
    if rejected_total:
        problems.append(f"{rejected_total} fixation record(s) had out-of-range word_index")

    cohort = None
    if len(stats_list) >= 2:
        summary = cohort_summary(stats_list)
        cohort = {
            "mean_difference": summary.mean_difference,
            "sd_of_difference": summary.sd_of_difference,
            "per_subject_differences": summary.per_subject_differences,
        }
    elif stats_list:
        problems.append("cohort summary needs at least 2 subjects")

    return {"subjects": subjects_out, "cohort": cohort, "warnings": problems}, problems


def fixations_impl(config: PipelineConfig) -> tuple[CommandResult, dict]:
    started = time.time()
    graphs = load_graphs_dir(config.resolved_graphs_dir())
    sentences = {s.sentence_id: s for s in load_sentences(config.sentences_path)}
    records, schema_problems = load_fixations(config.fixations_path)
    stats, problems = compute_fixation_stats(graphs, sentences, records)
    stats["warnings"] = schema_problems + stats["warnings"]

    os.makedirs(config.out_dir, exist_ok=True)
    write_json(os.path.join(config.out_dir, "fixation_stats.json"), stats)
    plot_rows = []
    for subject_id in sorted(stats["subjects"]):
        nodes = stats["subjects"][subject_id]["nodes"]
        for category in ("important", "non_important"):
            plot_rows.append(
                [
                    subject_id,
                    category,
                    nodes[f"mean_{category}"],
                    "" if nodes[f"se_{category}"] is None else nodes[f"se_{category}"],
                ]
            )
    write_csv(
        os.path.join(config.out_dir, "fixation_plot.csv"),
        ["subject", "category", "mean", "se"],
        plot_rows,
    )

    result = CommandResult(
        statuses=[{"sentence_id": sid, "status": "aligned"} for sid in sorted(graphs)],
        problems=schema_problems + problems,
    )
    _write_manifest(config, "fixations", result, started)
    return result, stats


def cmd_fixations(config: PipelineConfig) -> int:
    return fixations_impl(config)[0].exit_code
