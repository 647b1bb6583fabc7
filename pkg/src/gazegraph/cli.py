"""Command-line interface for the extraction and analysis pipeline."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .model import GazeGraphError
from .pipeline import (
    DEFAULT_CONCURRENCY,
    DEFAULT_TOP_FRACTION,
    PipelineConfig,
    cmd_extract,
    cmd_fixations,
    cmd_label,
    cmd_metrics,
    cmd_roc,
)
from .extraction import DEFAULT_LOOP_TIME, DEFAULT_MODEL, DEFAULT_TEMPERATURE
from .report import cmd_report

COMMANDS = {
    "extract": cmd_extract,
    "label": cmd_label,
    "metrics": cmd_metrics,
    "roc": cmd_roc,
    "fixations": cmd_fixations,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazegraph",
        description="Extract sentence knowledge graphs with an LLM, label important "
        "nodes, and compare centrality and eye fixations against the labels.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--graphs-dir", default="", help="graph directory (default: <out>/graphs)")

    def add_provider(p: argparse.ArgumentParser) -> None:
        p.add_argument("--provider", choices=["mock", "http"], default="mock")
        p.add_argument("--endpoint", default="", help="chat-completions URL for --provider http")
        p.add_argument("--model", default=DEFAULT_MODEL)
        p.add_argument("--fixtures", default="", help="JSONL fixture file for --provider mock")
        p.add_argument("--temperature", type=float, default=DEFAULT_TEMPERATURE)
        p.add_argument("--concurrency", type=int, default=DEFAULT_CONCURRENCY)

    p = sub.add_parser("extract", help="extract one repaired graph per sentence")
    add_common(p)
    add_provider(p)
    p.add_argument("--sentences", required=True)
    p.add_argument("--loop-time", type=int, default=DEFAULT_LOOP_TIME)

    p = sub.add_parser("label", help="assign 0/1 importance to every graph node")
    add_common(p)
    add_provider(p)
    p.add_argument("--sentences", required=True)
    p.add_argument("--votes", type=int, default=1, help="odd number of labeling votes")

    p = sub.add_parser("metrics", help="per-graph statistics and per-task aggregates")
    add_common(p)

    p = sub.add_parser("roc", help="ROC/AUC of centrality scores vs. importance labels")
    add_common(p)
    p.add_argument("--metric", default="", choices=["", "pagerank", "degree", "betweenness", "closeness"])

    p = sub.add_parser("fixations", help="align eye fixations with labeled graphs")
    add_common(p)
    p.add_argument("--sentences", required=True)
    p.add_argument("--fixations", required=True)
    p.add_argument("--aggregation-mode", default="sentence_node", choices=["sentence_node", "sentence"])

    p = sub.add_parser("report", help="write report.md, plot CSVs, and figures")
    add_common(p)
    p.add_argument("--sentences", default="")
    p.add_argument("--fixations", default="")
    p.add_argument("--metric", default="", choices=["", "pagerank", "degree", "betweenness", "closeness"])
    p.add_argument("--top-fraction", type=float, default=DEFAULT_TOP_FRACTION)
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig(
        provider_kind=getattr(args, "provider", "mock"),
        endpoint=getattr(args, "endpoint", ""),
        model=getattr(args, "model", DEFAULT_MODEL),
        loop_time=getattr(args, "loop_time", DEFAULT_LOOP_TIME),
        temperature=getattr(args, "temperature", DEFAULT_TEMPERATURE),
        top_fraction=getattr(args, "top_fraction", DEFAULT_TOP_FRACTION),
        concurrency=getattr(args, "concurrency", DEFAULT_CONCURRENCY),
        votes=getattr(args, "votes", 1),
        aggregation_mode=getattr(args, "aggregation_mode", "sentence_node"),
        sentences_path=getattr(args, "sentences", ""),
        fixtures_path=getattr(args, "fixtures", ""),
        fixations_path=getattr(args, "fixations", ""),
        out_dir=args.out,
        graphs_dir=args.graphs_dir,
        metric=getattr(args, "metric", ""),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        return COMMANDS[args.command](config)
    except (GazeGraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
