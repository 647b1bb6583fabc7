"""Command-line interface: convert archives, validate bundles."""

from __future__ import annotations

import argparse
import sys

from . import IngestError, __version__
from .convert import convert_dataset
from .validate import validate_canonical


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zuco-ingest",
        description="Convert eye-tracking task archives (MATLAB v7.3) into "
        "sentences.jsonl + fixations.jsonl, and validate converted bundles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert every archive in a directory")
    p.add_argument("--src", required=True, help="directory of results<SUBJECT>_<TAG>.mat files")
    p.add_argument("--out", required=True, help="output directory for the bundle")

    p = sub.add_parser("validate", help="check a converted bundle")
    p.add_argument("--bundle", required=True, help="directory holding the bundle files")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "convert":
            bundle = convert_dataset(args.src, args.out)
            totals = bundle.log["totals"]
            print(
                f"converted {totals['sentences']} sentences, "
                f"{totals['fixation_records']} fixation records "
                f"({totals['records_dropped']} dropped, "
                f"{len(bundle.log['skipped'])} archives skipped) -> {bundle.out_dir}"
            )
            return 0
        report = validate_canonical(args.bundle)
        for violation in report.violations:
            print(violation, file=sys.stderr)
        print(
            f"checked {report.sentences_checked} sentence lines, "
            f"{report.fixations_checked} fixation lines: "
            f"{len(report.violations)} violation(s)"
        )
        return 0 if report.ok else 1
    except (IngestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
