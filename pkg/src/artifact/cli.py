"""Command-line entry point: stats, extract, bench, synth, report."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .annotations import AnnotationError
from .bench import BenchError, load_config, render_report, run_benchmark, with_overrides
from .cache import features_csv
from .corpus import corpus_scan, corpus_stats, render_stats
from .dataset import extract_corpus
from .edf import EDFError
from .features import FeatureConfig
from .montage import MontageError
from .synth import SynthParams, synth_corpus

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
DATA_ERRORS = (EDFError, AnnotationError, MontageError, OSError, ValueError, BenchError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _stats(args):
    idx = corpus_scan(args.root, args.patient_component)
    print(render_stats(corpus_stats(idx)))


def _extract(args):
    idx = corpus_scan(args.root, args.patient_component)
    sessions = extract_corpus(idx, FeatureConfig(), cache_dir=args.cache, workers=args.workers)
    n = sum(len(s.labels) for s in sessions)
    print(f"{len(sessions)} sessions, {n} windows cached in {args.cache}")
    if args.csv:
        rows = ((s.entry.patient_id, s.entry.session_id, t, lab, vec)
                for s in sessions for t, lab, vec in zip(s.starts, s.labels, s.X))
        Path(args.csv).write_text(features_csv(rows))


def _bench(args):
    cfg = load_config(args.config)
    cfg = with_overrides(cfg, runs=args.runs, budget=args.budget, output_dir=args.output,
                         corpus_root=args.root, seed=args.seed,
                         families=tuple(args.families.split(",")) if args.families else None)
    report = run_benchmark(cfg)
    print(render_report(report, "table"))
    print(f"\nreport written to {Path(cfg.output_dir) / 'report.json'}")


def _synth(args):
    params = SynthParams(args.patients, args.sessions, args.duration, args.artifact_rate)
    idx = synth_corpus(args.out, args.seed, params)
    print(f"wrote {len(idx)} sessions for {len(idx.patients)} patients to {args.out}")


def _report(args):
    report = json.loads(Path(getattr(args, "in")).read_text())
    print(render_report(report, args.format, args.view))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="artifact", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("stats", help="per-class corpus description table")
    s.add_argument("root")
    s.add_argument("--patient-component", type=int)
    s.set_defaults(func=_stats)

    s = sub.add_parser("extract", help="extract and cache features for a corpus")
    s.add_argument("root")
    s.add_argument("--cache", required=True)
    s.add_argument("--csv", help="also export one row per window to this CSV file")
    s.add_argument("--patient-component", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=_extract)

    s = sub.add_parser("bench", help="tune, train and evaluate the classifier families")
    s.add_argument("--config", required=True)
    s.add_argument("--root", help="override corpus_root")
    s.add_argument("--runs", type=int)
    s.add_argument("--budget", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--families")
    s.add_argument("--output")
    s.set_defaults(func=_bench)

    s = sub.add_parser("synth", help="write a synthetic corpus")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--patients", type=int, default=4)
    s.add_argument("--sessions", type=int, default=1)
    s.add_argument("--duration", type=float, default=120.0)
    s.add_argument("--artifact-rate", type=float, default=0.5)
    s.set_defaults(func=_synth)

    s = sub.add_parser("report", help="render a benchmark report")
    s.add_argument("--in", required=True)
    s.add_argument("--format", choices=("table", "json", "csv"), default="table")
    s.add_argument("--view", choices=("per_epoch", "per_window"), default="per_epoch")
    s.set_defaults(func=_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        logging.getLogger(__name__).exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
