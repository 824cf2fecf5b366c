"""Full benchmark on the licensed artifact corpus.

    python3 scripts/reproduce_benchmark.py /path/to/corpus --out results/ [--config scripts/configs/full.cfg]

Writes the corpus description table (stats.txt), the benchmark report
(report.json, report.txt) and both evaluation views side by side with the
reference figures in reference.txt for eyeball comparison.
"""

import argparse
from pathlib import Path

from artifact.bench import load_config, render_report, run_benchmark, with_overrides
from artifact.corpus import corpus_scan, corpus_stats, render_stats
from artifact.metrics import render_table

HERE = Path(__file__).resolve().parent

# Published per-family means over five runs (weighted-F1 as a fraction, the rest in percent).
REFERENCE = {
    "AdaBoost": (0.7375, 62.57, 62.51, 68.63, 2.31, 28.30, 62.88, 63.17),
    "GaussianNB": (0.7773, 67.79, 63.19, 72.67, 16.32, 13.99, 43.47, 69.03),
    "k-NN": (0.7476, 63.76, 60.77, 86.07, 5.95, 26.06, 48.55, 64.67),
    "LDA": (0.8012, 71.43, 58.73, 62.73, 2.50, 26.99, 70.76, 72.39),
    "MLP": (0.7787, 68.23, 68.36, 73.80, 2.05, 34.64, 65.35, 68.93),
    "Random Forests": (0.7834, 68.80, 73.35, 80.35, 3.00, 35.26, 67.25, 69.39),
    "SGD classifier": (0.7887, 69.57, 63.06, 73.61, 3.10, 28.79, 69.01, 70.36),
    "XGBoost": (0.7996, 71.19, 72.38, 74.08, 2.75, 38.75, 67.91, 71.90),
}
COLUMNS = ("weighted_f1", "accuracy", "S_eyem", "S_chew", "S_shiv", "S_elpp", "S_musc", "S_null")


def reference_table() -> str:
    rows = {name: {c: (v if c == "weighted_f1" else v / 100) for c, v in zip(COLUMNS, vals)}
            for name, vals in REFERENCE.items()}
    return render_table(rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("root")
    ap.add_argument("--out", default="results")
    ap.add_argument("--config", default=HERE / "configs" / "full.cfg")
    ap.add_argument("--runs", type=int, default=None)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stats = render_stats(corpus_stats(corpus_scan(args.root)))
    (out / "stats.txt").write_text(stats + "\n")
    print(stats, "\n")

    cfg = with_overrides(load_config(args.config), corpus_root=args.root, output_dir=str(out), runs=args.runs)
    report = run_benchmark(cfg)
    text = "\n\n".join([
        "per-epoch (headline)\n" + render_report(report, "table", "per_epoch"),
        "per-window\n" + render_report(report, "table", "per_window"),
        "reference\n" + reference_table(),
    ])
    (out / "reference.txt").write_text(text + "\n")
    print(text)


if __name__ == "__main__":
    main()
