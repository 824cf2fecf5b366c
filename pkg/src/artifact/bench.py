"""Multi-run benchmark: split, rebalance, tune, refit, and score every family."""

from __future__ import annotations

import ast
import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .classifiers import AlgorithmSpec, aggregate_epochs, fit, save
from .corpus import corpus_scan
from .dataset import DEFAULT_COVERAGE, DEFAULT_RATIOS, SessionFeatures, assemble, extract_corpus, patient_split
from .features import FeatureConfig
from .labels import ArtifactClass
from .metrics import METRIC_COLUMNS, EvalReport, render_table, score
from .space import DISPLAY_NAMES, FAMILIES, SPACES, SearchSpace, check_family
from .tuning import search

logger = logging.getLogger(__name__)


class BenchError(RuntimeError):
    """A benchmark stage failed; the message names the run, family and stage."""


@dataclass
class BenchConfig:
    corpus_root: str = ""
    families: tuple[str, ...] = FAMILIES
    runs: int = 5
    seed: int = 0
    budget: int = 50
    strategy: str = "tpe_lite"
    resplit_per_run: bool = True
    output_dir: str = "bench_out"
    cache_dir: str | None = None
    coverage: float = DEFAULT_COVERAGE
    ratios: tuple[float, float, float] = DEFAULT_RATIOS
    f1_exclude_null: bool = False
    target_rate: float = 256.0
    patient_component: int | None = None
    workers: int = 1
    feature: FeatureConfig = field(default_factory=FeatureConfig)
    # family -> dim name -> replacement bounds {"low", "high"} or {"choices"}
    space: dict = field(default_factory=dict)
    # family -> fixed hyperparameters added to every trial
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.families = tuple(check_family(f) for f in self.families)
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")

    def search_space(self, family: str) -> SearchSpace:
        space = SPACES[family]
        for name, change in self.space.get(family, {}).items():
            space[name]  # KeyError for unknown dims
            space = space.override(name, **change)
        return space

    def echo(self) -> dict:
        d = asdict(self)
        d["families"] = list(self.families)
        d["ratios"] = list(self.ratios)
        d["space"] = {f: {n: {k: list(v) if isinstance(v, tuple) else v for k, v in c.items()}
                          for n, c in dims.items()} for f, dims in self.space.items()}
        return d


def _literal(text: str):
    text = text.strip()
    if text.lower() in ("none", "null"):
        return None
    if text.lower() in ("true", "false", "yes", "no", "on", "off"):
        return text.lower() in ("true", "yes", "on")
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def parse_config(text: str) -> BenchConfig:
    """``key = value`` lines mirroring BenchConfig.

    ``feature.<field>`` sets a FeatureConfig field, ``space.<family>.<dim> =
    lo, hi`` (or a comma list for categorical dims) narrows a search space,
    and ``params.<family>.<name>`` fixes a hyperparameter for every trial.
    """
    top, feat, space, params = {}, {}, {}, {}
    names = {f.name: f for f in fields(BenchConfig)}
    feat_names = {f.name for f in fields(FeatureConfig)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, value = key.strip(), value.strip()
        parts = key.split(".")
        if parts[0] == "feature" and len(parts) == 2 and parts[1] in feat_names:
            feat[parts[1]] = _literal(value)
        elif parts[0] == "space" and len(parts) == 3:
            fam, dim = check_family(parts[1]), parts[2]
            kind = SPACES[fam][dim].kind
            items = [_literal(v) for v in value.split(",")]
            if kind == "categorical":
                space.setdefault(fam, {})[dim] = {"choices": tuple(items)}
            else:
                if len(items) != 2:
                    raise ValueError(f"config line {lineno}: {key} needs 'low, high'")
                space.setdefault(fam, {})[dim] = {"low": items[0], "high": items[1]}
        elif parts[0] == "params" and len(parts) == 3:
            params.setdefault(check_family(parts[1]), {})[parts[2]] = _literal(value)
        elif len(parts) == 1 and key in names and key not in ("feature", "space", "params"):
            if key == "families":
                top[key] = tuple(v.strip() for v in value.split(",") if v.strip())
            elif key == "ratios":
                top[key] = tuple(float(v) for v in value.split(","))
            elif key in ("corpus_root", "output_dir", "cache_dir", "strategy"):
                top[key] = None if value.lower() == "none" else value
            else:
                top[key] = _literal(value)
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    return BenchConfig(**top, feature=FeatureConfig(**feat), space=space, params=params)


def load_config(path) -> BenchConfig:
    return parse_config(Path(path).read_text())


def _epoch_eval(model, sessions: list[SessionFeatures], exclude_null: bool) -> EvalReport:
    truth, pred = [], []
    for sf in sessions:
        if not len(sf.starts):
            continue
        labels = aggregate_epochs(sf.starts, model.predict_scores(sf.X))
        truth.append(sf.epoch_labels)
        pred.append(labels)
    return score(np.concatenate(truth), np.concatenate(pred), exclude_null)


def _null_baseline(sessions: list[SessionFeatures], exclude_null: bool) -> float:
    truth = np.concatenate([sf.epoch_labels for sf in sessions])
    return score(truth, np.full(len(truth), int(ArtifactClass.null)), exclude_null).weighted_f1


def _summary(rows: list[dict]) -> dict:
    mean, std = {}, {}
    for c in METRIC_COLUMNS:
        vals = [r[c] for r in rows if r.get(c) is not None]
        mean[c] = float(np.mean(vals)) if vals else None
        std[c] = float(np.std(vals)) if vals else None
    return {"mean": mean, "std": std}


def run_benchmark(cfg: BenchConfig) -> dict:
    """Run every configured family ``cfg.runs`` times and write the report.

    Run ``r`` (1-based) uses ``seed ^ r`` for its split (when
    ``resplit_per_run``), its undersampling, the search and the refit.
    Output files: ``report.json``, ``report.txt``, per-run JSON logs, trial
    logs (JSON lines), split manifests and the refitted models.
    """
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    cache = Path(cfg.cache_dir) if cfg.cache_dir else out / "cache"

    try:
        idx = corpus_scan(cfg.corpus_root, cfg.patient_component)
        sessions = extract_corpus(idx, cfg.feature, cfg.coverage, cfg.target_rate, cache, cfg.workers)
    except Exception as exc:
        raise BenchError(f"stage extract: {exc}") from exc

    per_family = {f: [] for f in cfg.families}
    run_logs = []
    for r in range(1, cfg.runs + 1):
        seed_r = cfg.seed ^ r
        try:
            split = patient_split(idx.patients, cfg.ratios, seed_r if cfg.resplit_per_run else cfg.seed)
            train, _, _ = assemble(sessions, split, seed_r)
        except Exception as exc:
            raise BenchError(f"run {r} stage split: {exc}") from exc
        (out / f"split_run{r}.json").write_text(split.to_json())
        val_sessions = [s for s in sessions if s.entry.patient_id in split.validation]
        test_sessions = [s for s in sessions if s.entry.patient_id in split.test]
        run_log = {"run": r, "seed": seed_r, "train_rows": len(train),
                   "class_counts": {c.name: n for c, n in train.class_counts.items()},
                   "null_baseline_weighted_f1": _null_baseline(test_sessions, cfg.f1_exclude_null),
                   "families": {}}
        for fam in cfg.families:
            fixed = cfg.params.get(fam, {})

            def objective(hp, fam=fam, fixed=fixed):
                try:
                    m = fit(AlgorithmSpec(fam, {**fixed, **hp}), train, seed_r)
                    return _epoch_eval(m, val_sessions, cfg.f1_exclude_null).weighted_f1
                except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
                    logger.info("run %d %s trial %s failed: %s", r, fam, hp, exc)
                    return math.nan

            try:
                log = search(cfg.search_space(fam), cfg.budget, objective, seed_r, cfg.strategy, cfg.workers)
            except Exception as exc:
                raise BenchError(f"run {r} family {fam} stage tune: {exc}") from exc
            (out / f"trials_run{r}_{fam}.jsonl").write_text(log.to_jsonl(fam))
            best = log.best
            if best is None:
                raise BenchError(f"run {r} family {fam} stage tune: every trial failed")
            try:
                spec = AlgorithmSpec(fam, {**fixed, **best.params})
                model = fit(spec, train, seed_r)
                models = out / "models"
                models.mkdir(exist_ok=True)
                save(model, models / f"run{r}_{fam}.eam")
                per_epoch = _epoch_eval(model, test_sessions, cfg.f1_exclude_null)
                test_X = np.vstack([s.X for s in test_sessions])
                test_y = np.concatenate([s.labels for s in test_sessions])
                per_window = score(test_y, model.predict(test_X), cfg.f1_exclude_null)
            except Exception as exc:
                raise BenchError(f"run {r} family {fam} stage evaluate: {exc}") from exc
            entry = {"best_params": best.params, "validation_weighted_f1": best.score,
                     "converged": bool(model.converged),
                     "per_epoch": per_epoch.row(), "per_window": per_window.row(),
                     "support": {c.name: n for c, n in per_epoch.support.items()}}
            per_family[fam].append(entry)
            run_log["families"][fam] = entry
            (out / f"run{r}.json").write_text(json.dumps(run_log, sort_keys=True, indent=1))
            logger.info("run %d %s: weighted-F1 %.4f", r, fam, per_epoch.weighted_f1)
        run_logs.append(run_log)

    report = {
        "config": cfg.echo(),
        "null_baseline_weighted_f1": float(np.mean([g["null_baseline_weighted_f1"] for g in run_logs])),
        "families": {
            fam: {
                "display": DISPLAY_NAMES[fam],
                "per_epoch": _summary([e["per_epoch"] for e in entries]),
                "per_window": _summary([e["per_window"] for e in entries]),
            }
            for fam, entries in per_family.items()
        },
        "runs": run_logs,
    }
    (out / "report.json").write_text(dumps_report(report))
    (out / "report.txt").write_text(render_report(report, "table") + "\n")
    return report


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1)


def render_report(report: dict, fmt: str = "table", view: str = "per_epoch") -> str:
    fams = report["families"]
    if fmt == "json":
        return dumps_report(report)
    if fmt == "table":
        rows = {v["display"]: v[view]["mean"] for v in fams.values()}
        return render_table(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "algorithm", "view", "stat"] + list(METRIC_COLUMNS))
        for fam, v in fams.items():
            for vw in ("per_epoch", "per_window"):
                for stat in ("mean", "std"):
                    vals = v[vw][stat]
                    w.writerow([fam, v["display"], vw, stat] +
                               ["" if vals[c] is None else repr(vals[c]) for c in METRIC_COLUMNS])
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def with_overrides(cfg: BenchConfig, **changes) -> BenchConfig:
    return replace(cfg, **{k: v for k, v in changes.items() if v is not None})
