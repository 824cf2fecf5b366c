"""Window labeling, patient-level splits, and training-set rebalancing."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
import hashlib

import numpy as np

from .annotations import AnnotationSet, load_annotations
from .cache import CacheError, read_cache, write_cache
from .corpus import CorpusEntry, CorpusIndex
from .edf import parse_edf
from .features import FeatureConfig, Window, extract_matrix
from .labels import ARTIFACT_CLASSES, N_CLASSES, ArtifactClass
from .montage import to_tcp

logger = logging.getLogger(__name__)

DEFAULT_RATIOS = (0.6, 0.2, 0.2)
DEFAULT_COVERAGE = 0.5


def label_interval(start: float, stop: float, ann: AnnotationSet,
                   coverage: float = DEFAULT_COVERAGE) -> ArtifactClass:
    """Class of [start, stop): the artifact covering most of it, else null.

    Ties on overlap go to the class whose overlapping event starts first,
    then to the smaller class code.
    """
    need = coverage * (stop - start)
    best = None
    for cls in ARTIFACT_CLASSES:
        overlap, first = 0.0, None
        for a, b in ann.intervals(cls):
            o = min(b, stop) - max(a, start)
            if o > 0:
                overlap += o
                first = a if first is None else min(first, a)
        if first is None or overlap < need - 1e-9:
            continue
        key = (-overlap, first, int(cls))
        if best is None or _beats(key, best[0]):
            best = (key, cls)
    return ArtifactClass.null if best is None else best[1]


def _beats(key, other) -> bool:
    if abs(key[0] - other[0]) > 1e-9:
        return key[0] < other[0]
    return key[1:] < other[1:]


def label_window(w: Window, ann: AnnotationSet, window_s: float = 1.0,
                 coverage: float = DEFAULT_COVERAGE) -> ArtifactClass:
    return label_interval(w.start_s, w.start_s + window_s, ann, coverage)


def label_starts(starts, window_s: float, ann: AnnotationSet,
                 coverage: float = DEFAULT_COVERAGE) -> np.ndarray:
    if not ann.events:
        return np.full(len(starts), int(ArtifactClass.null), dtype=np.int64)
    return np.array([label_interval(s, s + window_s, ann, coverage) for s in starts], dtype=np.int64)


@dataclass
class LabeledFeatureSet:
    X: np.ndarray
    y: np.ndarray
    patient: np.ndarray
    session: np.ndarray
    start: np.ndarray
    record: np.ndarray = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.X = self.X.reshape(len(self.y), self.X.shape[-1] if self.X.ndim > 1 else -1)
        self.y = np.asarray(self.y, dtype=np.int64)
        self.patient = np.asarray(self.patient, dtype=object)
        self.session = np.asarray(self.session, dtype=object)
        self.start = np.asarray(self.start, dtype=np.float64)
        if self.record is None:
            self.record = self.session.copy()
        self.record = np.asarray(self.record, dtype=object)
        if not (len(self.X) == len(self.patient) == len(self.session) == len(self.start) == len(self.record)):
            raise ValueError("row fields disagree in length")

    def __len__(self):
        return len(self.y)

    @property
    def class_counts(self) -> dict[ArtifactClass, int]:
        counts = np.bincount(self.y, minlength=N_CLASSES)
        return {ArtifactClass(c): int(n) for c, n in enumerate(counts) if n}

    @property
    def patients(self) -> set[str]:
        return set(self.patient.tolist())

    def take(self, idx) -> "LabeledFeatureSet":
        idx = np.asarray(idx)
        return LabeledFeatureSet(self.X[idx], self.y[idx], self.patient[idx], self.session[idx],
                                 self.start[idx], self.record[idx])

    @classmethod
    def concat(cls, parts: list["LabeledFeatureSet"], dim: int = 22) -> "LabeledFeatureSet":
        if not parts:
            return cls(np.empty((0, dim)), np.empty(0, np.int64), [], [], [], [])
        return cls(np.vstack([p.X for p in parts]), np.concatenate([p.y for p in parts]),
                   np.concatenate([p.patient for p in parts]), np.concatenate([p.session for p in parts]),
                   np.concatenate([p.start for p in parts]), np.concatenate([p.record for p in parts]))


@dataclass
class SplitAssignment:
    train: list[str]
    validation: list[str]
    test: list[str]
    ratios: tuple[float, float, float] = DEFAULT_RATIOS
    seed: int = 0

    def of(self, patient: str) -> str:
        for name in ("train", "validation", "test"):
            if patient in getattr(self, name):
                return name
        raise KeyError(patient)

    def to_json(self) -> str:
        return json.dumps({"seed": self.seed, "ratios": list(self.ratios), "train": self.train,
                           "validation": self.validation, "test": self.test}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "SplitAssignment":
        d = json.loads(text)
        return cls(d["train"], d["validation"], d["test"], tuple(d["ratios"]), d["seed"])


def split_sizes(n: int, ratios=DEFAULT_RATIOS) -> tuple[int, int, int]:
    """floor(n*r) for validation and test (at least 1 each), rest to train."""
    if n < 3:
        raise ValueError(f"need at least 3 patients for a three-way split, got {n}")
    n_val = max(1, int(np.floor(n * ratios[1] + 1e-9)))
    n_test = max(1, int(np.floor(n * ratios[2] + 1e-9)))
    n_train = n - n_val - n_test
    if n_train < 1:
        raise ValueError(f"ratios {ratios} leave no training patients out of {n}")
    return n_train, n_val, n_test


def patient_split(patients, ratios=DEFAULT_RATIOS, seed: int = 0) -> SplitAssignment:
    if isinstance(patients, CorpusIndex):
        patients = patients.patients
    patients = sorted(set(patients))
    n_train, n_val, _ = split_sizes(len(patients), ratios)
    order = np.random.default_rng(seed).permutation(len(patients))
    shuffled = [patients[i] for i in order]
    return SplitAssignment(sorted(shuffled[:n_train]), sorted(shuffled[n_train:n_train + n_val]),
                           sorted(shuffled[n_train + n_val:]), tuple(ratios), seed)


def undersample(s: LabeledFeatureSet, seed: int = 0) -> LabeledFeatureSet:
    """Cut every class down to the smallest class count, without replacement."""
    if len(s) == 0:
        raise ValueError("cannot undersample an empty set")
    rng = np.random.default_rng(seed)
    counts = s.class_counts
    m = min(counts.values())
    keep = []
    for cls in sorted(counts):
        idx = np.flatnonzero(s.y == cls)
        if len(idx) > m:
            idx = np.sort(rng.choice(idx, m, replace=False))
        keep.append(idx)
    keep = np.concatenate(keep)
    return s.take(keep[rng.permutation(len(keep))])


@dataclass
class SessionFeatures:
    entry: CorpusEntry
    duration_s: float
    starts: np.ndarray
    labels: np.ndarray
    X: np.ndarray
    epoch_labels: np.ndarray = field(default=None)

    def as_set(self) -> LabeledFeatureSet:
        n = len(self.labels)
        e = self.entry
        return LabeledFeatureSet(self.X, self.labels, [e.patient_id] * n, [e.session_id] * n,
                                 self.starts, [e.record_id] * n)


def _content_hash(entry: CorpusEntry) -> str:
    h = hashlib.sha256()
    h.update(entry.edf_path.read_bytes())
    h.update(b"\0")
    h.update(entry.annotation_path.read_bytes())
    return h.hexdigest()[:16]


def _cache_key(cfg: FeatureConfig, coverage: float, target_rate: float) -> str:
    blob = f"{cfg.digest()}|{coverage!r}|{target_rate!r}".encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def session_features(entry: CorpusEntry, cfg: FeatureConfig = FeatureConfig(),
                     coverage: float = DEFAULT_COVERAGE, target_rate: float = 256.0,
                     cache_dir=None) -> SessionFeatures:
    """Features and window labels of one session, through the EAF1 cache."""
    key = _cache_key(cfg, coverage, target_rate)
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"{key}-{_content_hash(entry)}.eaf"
        if path.is_file():
            try:
                header, starts, labels, X = read_cache(path)
                ann = load_annotations(entry.annotation_path.read_text(), header["duration_s"])
                sf = SessionFeatures(entry, header["duration_s"], starts, labels, X)
                sf.epoch_labels = epoch_truth(sf, ann, coverage)
                return sf
            except (CacheError, KeyError, ValueError) as exc:
                logger.warning("ignoring unreadable cache %s: %s", path, exc)

    rec, ann = entry.load(target_rate)
    starts, X = extract_matrix(to_tcp(rec), cfg)
    labels = label_starts(starts, cfg.window_s, ann, coverage)
    sf = SessionFeatures(entry, rec.duration_s, starts, labels, X)
    sf.epoch_labels = epoch_truth(sf, ann, coverage)
    if path is not None:
        write_cache(path, key, entry.record_id, rec.sample_rate_hz, starts, labels, X,
                    rec.duration_s)
    return sf


def epoch_truth(sf: SessionFeatures, ann: AnnotationSet, coverage: float) -> np.ndarray:
    """Labels of the whole-second epochs [t, t+1) spanned by the windows."""
    n_epochs = int(np.floor(sf.starts[-1])) + 1 if len(sf.starts) else 0
    return label_starts(np.arange(n_epochs, dtype=float), 1.0, ann, coverage)


def extract_corpus(idx: CorpusIndex, cfg: FeatureConfig = FeatureConfig(),
                   coverage: float = DEFAULT_COVERAGE, target_rate: float = 256.0,
                   cache_dir=None, workers: int = 1) -> list[SessionFeatures]:
    """Features for every session, in index order regardless of ``workers``."""
    def one(e):
        return session_features(e, cfg, coverage, target_rate, cache_dir)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, idx.entries))
    return [one(e) for e in idx.entries]


def assemble(sessions: list[SessionFeatures], split: SplitAssignment, seed: int,
             balance: bool = True):
    """Route session rows into (train, validation, test); undersample train."""
    parts = {"train": [], "validation": [], "test": []}
    for sf in sorted(sessions, key=lambda s: (s.entry.patient_id, s.entry.session_id, s.entry.record_id)):
        parts[split.of(sf.entry.patient_id)].append(sf.as_set())
    dim = sessions[0].X.shape[1] if sessions else 22
    train, val, test = (LabeledFeatureSet.concat(parts[k], dim) for k in ("train", "validation", "test"))
    if balance and len(train):
        train = undersample(train, seed)
    return train, val, test


def build_splits(idx: CorpusIndex, cfg: FeatureConfig = FeatureConfig(), ratios=DEFAULT_RATIOS,
                 seed: int = 0, coverage: float = DEFAULT_COVERAGE, cache_dir=None, workers: int = 1):
    sessions = extract_corpus(idx, cfg, coverage, cache_dir=cache_dir, workers=workers)
    split = patient_split(idx.patients, ratios, seed)
    return assemble(sessions, split, seed)
