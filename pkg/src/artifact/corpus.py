"""Corpus indexing and the per-class corpus description table."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from .annotations import AnnotationSet, load_annotations
from .edf import parse_edf, read_header
from .labels import ARTIFACT_CLASSES, ArtifactClass

logger = logging.getLogger(__name__)

# TUH-style stems: 00000254_s005_t000
DEFAULT_PATTERN = r"^(?P<patient>[^_]+)_(?P<session>s\d+)"
ANNOTATION_SUFFIXES = (".csv",)


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    patient_id: str
    session_id: str
    record_id: str
    edf_path: Path
    annotation_path: Path

    def load(self, target_rate: float | None = 256.0):
        rec = parse_edf(self.edf_path.read_bytes(), target_rate, self.patient_id, self.session_id)
        ann = load_annotations(self.annotation_path.read_text(), rec.duration_s)
        return rec, ann


@dataclass
class CorpusIndex:
    root: Path
    entries: list[CorpusEntry]
    skipped: list[Path] = field(default_factory=list)

    @property
    def patients(self) -> list[str]:
        return sorted({e.patient_id for e in self.entries})

    def __len__(self):
        return len(self.entries)


def _ids(rel: Path, patient_component: int | None, pattern: re.Pattern) -> tuple[str, str]:
    m = pattern.search(rel.stem)
    session = m.group("session") if m and "session" in m.groupdict() else rel.stem
    if patient_component is not None and -len(rel.parts) <= patient_component < len(rel.parts) - 1:
        return rel.parts[patient_component], session
    if m:
        return m.group("patient"), session
    if len(rel.parts) > 1:
        return rel.parts[0], session
    raise CorpusError(f"cannot derive patient id from {rel}")


def corpus_scan(root, patient_component: int | None = None,
                pattern: str = DEFAULT_PATTERN) -> CorpusIndex:
    """Pair every ``.edf`` under ``root`` with its same-stem annotation file.

    ``patient_component`` picks the patient id from the relative path;
    otherwise ``pattern`` (named groups ``patient``/``session``) is matched
    against the file stem.
    """
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"unreadable directory {root}")
    rx = re.compile(pattern)
    entries, skipped = [], []
    for edf in sorted(root.rglob("*"), key=lambda p: p.as_posix()):
        if edf.suffix.lower() != ".edf" or not edf.is_file():
            continue
        ann = next((edf.with_suffix(s) for s in ANNOTATION_SUFFIXES if edf.with_suffix(s).is_file()), None)
        if ann is None:
            logger.warning("no annotation file for %s; skipped", edf)
            skipped.append(edf)
            continue
        rel = edf.relative_to(root)
        patient, session = _ids(rel, patient_component, rx)
        entries.append(CorpusEntry(patient, session, rel.with_suffix("").as_posix(), edf, ann))
    if not entries:
        raise CorpusError(f"empty corpus at {root}")
    return CorpusIndex(root, entries, skipped)


@dataclass
class ClassStats:
    patients: int
    sessions: int
    seconds: float


def corpus_stats(idx: CorpusIndex, annotations: dict[str, AnnotationSet] | None = None,
                 durations: dict[str, float] | None = None) -> dict[ArtifactClass, ClassStats]:
    """Per-class patient, session and annotated-second totals.

    Channel-scoped events are collapsed to record-level intervals before
    seconds are summed; null seconds are what the artifact union leaves.
    Both mappings are keyed by ``record_id`` and are read from disk when
    omitted.
    """
    annotations = dict(annotations or {})
    durations = dict(durations or {})
    for e in idx.entries:
        if e.record_id not in durations:
            durations[e.record_id] = read_header(e.edf_path).duration_s
        if e.record_id not in annotations:
            annotations[e.record_id] = load_annotations(e.annotation_path.read_text(),
                                                        durations[e.record_id])

    pats = {c: set() for c in ArtifactClass}
    sess = {c: set() for c in ArtifactClass}
    secs = {c: 0.0 for c in ArtifactClass}
    for e in idx.entries:
        ann = annotations[e.record_id]
        for c in ARTIFACT_CLASSES:
            s = ann.seconds(c)
            if s > 0:
                pats[c].add(e.patient_id)
                sess[c].add((e.patient_id, e.session_id))
                secs[c] += s
        null = durations[e.record_id] - ann.seconds()
        if null > 0:
            pats[ArtifactClass.null].add(e.patient_id)
            sess[ArtifactClass.null].add((e.patient_id, e.session_id))
            secs[ArtifactClass.null] += null
    return {c: ClassStats(len(pats[c]), len(sess[c]), secs[c]) for c in ArtifactClass}


STATS_NAMES = {
    ArtifactClass.eyem: "Eye movements",
    ArtifactClass.chew: "Chewing",
    ArtifactClass.shiv: "Shivering",
    ArtifactClass.elpp: "Electrode pops",
    ArtifactClass.musc: "Muscle movements",
    ArtifactClass.null: "Null",
}


def render_stats(stats: dict[ArtifactClass, ClassStats]) -> str:
    lines = [f"{'Artifact type':<18}{'# patients':>12}{'# sessions':>12}{'# seconds':>14}"]
    for c in ArtifactClass:
        s = stats[c]
        secs = f"{s.seconds:.0f}" if abs(s.seconds - round(s.seconds)) < 1e-6 else f"{s.seconds:.2f}"
        lines.append(f"{STATS_NAMES[c]:<18}{s.patients:>12}{s.sessions:>12}{secs:>14}")
    return "\n".join(lines)
