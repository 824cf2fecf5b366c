"""Artifact annotation files.

Canonical format, one event per line::

    scope,start_s,stop_s,label

``scope`` is ``TERM`` for whole-record events or a channel label. Lines
starting with ``#`` are comments. The corpus ships its own CSV flavour
(``channel,start_time,stop_time,label,confidence``); ``from_native`` maps it
onto the canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .labels import ArtifactClass

TERM = "TERM"


class AnnotationError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Event:
    start_s: float
    stop_s: float
    label: ArtifactClass
    scope: str = TERM


@dataclass
class AnnotationSet:
    events: list[Event] = field(default_factory=list)

    def __len__(self):
        return len(self.events)

    def intervals(self, label: ArtifactClass | None = None) -> list[tuple[float, float]]:
        """Record-level union of event intervals, optionally for one class."""
        spans = sorted((e.start_s, e.stop_s) for e in self.events if label is None or e.label == label)
        merged: list[list[float]] = []
        for a, b in spans:
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return [(a, b) for a, b in merged]

    def seconds(self, label: ArtifactClass | None = None) -> float:
        return sum(b - a for a, b in self.intervals(label))


def parse_annotations(text: str, duration_s: float) -> AnnotationSet:
    events = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 4:
            raise AnnotationError(f"line {lineno}: expected 4 fields, got {len(parts)}")
        scope, start, stop, label = parts
        try:
            start_s, stop_s = float(start), float(stop)
        except ValueError:
            raise AnnotationError(f"line {lineno}: non-numeric time") from None
        try:
            cls = ArtifactClass.parse(label)
        except ValueError:
            raise AnnotationError(f"line {lineno}: unknown label {label!r}") from None
        if cls is ArtifactClass.null:
            raise AnnotationError(f"line {lineno}: null is implicit and cannot be annotated")
        if stop_s <= start_s:
            raise AnnotationError(f"line {lineno}: stop <= start ({stop_s} <= {start_s})")
        if start_s < 0:
            raise AnnotationError(f"line {lineno}: negative start")
        if stop_s > duration_s + 1e-9:
            raise AnnotationError(f"line {lineno}: stop {stop_s} beyond duration {duration_s}")
        events.append(Event(start_s, stop_s, cls, scope or TERM))
    events.sort(key=lambda e: (e.start_s, e.stop_s, int(e.label), e.scope))
    return AnnotationSet(events)


def format_annotations(ann: AnnotationSet) -> str:
    return "".join(f"{e.scope},{e.start_s!r},{e.stop_s!r},{e.label.name}\n" for e in ann.events)


# combined corpus labels such as "eyem_musc" keep their first known component
def _native_label(label: str) -> ArtifactClass | None:
    for part in label.lower().replace("-", "_").split("_"):
        if part in ("elec", "elpp"):
            return ArtifactClass.elpp
        if part in ArtifactClass.__members__ and part != "null":
            return ArtifactClass[part]
    return None


def from_native(text: str) -> str:
    """Convert a corpus label file to canonical CSV text.

    Unknown or background labels ("bckg", "null") are dropped.
    """
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.lower().startswith("channel,"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) < 4:
            continue
        channel, start, stop, label = parts[:4]
        cls = _native_label(label)
        if cls is None:
            continue
        scope = TERM if channel.upper() in ("TERM", "ALL") else channel
        out.append(f"{scope},{float(start)!r},{float(stop)!r},{cls.name}\n")
    return "".join(out)


def is_native(text: str) -> bool:
    for raw in text.splitlines():
        line = raw.strip().lower()
        if line.startswith("channel,") or line.startswith("# version = csv"):
            return True
        if line and not line.startswith("#"):
            return len(line.split(",")) >= 5
    return False


def load_annotations(text: str, duration_s: float) -> AnnotationSet:
    """Parse either annotation flavour."""
    return parse_annotations(from_native(text) if is_native(text) else text, duration_s)
