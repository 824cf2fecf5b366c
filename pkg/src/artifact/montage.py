"""Bipolar re-referencing of referential recordings."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .edf import Recording

N_TCP = 22

# 10-20 / 10-10 names seen in clinical recordings; T7/T8/P7/P8 are kept distinct
# from T3/T4/T5/T6 on purpose (no silent renaming).
ELECTRODES = frozenset("""
    FP1 FP2 FPZ F7 F3 FZ F4 F8 T3 C3 CZ C4 T4 T5 P3 PZ P4 T6 O1 OZ O2 A1 A2
    T1 T2 F9 F10 T7 T8 P7 P8 T9 T10 P9 P10 M1 M2 AF3 AF4 AF7 AF8 FC1 FC2 FC3
    FC4 FC5 FC6 CP1 CP2 CP3 CP4 CP5 CP6 PO3 PO4 PO7 PO8 FT7 FT8 TP7 TP8
""".split())

_PREFIX = re.compile(r"^(EEG|EOG|ECG|EMG)\s+", re.IGNORECASE)
_SUFFIX = re.compile(r"-(REF|LE|AVG|AR)$", re.IGNORECASE)


class MontageError(ValueError):
    pass


@dataclass
class MontagedRecording:
    patient_id: str
    session_id: str
    sample_rate_hz: float
    channels: list[str]
    signals: np.ndarray  # (22, samples)

    @property
    def duration_s(self) -> float:
        return self.signals.shape[1] / self.sample_rate_hz


def load_montage(path=None) -> list[tuple[str, str]]:
    if path is None:
        text = resources.files(__package__).joinpath("tcp_montage.txt").read_text()
    else:
        text = Path(path).read_text()
    pairs = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        anode, sep, cathode = line.partition("-")
        if not sep or not anode or not cathode:
            raise MontageError(f"bad montage line {line!r}")
        pairs.append((anode.strip().upper(), cathode.strip().upper()))
    return pairs


TCP_PAIRS = load_montage()


def resolve_channel(label: str) -> str:
    """Electrode name from a referential label ("EEG FP1-REF" -> "FP1")."""
    name = _SUFFIX.sub("", _PREFIX.sub("", label.strip())).strip().upper()
    if name not in ELECTRODES:
        raise MontageError(f"{label!r} is unresolvable for TCP")
    return name


def to_tcp(rec: Recording, pairs: list[tuple[str, str]] | None = None) -> MontagedRecording:
    pairs = TCP_PAIRS if pairs is None else pairs
    rows: dict[str, int] = {}
    ambiguous: set[str] = set()
    for i, label in enumerate(rec.channel_labels):
        try:
            name = resolve_channel(label)
        except MontageError:
            continue
        if name in rows:
            ambiguous.add(name)
        rows[name] = i

    def row(name):
        if name in ambiguous:
            raise MontageError(f"ambiguous label match for electrode {name}")
        if name not in rows:
            raise MontageError(f"missing electrode {name}")
        return rec.signals[rows[name]]

    signals = np.vstack([row(a) - row(c) for a, c in pairs])
    return MontagedRecording(rec.patient_id, rec.session_id, rec.sample_rate_hz,
                             [f"{a}-{c}" for a, c in pairs], signals)
