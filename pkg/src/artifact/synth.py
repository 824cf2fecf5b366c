"""Synthetic EEG corpus with class-specific artifact signatures.

Used for tests and smoke benchmarks when the licensed corpus is absent.
Every byte written is a function of the seed and the parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .annotations import TERM, AnnotationSet, Event, format_annotations
from .corpus import CorpusIndex, corpus_scan
from .edf import Recording, write_edf
from .labels import ARTIFACT_CLASSES, ArtifactClass
from .montage import TCP_PAIRS

ELECTRODES = ("FP1", "FP2", "F7", "F3", "FZ", "F4", "F8", "A1", "T3", "C3", "CZ", "C4", "T4", "A2",
              "T5", "P3", "PZ", "P4", "T6", "O1", "O2")
FS = 256.0
PHYSICAL_RANGE = (-1000.0, 1000.0)


@dataclass(frozen=True)
class SynthParams:
    patients: int = 4
    sessions_per_patient: int = 1
    duration_s: float = 120.0
    artifact_rate: float = 0.5


def _band_noise(rng, n, lo, hi, fs=FS, slope=0.0):
    """Unit-RMS Gaussian noise restricted to [lo, hi] Hz with a 1/f**slope tilt."""
    spec = np.fft.rfft(rng.normal(size=n))
    f = np.fft.rfftfreq(n, 1 / fs)
    gain = ((f >= lo) & (f <= hi)) / np.maximum(f, 0.5) ** slope
    x = np.fft.irfft(spec * gain, n)
    return x / (x.std() + 1e-12)


def _schedule(rng, duration, rate):
    """Non-overlapping events cycling through a shuffled class order."""
    events = []
    order = list(ARTIFACT_CLASSES)
    t = 0.0
    i = 0
    while True:
        if i % len(order) == 0:
            rng.shuffle(order)
        cls = order[i % len(order)]
        length = rng.uniform(2.0, 5.0) if cls == ArtifactClass.elpp else rng.uniform(4.0, 10.0)
        gap = length * (1 - rate) / rate * rng.uniform(0.5, 1.5) if rate < 1 else 0.0
        start = round(t + gap, 2)
        stop = round(start + length, 2)
        if stop > duration - 1.0:
            return events
        events.append((cls, start, stop))
        t = stop
        i += 1


def synth_recording(rng, duration_s: float, artifact_rate: float, patient_id: str = "",
                    session_id: str = "") -> tuple[Recording, AnnotationSet]:
    n = int(round(duration_s * FS))
    t = np.arange(n) / FS
    idx = {e: i for i, e in enumerate(ELECTRODES)}
    sig = np.empty((len(ELECTRODES), n))
    # background: tilted broadband noise, posterior alpha
    gain = rng.uniform(0.8, 1.25)
    for i, e in enumerate(ELECTRODES):
        sig[i] = 12.0 * gain * _band_noise(rng, n, 0.5, 70.0, slope=1.0)
        if e in ("O1", "O2", "P3", "P4", "T5", "T6", "PZ"):
            sig[i] += 6.0 * gain * _band_noise(rng, n, 8.5, 11.5)

    events = []
    for cls, a, b in _schedule(rng, duration_s, artifact_rate):
        s = slice(int(a * FS), int(b * FS))
        m = s.stop - s.start
        scope = TERM
        if cls == ArtifactClass.eyem:
            src = 90.0 * _band_noise(rng, m, 0.3, 2.5)
            for e, w in (("FP1", 1.0), ("FP2", 1.0), ("F7", 0.5), ("F8", 0.5), ("F3", 0.4), ("F4", 0.4)):
                sig[idx[e], s] += w * src
        elif cls == ArtifactClass.chew:
            rate = rng.uniform(1.0, 2.0)
            env = np.sin(2 * np.pi * rate * t[s]) ** 2
            for e in ("F7", "F8", "T3", "T4", "T5", "T6", "A1", "A2"):
                sig[idx[e], s] += 45.0 * env * _band_noise(rng, m, 20.0, 100.0)
        elif cls == ArtifactClass.musc:
            group = ("FP1", "FP2", "F7", "F8", "F3", "F4", "T3", "T4", "C3", "C4", "CZ", "FZ")
            for e in group:
                sig[idx[e], s] += 30.0 * _band_noise(rng, m, 15.0, 100.0)
        elif cls == ArtifactClass.shiv:
            f0 = rng.uniform(5.0, 7.0)
            for i in range(len(ELECTRODES)):
                sig[i, s] += 9.0 * np.sin(2 * np.pi * f0 * t[s] + rng.uniform(0, 2 * np.pi))
        elif cls == ArtifactClass.elpp:
            pair = TCP_PAIRS[int(rng.integers(len(TCP_PAIRS)))]
            e = pair[0] if pair[0] in idx else pair[1]
            scope = f"{pair[0]}-{pair[1]}"
            for p0 in np.sort(rng.uniform(a, b - 0.2, size=int(rng.integers(2, 5)))):
                k = int(p0 * FS)
                tail = np.arange(s.stop - k) / FS
                sig[idx[e], k:s.stop] += rng.choice([-1, 1]) * 180.0 * np.exp(-tail / 0.15)
        events.append(Event(a, b, cls, scope))

    labels = [f"EEG {e}-REF" for e in ELECTRODES] + ["EEG EKG1-REF"]
    ekg = 200.0 * (np.sin(2 * np.pi * 1.2 * t) > 0.97)
    rec = Recording(patient_id, session_id, FS, labels, np.vstack([sig, ekg]))
    return rec, AnnotationSet(sorted(events))


def synth_corpus(out_dir, seed: int = 0, params: SynthParams = SynthParams()) -> CorpusIndex:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for p in range(params.patients):
        pid = f"p{p:03d}"
        for s in range(params.sessions_per_patient):
            sid = f"s{s + 1:03d}"
            rec, ann = synth_recording(rng, params.duration_s, params.artifact_rate, pid, sid)
            stem = out / pid / f"{pid}_{sid}_t000"
            stem.parent.mkdir(parents=True, exist_ok=True)
            stem.with_suffix(".edf").write_bytes(write_edf(rec, PHYSICAL_RANGE))
            stem.with_suffix(".csv").write_text("# synthetic annotations\n" + format_annotations(ann))
    return corpus_scan(out)
