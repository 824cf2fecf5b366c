import numpy as np
import pytest

from artifact.corpus import CorpusError, corpus_scan, corpus_stats, render_stats
from artifact.edf import Recording, write_edf
from artifact.labels import ArtifactClass


def make_tree(root, patients=3, sessions=2, duration=20, csv=None):
    rec = Recording("", "", 8.0, ["EEG FP1-REF"], np.zeros((1, int(8 * duration))))
    data = write_edf(rec, (-1, 1))
    for p in range(patients):
        for s in range(sessions):
            d = root / f"{p:08d}" / f"s{s:03d}"
            d.mkdir(parents=True, exist_ok=True)
            stem = d / f"{p:08d}_s{s:03d}_t000"
            stem.with_suffix(".edf").write_bytes(data)
            stem.with_suffix(".csv").write_text(csv(p, s) if csv else "")


def test_scan_three_by_two(tmp_path):
    make_tree(tmp_path)
    idx = corpus_scan(tmp_path)
    assert len(idx) == 6
    assert idx.patients == ["00000000", "00000001", "00000002"]
    assert len({(e.patient_id, e.record_id) for e in idx.entries}) == 6
    assert all(e.edf_path.exists() and e.annotation_path.exists() for e in idx.entries)


def test_missing_annotation_skipped(tmp_path, caplog):
    make_tree(tmp_path)
    next(tmp_path.rglob("*.csv")).unlink()
    idx = corpus_scan(tmp_path)
    assert len(idx) == 5 and len(idx.skipped) == 1
    assert "no annotation" in caplog.text


def test_empty_and_unreadable(tmp_path):
    with pytest.raises(CorpusError, match="empty corpus"):
        corpus_scan(tmp_path)
    with pytest.raises(CorpusError, match="unreadable"):
        corpus_scan(tmp_path / "nope")


def test_patient_component_override(tmp_path):
    make_tree(tmp_path, patients=2, sessions=1)
    idx = corpus_scan(tmp_path, patient_component=1)
    assert idx.patients == ["s000"]


def test_scan_is_deterministic(tmp_path):
    make_tree(tmp_path)
    a = corpus_scan(tmp_path)
    b = corpus_scan(tmp_path)
    assert a.entries == b.entries
    assert [e.edf_path for e in a.entries] == sorted(e.edf_path for e in a.entries)


def test_stats_single_chew_event(tmp_path):
    make_tree(tmp_path, patients=2, sessions=1,
              csv=lambda p, s: "TERM,2.0,12.0,chew\n" if p == 0 else "")
    stats = corpus_stats(corpus_scan(tmp_path))
    assert (stats[ArtifactClass.chew].patients, stats[ArtifactClass.chew].sessions,
            stats[ArtifactClass.chew].seconds) == (1, 1, 10.0)
    assert stats[ArtifactClass.null].seconds == 30.0
    assert stats[ArtifactClass.eyem].seconds == 0
    assert "Chewing" in render_stats(stats)


def test_stats_no_annotations(tmp_path):
    make_tree(tmp_path, patients=2, sessions=2)
    stats = corpus_stats(corpus_scan(tmp_path))
    for c in ArtifactClass:
        if c is not ArtifactClass.null:
            assert (stats[c].patients, stats[c].sessions, stats[c].seconds) == (0, 0, 0.0)
    assert stats[ArtifactClass.null].seconds == 80.0
    assert stats[ArtifactClass.null].sessions == 4


def test_stats_additive(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    make_tree(a, patients=1, sessions=1, csv=lambda p, s: "TERM,1,4,musc\n")
    make_tree(b, patients=1, sessions=1, csv=lambda p, s: "TERM,0,2.5,musc\nTERM,5,6,eyem\n")
    both = tmp_path / "both"
    for src, tag in ((a, "x"), (b, "y")):
        for f in src.rglob("*.*"):
            dst = both / tag / f.relative_to(src)
            dst.parent.mkdir(parents=True, exist_ok=True)
            dst.write_bytes(f.read_bytes())
    sa, sb, sab = (corpus_stats(corpus_scan(d)) for d in (a, b, both))
    for c in ArtifactClass:
        assert sab[c].seconds == pytest.approx(sa[c].seconds + sb[c].seconds)
