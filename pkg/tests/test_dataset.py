import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.annotations import parse_annotations
from artifact.dataset import (LabeledFeatureSet, SplitAssignment, assemble, extract_corpus, label_interval,
                              patient_split, split_sizes, undersample)
from artifact.labels import ArtifactClass
from oracles import all_overlaps


def labeled(counts: dict, dim=2, seed=0):
    r = np.random.default_rng(seed)
    y = np.concatenate([np.full(n, int(c)) for c, n in counts.items()])
    return LabeledFeatureSet(r.normal(size=(len(y), dim)), y, [f"p{i % 7}" for i in range(len(y))],
                             ["s0"] * len(y), np.arange(len(y), dtype=float))


@pytest.mark.parametrize("csv,expected", [
    ("TERM,9.0,12.0,eyem", ArtifactClass.eyem),
    ("TERM,10.8,11.5,chew", ArtifactClass.null),
    ("TERM,9.5,10.6,musc\nTERM,10.4,11.5,elpp", ArtifactClass.musc),
    ("", ArtifactClass.null),
    ("TERM,10.0,10.5,shiv", ArtifactClass.shiv),
])
def test_label_window_examples(csv, expected):
    assert label_interval(10.0, 11.0, parse_annotations(csv, 60)) == expected


def test_equal_overlap_same_start_goes_to_smaller_code():
    ann = parse_annotations("TERM,10.0,10.7,musc\nTERM,10.0,10.7,chew", 60)
    assert label_interval(10.0, 11.0, ann) == ArtifactClass.chew


ev = st.tuples(st.floats(0, 20), st.floats(0.05, 3), st.sampled_from(["eyem", "chew", "shiv", "elpp", "musc"]))


@settings(max_examples=100)
@given(st.lists(ev, max_size=6), st.floats(0, 19))
def test_label_agrees_with_overlap_enumeration(events, start):
    text = "\n".join(f"TERM,{a!r},{a + d!r},{l}" for a, d, l in events)
    ann = parse_annotations(text, 30)
    got = label_interval(start, start + 1, ann)
    overlaps = all_overlaps(start, start + 1, ann.events)
    if got == ArtifactClass.null:
        assert all(o < 0.5 - 1e-9 for o in overlaps.values())
    else:
        assert overlaps[got] >= 0.5 - 1e-9
        assert overlaps[got] >= max(overlaps.values()) - 1e-9


@pytest.mark.parametrize("n,sizes", [(10, (6, 2, 2)), (213, (129, 42, 42)), (5, (3, 1, 1)), (3, (1, 1, 1))])
def test_split_sizes(n, sizes):
    assert split_sizes(n) == sizes


def test_split_needs_three_patients():
    with pytest.raises(ValueError):
        patient_split(["a", "b"])


@pytest.mark.parametrize("seed", range(20))
def test_split_disjoint_and_complete(seed):
    patients = [f"p{i:03d}" for i in range(23)]
    s = patient_split(patients, seed=seed)
    sets = [set(s.train), set(s.validation), set(s.test)]
    assert not (sets[0] & sets[1] or sets[0] & sets[2] or sets[1] & sets[2])
    assert set().union(*sets) == set(patients)
    assert (len(s.train), len(s.validation), len(s.test)) == split_sizes(23)
    assert patient_split(patients, seed=seed) == s
    assert SplitAssignment.from_json(s.to_json()) == s


def test_split_depends_on_seed():
    patients = [f"p{i}" for i in range(30)]
    assert len({tuple(patient_split(patients, seed=k).test) for k in range(10)}) > 1


def test_undersample_example():
    s = labeled({ArtifactClass.null: 1000, ArtifactClass.eyem: 100, ArtifactClass.chew: 50})
    out = undersample(s, seed=3)
    assert out.class_counts == {ArtifactClass.eyem: 50, ArtifactClass.chew: 50, ArtifactClass.null: 50}


def test_undersample_balanced_is_identity_as_multiset():
    s = labeled({0: 20, 2: 20, 5: 20})
    out = undersample(s, seed=1)
    assert sorted(map(tuple, out.X)) == sorted(map(tuple, s.X))


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.integers(0, 5), st.integers(1, 60), min_size=1), st.integers(0, 2**31))
def test_undersample_properties(counts, seed):
    s = labeled(counts, seed=seed)
    out = undersample(s, seed)
    m = min(counts.values())
    assert set(out.class_counts.values()) == {m}
    assert len(set(out.start.tolist())) == len(out)
    assert set(out.start.tolist()) <= set(s.start.tolist())
    assert np.array_equal(undersample(s, seed).start, out.start)


def test_undersample_empty():
    with pytest.raises(ValueError, match="empty"):
        undersample(LabeledFeatureSet.concat([]))


def test_assemble_keeps_patients_apart(small_corpus, tmp_path):
    sessions = extract_corpus(small_corpus, cache_dir=tmp_path)
    split = patient_split(small_corpus.patients, seed=2)
    train, val, test = assemble(sessions, split, seed=2)
    assert not (train.patients & val.patients or train.patients & test.patients or val.patients & test.patients)
    assert len(set(train.class_counts.values())) == 1
    natural = sum(len(sf.labels) for sf in sessions if split.of(sf.entry.patient_id) == "test")
    assert len(test) == natural
    assert train.X.shape[1] == 22


def test_cache_hit_returns_identical_rows(small_corpus, tmp_path):
    first = extract_corpus(small_corpus, cache_dir=tmp_path)
    files = sorted(tmp_path.glob("*.eaf"))
    assert len(files) == len(small_corpus)
    stamps = [f.stat().st_mtime_ns for f in files]
    second = extract_corpus(small_corpus, cache_dir=tmp_path, workers=2)
    assert [f.stat().st_mtime_ns for f in sorted(tmp_path.glob("*.eaf"))] == stamps
    for a, b in zip(first, second):
        assert np.array_equal(a.X, b.X) and np.array_equal(a.labels, b.labels)
        assert np.array_equal(a.epoch_labels, b.epoch_labels)
