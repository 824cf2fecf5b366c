import numpy as np
import pytest

from artifact.synth import SynthParams, synth_corpus


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    return synth_corpus(root, seed=5, params=SynthParams(patients=4, sessions_per_patient=1, duration_s=30.0))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def gaussian_blobs(n, rng, classes=(0, 3, 5), dim=3, sep=6.0):
    """Isotropic unit-variance blobs, centers ``sep`` apart along separate axes."""
    centers = np.zeros((len(classes), dim))
    for i in range(1, len(classes)):
        centers[i, (i - 1) % dim] = sep
    y = np.repeat(np.asarray(classes), n // len(classes))
    X = centers[np.searchsorted(classes, y)] + rng.normal(size=(len(y), dim))
    return X, y
