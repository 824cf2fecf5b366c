"""Shared classifier interface: fit, class scores, per-second aggregation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..labels import N_CLASSES, ArtifactClass
from ..space import SPACES, check_family


class Estimator:
    """One classifier family. Subclasses work on compact class indices 0..k-1."""

    family = ""
    defaults: dict = {}

    def __init__(self, **params):
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise ValueError(f"{self.family}: unknown hyperparameters {sorted(unknown)}")
        self.params = {**self.defaults, **params}
        self.converged = True
        self.n_iter = 0

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, rng: np.random.Generator):
        raise NotImplementedError

    def proba(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def get_state(self) -> tuple[dict, dict]:
        """(JSON-able metadata, name -> ndarray) sufficient to rebuild predictions."""
        raise NotImplementedError

    def set_state(self, meta: dict, arrays: dict):
        raise NotImplementedError


class Constant(Estimator):
    family = "constant"

    def fit(self, X, y, n_classes, rng):
        return self

    def proba(self, X):
        return np.ones((len(X), 1))

    def get_state(self):
        return {}, {}

    def set_state(self, meta, arrays):
        pass


@dataclass(frozen=True)
class AlgorithmSpec:
    family: str
    hyperparams: dict = field(default_factory=dict)

    def __post_init__(self):
        check_family(self.family)

    def validate(self, space=None):
        space = SPACES[self.family] if space is None else space
        for d in space.dims:
            if d.name in self.hyperparams and not d.contains(self.hyperparams[d.name]):
                raise ValueError(f"{self.family}: {d.name}={self.hyperparams[d.name]!r} outside {d}")
        return self


@dataclass
class Model:
    family: str
    hyperparams: dict
    classes: np.ndarray
    n_features: int
    seed: int
    estimator: Estimator

    @property
    def converged(self) -> bool:
        return self.estimator.converged

    def predict_scores(self, X) -> np.ndarray:
        """(n, 6) class scores; columns follow ArtifactClass codes."""
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.shape[1] != self.n_features:
            raise ValueError(f"dimension mismatch: model expects {self.n_features}, got {X.shape[1]}")
        out = np.zeros((len(X), N_CLASSES))
        out[:, self.classes] = self.estimator.proba(X)
        return out[0] if single else out

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_scores(np.atleast_2d(X)), axis=1)


def _registry():
    from .boosting import AdaBoost, GradientBoost
    from .forest import RandomForest
    from .knn import KNN
    from .lda import LDA
    from .linear import SGDLinear
    from .mlp import MLP
    from .naive_bayes import GaussianNB
    return {c.family: c for c in (AdaBoost, GaussianNB, KNN, LDA, MLP, RandomForest, SGDLinear, GradientBoost)}


def make_estimator(family: str, params: dict | None = None) -> Estimator:
    check_family(family)
    return _registry()[family](**(params or {}))


def fit(spec: AlgorithmSpec, train, seed: int = 0) -> Model:
    """Train ``spec`` on a LabeledFeatureSet or an (X, y) pair."""
    X, y = (train.X, train.y) if hasattr(train, "X") else train
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y) or len(y) == 0:
        raise ValueError("training data must be a non-empty (n, d) matrix with n labels")
    if y.min() < 0 or y.max() >= N_CLASSES:
        raise ValueError("labels must be ArtifactClass codes")
    classes = np.unique(y)
    if len(classes) == 1:
        est = Constant()
    else:
        est = make_estimator(spec.family, spec.hyperparams)
        yi = np.searchsorted(classes, y)
        est.seed = seed
        est.fit(X, yi, len(classes), np.random.default_rng(seed))
    return Model(spec.family, dict(spec.hyperparams), classes, X.shape[1], seed, est)


def predict_scores(m: Model, x) -> np.ndarray:
    return m.predict_scores(x)


def aggregate_epochs(starts, scores, epoch_s: float = 1.0) -> np.ndarray:
    """Per-epoch labels from window scores.

    Epoch t covers [t, t+1) and averages the scores of the windows starting
    in it; an epoch with no window repeats the previous label (null first).
    """
    starts = np.asarray(starts, dtype=np.float64)
    scores = np.asarray(scores, dtype=np.float64)
    if len(starts) == 0:
        raise ValueError("no windows to aggregate")
    if np.any(np.diff(starts) < 0):
        raise ValueError("windows must be ordered by start time")
    epoch = np.floor(starts / epoch_s + 1e-9).astype(np.int64)
    n_epochs = int(epoch[-1]) + 1
    sums = np.zeros((n_epochs, scores.shape[1]))
    np.add.at(sums, epoch, scores)
    counts = np.bincount(epoch, minlength=n_epochs)
    labels = np.empty(n_epochs, dtype=np.int64)
    prev = int(ArtifactClass.null)
    for t in range(n_epochs):
        if counts[t]:
            prev = int(np.argmax(sums[t] / counts[t]))
        labels[t] = prev
    return labels


def predict_epochs(m: Model, feats, window_s: float = 1.0, stride_s: float = 0.25) -> list[tuple[int, ArtifactClass]]:
    """Whole-second labels for an ordered sequence of (start_s, vector)."""
    feats = list(feats)
    if not feats:
        raise ValueError("empty feature sequence")
    starts = np.array([s for s, _ in feats])
    X = np.vstack([v for _, v in feats])
    labels = aggregate_epochs(starts, m.predict_scores(X))
    return [(t, ArtifactClass(int(c))) for t, c in enumerate(labels)]
