import numpy as np

from .base import Estimator


class KNN(Estimator):
    """Euclidean k-nearest-neighbour vote; scores are vote fractions."""

    family = "knn"
    defaults = {"k": 5}
    chunk = 256

    def fit(self, X, y, n_classes, rng):
        k = int(self.params["k"])
        if k < 1:
            raise ValueError("k must be at least 1")
        if k > len(X):
            raise ValueError(f"k={k} exceeds training size {len(X)}")
        self.X, self.y, self.n_classes = X.copy(), y.copy(), n_classes
        return self

    def neighbors(self, X) -> np.ndarray:
        k = int(self.params["k"])
        out = np.empty((len(X), k), dtype=np.int64)
        for lo in range(0, len(X), self.chunk):
            diff = X[lo:lo + self.chunk, None, :] - self.X[None]
            dist = np.einsum("ijk,ijk->ij", diff, diff)
            # stable sort keeps equal-distance ties in training order
            out[lo:lo + self.chunk] = np.argsort(dist, axis=1, kind="stable")[:, :k]
        return out

    def proba(self, X):
        votes = self.y[self.neighbors(X)]
        counts = np.stack([(votes == c).sum(axis=1) for c in range(self.n_classes)], axis=1)
        return counts / votes.shape[1]

    def get_state(self):
        return {"n_classes": self.n_classes}, {"X": self.X, "y": self.y}

    def set_state(self, meta, arrays):
        self.n_classes = meta["n_classes"]
        self.X, self.y = arrays["X"], arrays["y"]
