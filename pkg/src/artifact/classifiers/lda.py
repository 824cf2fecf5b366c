import numpy as np

from ..numerics import jacobi_eigh
from .base import Estimator
from .naive_bayes import softmax


class SingularCovarianceError(ValueError):
    pass


class LDA(Estimator):
    """Shared-covariance Gaussian classifier.

    The pooled within-class covariance is shrunk toward ``trace/d * I`` by
    ``shrinkage`` and inverted through its eigendecomposition.
    """

    family = "lda"
    defaults = {"shrinkage": 0.0}
    rcond = 1e-12

    def fit(self, X, y, n_classes, rng):
        n, d = X.shape
        gamma = float(self.params["shrinkage"])
        if not 0.0 <= gamma <= 1.0:
            raise ValueError("shrinkage must lie in [0, 1]")
        means = np.vstack([X[y == c].mean(axis=0) for c in range(n_classes)])
        centered = X - means[y]
        cov = centered.T @ centered / n
        cov = (1 - gamma) * cov + gamma * np.trace(cov) / d * np.eye(d)
        w, V = jacobi_eigh(cov)
        if w.max() <= 0 or w.min() <= self.rcond * w.max():
            raise SingularCovarianceError("singular covariance; use shrinkage > 0")
        precision = (V / w) @ V.T
        self.coef = means @ precision                       # (k, d)
        prior = np.bincount(y, minlength=n_classes) / n
        self.intercept = -0.5 * np.einsum("kd,kd->k", self.coef, means) + np.log(prior)
        return self

    def decision_function(self, X):
        return X @ self.coef.T + self.intercept

    def proba(self, X):
        return softmax(self.decision_function(X))

    def get_state(self):
        return {}, {"coef": self.coef, "intercept": self.intercept}

    def set_state(self, meta, arrays):
        self.coef, self.intercept = arrays["coef"], arrays["intercept"]
