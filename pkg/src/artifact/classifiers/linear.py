import numpy as np

from .base import Estimator
from .naive_bayes import softmax
from .scaling import Standardizer, batch_size


class SGDLinear(Estimator):
    """Multinomial logistic regression trained by mini-batch SGD.

    Step size follows inverse scaling per epoch, ``eta0 / sqrt(epoch)``
    (epochs counted from 1). Training stops once the epoch loss has failed to improve
    by ``tol`` for ``n_iter_no_change`` consecutive epochs.
    """

    family = "sgd_linear"
    defaults = {"alpha": 1e-4, "eta0": 0.01, "max_epochs": 200, "batch_size": 32,
                "tol": 1e-4, "n_iter_no_change": 5}

    def fit(self, X, y, n_classes, rng):
        p = self.params
        self.scaler = Standardizer().fit(X)
        Z = self.scaler(X)
        n, d = Z.shape
        Y = np.eye(n_classes)[y]
        self.W = np.zeros((d, n_classes))
        self.b = np.zeros(n_classes)
        best, stall = np.inf, 0
        self.converged = False
        bs = batch_size(int(p["batch_size"]), n)
        for epoch in range(int(p["max_epochs"])):
            order = rng.permutation(n)
            eta = p["eta0"] / np.sqrt(epoch + 1)
            for lo in range(0, n, bs):
                idx = order[lo:lo + bs]
                P = softmax(Z[idx] @ self.W + self.b)
                G = P - Y[idx]
                self.W -= eta * (Z[idx].T @ G / len(idx) + p["alpha"] * self.W)
                self.b -= eta * G.mean(axis=0)
            self.n_iter = epoch + 1
            loss = self.loss(Z, y)
            if loss > best - p["tol"]:
                stall += 1
                if stall >= p["n_iter_no_change"]:
                    self.converged = True
                    break
            else:
                stall = 0
            best = min(best, loss)
        return self

    def loss(self, Z, y):
        P = softmax(Z @ self.W + self.b)
        data = -np.log(np.maximum(P[np.arange(len(y)), y], 1e-300)).mean()
        return data + 0.5 * self.params["alpha"] * (self.W ** 2).sum()

    def proba(self, X):
        return softmax(self.scaler(X) @ self.W + self.b)

    def get_state(self):
        return {}, {"W": self.W, "b": self.b, "mean": self.scaler.mean, "scale": self.scaler.scale}

    def set_state(self, meta, arrays):
        self.W, self.b = arrays["W"], arrays["b"]
        self.scaler = Standardizer()
        self.scaler.mean, self.scaler.scale = arrays["mean"], arrays["scale"]
