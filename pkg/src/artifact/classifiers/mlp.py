"""Fully connected ReLU network with a softmax output."""

import numpy as np

from .base import Estimator
from .naive_bayes import softmax
from .scaling import Standardizer, batch_size


def init_params(sizes, rng) -> list[np.ndarray]:
    params = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        params.append(rng.normal(0.0, np.sqrt(2.0 / fan_in), (fan_in, fan_out)))
        params.append(np.zeros(fan_out))
    return params


def forward(params, X):
    acts = [X]
    h = X
    n_layers = len(params) // 2
    for i in range(n_layers):
        z = h @ params[2 * i] + params[2 * i + 1]
        h = np.maximum(z, 0.0) if i < n_layers - 1 else z
        acts.append(h)
    return acts


def loss_and_grad(params, X, y, alpha: float = 0.0):
    """Mean cross-entropy plus ``alpha/2 * sum(W**2)`` over weight matrices, and its gradient."""
    acts = forward(params, X)
    P = softmax(acts[-1])
    n = len(y)
    loss = -np.log(np.maximum(P[np.arange(n), y], 1e-300)).mean()
    loss += 0.5 * alpha * sum((W * W).sum() for W in params[0::2])
    delta = P.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grads = [None] * len(params)
    for i in range(len(params) // 2 - 1, -1, -1):
        W = params[2 * i]
        grads[2 * i] = acts[i].T @ delta + alpha * W
        grads[2 * i + 1] = delta.sum(axis=0)
        if i:
            delta = (delta @ W.T) * (acts[i] > 0)
    return loss, grads


class MLP(Estimator):
    """Mini-batch gradient descent with momentum and early stopping.

    A seeded 10% slice of the training rows is held out; training stops
    when its loss has not improved for ``patience`` epochs and the best
    parameters seen are restored.
    """

    family = "mlp"
    defaults = {"n_layers": 1, "width": 64, "learning_rate": 0.01, "alpha": 1e-4,
                "batch_size": 64, "max_epochs": 200, "patience": 10, "momentum": 0.9,
                "validation_fraction": 0.1}

    def fit(self, X, y, n_classes, rng):
        p = self.params
        self.scaler = Standardizer().fit(X)
        Z = self.scaler(X)
        n = len(Z)
        sizes = [Z.shape[1]] + [int(p["width"])] * int(p["n_layers"]) + [n_classes]
        self.weights = init_params(sizes, rng)
        order = rng.permutation(n)
        n_val = int(n * p["validation_fraction"]) if n >= 20 else 0
        val, tr = order[:n_val], order[n_val:]
        check = val if n_val else tr
        velocity = [np.zeros_like(w) for w in self.weights]
        best = np.inf
        best_weights = [w.copy() for w in self.weights]
        wait = 0
        self.converged = False
        bs = batch_size(int(p["batch_size"]), len(tr))
        for epoch in range(int(p["max_epochs"])):
            perm = tr[rng.permutation(len(tr))]
            for lo in range(0, len(perm), bs):
                idx = perm[lo:lo + bs]
                _, grads = loss_and_grad(self.weights, Z[idx], y[idx], p["alpha"])
                for w, v, g in zip(self.weights, velocity, grads):
                    v *= p["momentum"]
                    v -= p["learning_rate"] * g
                    w += v
            self.n_iter = epoch + 1
            score, _ = loss_and_grad(self.weights, Z[check], y[check], 0.0)
            if not np.isfinite(score):
                break
            if score < best - 1e-6:
                best, wait = score, 0
                best_weights = [w.copy() for w in self.weights]
            else:
                wait += 1
                if wait >= p["patience"]:
                    self.converged = True
                    break
        self.weights = best_weights
        return self

    def proba(self, X):
        return softmax(forward(self.weights, self.scaler(X))[-1])

    def get_state(self):
        arrays = {f"w{i}": w for i, w in enumerate(self.weights)}
        arrays.update(mean=self.scaler.mean, scale=self.scaler.scale)
        return {"n_params": len(self.weights)}, arrays

    def set_state(self, meta, arrays):
        self.weights = [arrays[f"w{i}"] for i in range(meta["n_params"])]
        self.scaler = Standardizer()
        self.scaler.mean, self.scaler.scale = arrays["mean"], arrays["scale"]
