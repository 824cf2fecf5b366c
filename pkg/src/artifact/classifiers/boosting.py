import logging

import numpy as np

from .base import Estimator
from .naive_bayes import softmax
from .tree import Tree, build_tree

logger = logging.getLogger(__name__)


class AdaBoost(Estimator):
    """Multi-class SAMME over shallow Gini trees.

    A stage whose weighted training error reaches ``1 - 1/K`` is no better
    than chance; it is rejected and boosting stops there.
    """

    family = "adaboost"
    defaults = {"n_stages": 50, "learning_rate": 1.0, "max_depth": 1}

    def fit(self, X, y, n_classes, rng):
        p = self.params
        if not 1 <= int(p["max_depth"]) <= 3:
            raise ValueError("adaboost weak learners are limited to depth 1..3")
        n, K = len(X), n_classes
        w = np.full(n, 1.0 / n)
        self.trees, self.alphas, self.stage_errors = [], [], []
        self.rejected = 0
        self.prior = np.bincount(y, minlength=K) / n
        self.n_classes = K
        for _ in range(int(p["n_stages"])):
            tree = build_tree(X, y, w, "gini", K, max_depth=int(p["max_depth"]))
            pred = np.argmax(tree.predict_value(X), axis=1)
            miss = pred != y
            err = float(w[miss].sum() / w.sum())
            if err >= 1.0 - 1.0 / K:
                self.rejected += 1
                break
            self.stage_errors.append(err)
            self.trees.append(tree)
            if err <= 0.0:
                self.alphas.append(1.0)
                break
            alpha = p["learning_rate"] * (np.log((1.0 - err) / err) + np.log(K - 1.0))
            self.alphas.append(float(alpha))
            w = w * np.exp(alpha * miss)
            w /= w.sum()
        self.n_iter = len(self.trees)
        if not self.trees:
            logger.warning("adaboost: no stage beat chance; falling back to class priors")
        return self

    def proba(self, X):
        if not self.trees:
            return np.tile(self.prior, (len(X), 1))
        votes = np.zeros((len(X), self.n_classes))
        rows = np.arange(len(X))
        for tree, alpha in zip(self.trees, self.alphas):
            votes[rows, np.argmax(tree.predict_value(X), axis=1)] += alpha
        return votes / sum(self.alphas)

    def get_state(self):
        arrays = {"alphas": np.array(self.alphas), "prior": self.prior}
        for i, t in enumerate(self.trees):
            arrays.update(t.state(f"t{i}"))
        return {"n_trees": len(self.trees), "n_classes": self.n_classes}, arrays

    def set_state(self, meta, arrays):
        self.n_classes = meta["n_classes"]
        self.prior = arrays["prior"]
        self.alphas = arrays["alphas"].tolist()
        self.trees = [Tree.from_state(arrays, f"t{i}") for i in range(meta["n_trees"])]


class GradientBoost(Estimator):
    """Softmax gradient boosting: one regression tree per class per round.

    Trees are fit to the pseudo-residuals ``y_k - p_k``; each leaf takes the
    one-step Newton value ``(K-1)/K * sum(r) / sum(|r|(1-|r|))``. Scores
    start from the log class priors.
    """

    family = "gradient_boost"
    defaults = {"n_rounds": 100, "learning_rate": 0.1, "max_depth": 3, "subsample": 1.0,
                "min_samples_leaf": 1}

    def fit(self, X, y, n_classes, rng):
        p = self.params
        n, K = len(X), n_classes
        Y = np.eye(K)[y]
        self.init = np.log(np.bincount(y, minlength=K) / n)
        self.lr = float(p["learning_rate"])
        F = np.tile(self.init, (n, 1))
        self.trees: list[list[Tree]] = []
        m = max(1, int(round(float(p["subsample"]) * n)))
        for _ in range(int(p["n_rounds"])):
            P = softmax(F)
            rows = np.arange(n) if m >= n else np.sort(rng.choice(n, m, replace=False))
            stage = []
            for k in range(K):
                r = Y[rows, k] - P[rows, k]
                tree = build_tree(X[rows], r, criterion="mse", max_depth=int(p["max_depth"]),
                                  min_samples_leaf=int(p["min_samples_leaf"]))
                leaf = tree.apply(X[rows])
                num = np.bincount(leaf, weights=r, minlength=tree.n_nodes)
                den = np.bincount(leaf, weights=np.abs(r) * (1.0 - np.abs(r)), minlength=tree.n_nodes)
                safe = np.where(den > 1e-12, den, 1.0)
                tree.value = np.where(den > 1e-12, (K - 1.0) / K * num / safe, 0.0)[:, None]
                F[:, k] += self.lr * tree.predict_value(X)[:, 0]
                stage.append(tree)
            self.trees.append(stage)
        self.n_iter = len(self.trees)
        return self

    def raw_scores(self, X):
        F = np.tile(self.init, (len(X), 1))
        for stage in self.trees:
            for k, tree in enumerate(stage):
                F[:, k] += self.lr * tree.predict_value(X)[:, 0]
        return F

    def proba(self, X):
        return softmax(self.raw_scores(X))

    def get_state(self):
        arrays = {"init": self.init}
        for r, stage in enumerate(self.trees):
            for k, t in enumerate(stage):
                arrays.update(t.state(f"r{r}k{k}"))
        return {"n_rounds": len(self.trees), "n_classes": len(self.init), "lr": self.lr}, arrays

    def set_state(self, meta, arrays):
        self.init, self.lr = arrays["init"], meta["lr"]
        self.trees = [[Tree.from_state(arrays, f"r{r}k{k}") for k in range(meta["n_classes"])]
                      for r in range(meta["n_rounds"])]
