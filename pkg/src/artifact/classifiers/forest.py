import numpy as np

from .base import Estimator
from .tree import Tree, build_tree


class DecisionTree(Estimator):
    """A single Gini CART tree on all features and all rows."""

    family = "decision_tree"
    defaults = {"max_depth": None, "min_samples_leaf": 1}

    def fit(self, X, y, n_classes, rng):
        self.tree = build_tree(X, y, criterion="gini", n_classes=n_classes,
                               max_depth=self.params["max_depth"],
                               min_samples_leaf=self.params["min_samples_leaf"])
        return self

    def proba(self, X):
        return self.tree.predict_value(X)

    def get_state(self):
        return {}, self.tree.state("tree")

    def set_state(self, meta, arrays):
        self.tree = Tree.from_state(arrays, "tree")


class RandomForest(Estimator):
    """Bagged Gini trees; scores are the mean of the trees' leaf distributions.

    Tree ``i`` draws its bootstrap and feature subsets from ``seed ^ i``, so
    every tree can be grown independently and in any order.
    """

    family = "random_forest"
    defaults = {"n_trees": 100, "max_depth": None, "max_features": "sqrt", "bootstrap": True,
                "min_samples_leaf": 1}

    def fit(self, X, y, n_classes, rng):
        n = len(X)
        p = self.params
        seed = getattr(self, "seed", 0)
        self.trees = []
        for i in range(int(p["n_trees"])):
            tree_rng = np.random.default_rng(seed ^ i)
            if p["bootstrap"]:
                counts = np.bincount(tree_rng.integers(0, n, n), minlength=n)
                rows = np.flatnonzero(counts)
                weight = counts[rows].astype(float)
            else:
                rows, weight = np.arange(n), None
            self.trees.append(build_tree(X[rows], y[rows], weight, "gini", n_classes,
                                         max_depth=p["max_depth"], min_samples_leaf=p["min_samples_leaf"],
                                         max_features=p["max_features"], rng=tree_rng))
        return self

    def proba(self, X):
        total = sum(t.predict_value(X) for t in self.trees)
        return total / len(self.trees)

    def get_state(self):
        arrays = {}
        for i, t in enumerate(self.trees):
            arrays.update(t.state(f"t{i}"))
        return {"n_trees": len(self.trees)}, arrays

    def set_state(self, meta, arrays):
        self.trees = [Tree.from_state(arrays, f"t{i}") for i in range(meta["n_trees"])]
