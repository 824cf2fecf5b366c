"""Array-backed CART trees (Gini for classification, squared error for regression)."""

from __future__ import annotations

import numpy as np

LEAF = -1


class Tree:
    """Fitted tree stored as parallel node arrays; node 0 is the root."""

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=int)
        for i in range(self.n_nodes):
            if self.feature[i] != LEAF:
                depth[self.left[i]] = depth[self.right[i]] = depth[i] + 1
        return int(depth.max())

    def apply(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            f = self.feature[node]
            inner = f != LEAF
            if not inner.any():
                return node
            go_left = X[rows, np.where(inner, f, 0)] <= self.threshold[node]
            node = np.where(inner, np.where(go_left, self.left[node], self.right[node]), node)

    def predict_value(self, X) -> np.ndarray:
        return self.value[self.apply(X)]

    def state(self, prefix: str) -> dict:
        return {f"{prefix}.{k}": getattr(self, k) for k in ("feature", "threshold", "left", "right", "value")}

    @classmethod
    def from_state(cls, arrays: dict, prefix: str) -> "Tree":
        return cls(*(arrays[f"{prefix}.{k}"] for k in ("feature", "threshold", "left", "right", "value")))


def resolve_max_features(spec, d: int) -> int:
    if spec is None or spec == "all":
        return d
    if spec == "sqrt":
        return max(1, int(np.sqrt(d)))
    if spec == "half":
        return max(1, d // 2)
    if isinstance(spec, float):
        return max(1, min(d, int(spec * d)))
    return max(1, min(d, int(spec)))


def _best_split(Xn, T, w, criterion):
    """Best (score, position, column) over the columns of Xn.

    ``T`` holds per-row targets: weighted one-hot counts for Gini, or
    (w*y, w*y^2) for squared error. Score is the quantity to maximize.
    """
    n = len(Xn)
    order = np.argsort(Xn, axis=0, kind="stable")
    xs = np.take_along_axis(Xn, order, axis=0)
    valid = xs[:-1] < xs[1:]
    if not valid.any():
        return None
    cw = np.cumsum(w[order], axis=0)[:-1]
    total_w = w.sum()
    wl, wr = cw, total_w - cw
    ok = valid & (wl > 0) & (wr > 0)
    if not ok.any():
        return None
    if criterion == "gini":
        cum = np.cumsum(T[order], axis=0)[:-1]           # (n-1, m, K)
        right = T.sum(axis=0) - cum
        with np.errstate(divide="ignore", invalid="ignore"):
            score = (cum * cum).sum(-1) / wl + (right * right).sum(-1) / wr
    else:
        sy = np.cumsum(T[:, 0][order], axis=0)[:-1]
        ry = T[:, 0].sum() - sy
        with np.errstate(divide="ignore", invalid="ignore"):
            score = sy * sy / wl + ry * ry / wr
    score = np.where(ok, score, -np.inf)
    flat = int(np.argmax(score))
    pos, col = divmod(flat, score.shape[1])
    lo, hi = xs[pos, col], xs[pos + 1, col]
    thr = 0.5 * (lo + hi)
    if not lo <= thr < hi:
        thr = lo
    return score[pos, col], thr, col


def build_tree(X, target, sample_weight=None, criterion: str = "gini", n_classes: int | None = None,
               max_depth: int | None = None, min_samples_split: int = 2, min_samples_leaf: int = 1,
               max_features=None, rng: np.random.Generator | None = None) -> Tree:
    """Grow a tree depth-first.

    For ``criterion="gini"`` ``target`` holds integer class indices and each
    leaf stores the weighted class distribution. For ``"mse"`` it holds
    real targets and leaves store the weighted mean.
    """
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
    if criterion == "gini":
        k = int(n_classes if n_classes is not None else target.max() + 1)
        T = np.zeros((n, k))
        T[np.arange(n), np.asarray(target, dtype=np.int64)] = w
    elif criterion == "mse":
        y = np.asarray(target, dtype=np.float64)
        T = np.stack([w * y, w * y * y], axis=1)
    else:
        raise ValueError(f"unknown criterion {criterion!r}")
    m = resolve_max_features(max_features, d)
    if m < d and rng is None:
        raise ValueError("feature subsampling needs an rng")

    feature, threshold, left, right, value = [], [], [], [], []

    def leaf_value(idx):
        tw = w[idx].sum()
        if criterion == "gini":
            counts = T[idx].sum(axis=0)
            return counts / tw if tw > 0 else np.full(len(counts), 1.0 / len(counts))
        return np.array([T[idx, 0].sum() / tw if tw > 0 else 0.0])

    def parent_score(idx):
        tw = w[idx].sum()
        if criterion == "gini":
            c = T[idx].sum(axis=0)
            return (c * c).sum() / tw
        s = T[idx, 0].sum()
        return s * s / tw

    def new_node(idx):
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(leaf_value(idx))
        return len(feature) - 1

    root = np.arange(n)
    stack = [(new_node(root), root, 0)]
    while stack:
        node, idx, depth = stack.pop()
        if len(idx) < min_samples_split or len(idx) < 2 * min_samples_leaf:
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        if criterion == "gini" and np.count_nonzero(T[idx].sum(axis=0)) <= 1:
            continue
        cols = np.arange(d) if m == d else np.sort(rng.choice(d, m, replace=False))
        found = _best_split(X[np.ix_(idx, cols)], T[idx], w[idx], criterion)
        if found is None:
            continue
        score, thr, c = found
        base = parent_score(idx)
        if not score > base + 1e-12 * max(abs(base), 1.0):
            continue
        f = int(cols[c])
        mask = X[idx, f] <= thr
        li, ri = idx[mask], idx[~mask]
        if len(li) < min_samples_leaf or len(ri) < min_samples_leaf:
            continue
        feature[node], threshold[node] = f, thr
        left[node] = new_node(li)
        right[node] = new_node(ri)
        # right pushed first so the left subtree is grown first
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))

    return Tree(feature, threshold, left, right, np.vstack(value))
