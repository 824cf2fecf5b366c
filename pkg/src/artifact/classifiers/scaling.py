import numpy as np


class Standardizer:
    def fit(self, X):
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std > 0, std, 1.0)
        return self

    def __call__(self, X):
        return (X - self.mean) / self.scale


def batch_size(requested: int, n: int) -> int:
    """Mini-batch size, shrunk on small sets so an epoch has ~32 updates."""
    return max(1, min(requested, max(4, n // 32)))
