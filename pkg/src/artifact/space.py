"""Hyperparameter spaces: the declared bounds for every classifier family.

These are both the validity bounds of a family's hyperparameters and the
default tuning search spaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

KINDS = ("uniform", "log_uniform", "integer_range", "categorical")


@dataclass(frozen=True)
class Dim:
    name: str
    kind: str
    low: float | None = None
    high: float | None = None
    choices: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown dimension kind {self.kind!r}")
        if self.kind == "categorical":
            if not self.choices:
                raise ValueError(f"{self.name}: empty choice list")
        else:
            if self.low is None or self.high is None or not self.low <= self.high:
                raise ValueError(f"{self.name}: bounds must satisfy low <= high")
            if self.kind == "log_uniform" and self.low <= 0:
                raise ValueError(f"{self.name}: log-uniform bounds must be positive")

    def sample(self, rng: np.random.Generator):
        if self.kind == "uniform":
            return float(rng.uniform(self.low, self.high))
        if self.kind == "log_uniform":
            return self._clip(math.exp(rng.uniform(math.log(self.low), math.log(self.high))))
        if self.kind == "integer_range":
            return int(rng.integers(int(self.low), int(self.high) + 1))
        return self.choices[int(rng.integers(len(self.choices)))]

    def _clip(self, v: float) -> float:
        # exp(log(x)) can land an ulp outside the bounds
        return float(min(max(v, self.low), self.high))

    def contains(self, value) -> bool:
        if self.kind == "categorical":
            return value in self.choices
        if self.kind == "integer_range" and (isinstance(value, bool) or int(value) != value):
            return False
        return self.low <= value <= self.high

    # numeric dims are modelled on a unit interval by the TPE sampler
    def to_unit(self, value) -> float:
        if self.kind == "log_uniform":
            lo, hi, v = math.log(self.low), math.log(self.high), math.log(value)
        elif self.kind == "integer_range":
            lo, hi, v = self.low - 0.5, self.high + 0.5, value
        else:
            lo, hi, v = self.low, self.high, value
        return 0.5 if hi == lo else (v - lo) / (hi - lo)

    def from_unit(self, u: float):
        u = min(max(u, 0.0), 1.0)
        if self.kind == "log_uniform":
            return self._clip(math.exp(math.log(self.low) + u * (math.log(self.high) - math.log(self.low))))
        if self.kind == "integer_range":
            v = int(round(self.low - 0.5 + u * (self.high - self.low + 1)))
            return min(max(v, int(self.low)), int(self.high))
        return float(self.low + u * (self.high - self.low))


@dataclass(frozen=True)
class SearchSpace:
    dims: tuple[Dim, ...] = field(default_factory=tuple)

    def __post_init__(self):
        names = [d.name for d in self.dims]
        if len(set(names)) != len(names):
            raise ValueError("duplicate dimension names")

    def __getitem__(self, name: str) -> Dim:
        for d in self.dims:
            if d.name == name:
                return d
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.dims]

    def sample(self, rng: np.random.Generator) -> dict:
        return {d.name: d.sample(rng) for d in self.dims}

    def contains(self, params: dict) -> bool:
        return all(d.contains(params[d.name]) for d in self.dims if d.name in params)

    def override(self, name: str, **changes) -> "SearchSpace":
        return SearchSpace(tuple(replace(d, **changes) if d.name == name else d for d in self.dims))


FAMILIES = ("adaboost", "gaussian_nb", "knn", "lda", "mlp", "random_forest", "sgd_linear", "gradient_boost")

DISPLAY_NAMES = {
    "adaboost": "AdaBoost",
    "gaussian_nb": "GaussianNB",
    "knn": "k-NN",
    "lda": "LDA",
    "mlp": "MLP",
    "random_forest": "Random Forests",
    "sgd_linear": "SGD classifier",
    "gradient_boost": "gradient_boost (xgboost-substitute)",
}

SPACES = {
    "gaussian_nb": SearchSpace((Dim("var_smoothing", "log_uniform", 1e-11, 1e-7),)),
    "knn": SearchSpace((Dim("k", "integer_range", 1, 50),)),
    "lda": SearchSpace((Dim("shrinkage", "uniform", 0.0, 1.0),)),
    "sgd_linear": SearchSpace((
        Dim("alpha", "log_uniform", 1e-6, 1e-1),
        Dim("eta0", "log_uniform", 1e-4, 1e-1),
        Dim("max_epochs", "integer_range", 5, 200),
    )),
    "mlp": SearchSpace((
        Dim("n_layers", "categorical", choices=(1, 2)),
        Dim("width", "categorical", choices=(16, 32, 64, 128)),
        Dim("learning_rate", "log_uniform", 1e-4, 1e-1),
        Dim("alpha", "log_uniform", 1e-6, 1e-2),
    )),
    "random_forest": SearchSpace((
        Dim("n_trees", "integer_range", 50, 500),
        Dim("max_depth", "categorical", choices=tuple(range(4, 33)) + (None,)),
        Dim("max_features", "categorical", choices=("sqrt", "half", "all")),
    )),
    "adaboost": SearchSpace((
        Dim("n_stages", "integer_range", 50, 500),
        Dim("learning_rate", "log_uniform", 0.01, 1.0),
        Dim("max_depth", "integer_range", 1, 3),
    )),
    "gradient_boost": SearchSpace((
        Dim("learning_rate", "log_uniform", 0.01, 0.3),
        Dim("max_depth", "integer_range", 2, 8),
        Dim("n_rounds", "integer_range", 50, 500),
        Dim("subsample", "uniform", 0.5, 1.0),
    )),
}


def check_family(family: str) -> str:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    return family
