"""Eight classifier families behind one fit / score interface."""

from .base import AlgorithmSpec, Estimator, Model, aggregate_epochs, fit, make_estimator, predict_epochs, predict_scores
from .lda import SingularCovarianceError
from .serialize import dumps, load, loads, save

__all__ = [
    "AlgorithmSpec", "Estimator", "Model", "SingularCovarianceError", "aggregate_epochs", "dumps", "fit",
    "load", "loads", "make_estimator", "predict_epochs", "predict_scores", "save",
]
