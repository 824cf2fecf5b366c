"""EEG artifact recognition benchmark: EDF ingest, TCP montage, spectral
eigen-features, eight classifier families, tuning and benchmark reports."""

from .labels import ArtifactClass

__version__ = "0.1.0"
__all__ = ["ArtifactClass"]
