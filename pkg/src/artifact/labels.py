"""The six per-second target classes."""

from enum import IntEnum


class ArtifactClass(IntEnum):
    eyem = 0
    chew = 1
    shiv = 2
    elpp = 3
    musc = 4
    null = 5

    @classmethod
    def parse(cls, text: str) -> "ArtifactClass":
        try:
            return cls[text.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown label {text!r}") from None


N_CLASSES = len(ArtifactClass)
ARTIFACT_CLASSES = tuple(c for c in ArtifactClass if c is not ArtifactClass.null)
