from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.spectral.core import RgbImage, require_same_shape

SKIP_MODES = ('none', 'similarity')


def frame_similarity(a: RgbImage, b: RgbImage) -> float:
    """1 - mean absolute per-channel difference"""
    require_same_shape(a, b)
    return float(1.0 - np.mean(np.abs(a.values - b.values)))


@dataclass(frozen=True)
class SkipPolicy:
    mode: str = 'none'
    threshold: Optional[float] = None

    def __post_init__(self):
        if self.mode not in SKIP_MODES:
            raise ValueError(f"Unknown skip mode '{self.mode}', expected one of {SKIP_MODES}")
        if self.mode == 'similarity':
            if self.threshold is None:
                raise ValueError("Similarity skipping needs a threshold")
            if not 0.0 <= self.threshold <= 1.0:
                raise ValueError(f"Skip threshold must lie in [0, 1], got {self.threshold}")

    @classmethod
    def none(cls) -> 'SkipPolicy':
        return cls('none')

    @classmethod
    def similarity(cls, threshold: float) -> 'SkipPolicy':
        return cls('similarity', threshold)

    @classmethod
    def from_threshold(cls, threshold: Optional[float]) -> 'SkipPolicy':
        return cls.none() if threshold is None else cls.similarity(threshold)

    def should_skip(self, frame: RgbImage, last_estimated: Optional[RgbImage]) -> bool:
        if self.mode == 'none' or last_estimated is None:
            return False
        if self.threshold >= 1.0:
            # only bit-identical frames count as similar enough
            return np.array_equal(frame.values, last_estimated.values)
        return frame_similarity(frame, last_estimated) >= self.threshold
