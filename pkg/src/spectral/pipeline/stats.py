from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np


@dataclass
class PipelineStats:
    frames_in: int = 0
    frames_estimated: int = 0
    frames_skipped: int = 0
    per_frame_ms: List[float] = field(default_factory=list)
    wall_seconds: float = 0.0

    @property
    def throughput_fps(self) -> float:
        return self.frames_in / self.wall_seconds if self.wall_seconds > 0 else 0.0

    @property
    def mean_frame_ms(self) -> float:
        return float(np.mean(self.per_frame_ms)) if self.per_frame_ms else 0.0

    def is_consistent(self) -> bool:
        return self.frames_in == self.frames_estimated + self.frames_skipped

    def to_dict(self) -> Dict[str, Any]:
        return {
            'frames_in': self.frames_in,
            'frames_estimated': self.frames_estimated,
            'frames_skipped': self.frames_skipped,
            'mean_frame_ms': self.mean_frame_ms,
            'throughput_fps': self.throughput_fps,
            'wall_seconds': self.wall_seconds,
        }
