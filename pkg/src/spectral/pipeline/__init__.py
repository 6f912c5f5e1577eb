from .frames import (
    ArrayFrameSource,
    FrameSource,
    PpmDirectorySource,
    RawVideoSource,
    frame_name,
    normalize_rgb,
    open_frame_source,
)
from .skip import SkipPolicy, frame_similarity
from .stats import PipelineStats
from .generator import PipelineResult, estimate_frames, process_video

__all__ = [
    'ArrayFrameSource',
    'FrameSource',
    'PpmDirectorySource',
    'RawVideoSource',
    'frame_name',
    'normalize_rgb',
    'open_frame_source',
    'SkipPolicy',
    'frame_similarity',
    'PipelineStats',
    'PipelineResult',
    'estimate_frames',
    'process_video',
]
