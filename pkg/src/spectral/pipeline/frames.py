from pathlib import Path
import re
from typing import Iterable, Iterator, List, Optional, Union

import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import RgbImage
from src.spectral.errors import BadPixelValue, ConfigError
from src.spectral.io import iter_raw_frames, read_ppm_raw, read_raw_header

logger = get_logger(__name__)

SUPPORTED_BIT_DEPTHS = (8, 16)
FRAME_PATTERN = re.compile(r'^frame_(\d{6})\.ppm$')


def normalize_rgb(raw: np.ndarray, bit_depth: int = 8) -> RgbImage:
    """Integer H x W x 3 frame to [0, 1] by dividing by 2^bit_depth - 1"""
    if bit_depth not in SUPPORTED_BIT_DEPTHS:
        raise ConfigError(f"Bit depth must be one of {SUPPORTED_BIT_DEPTHS}, got {bit_depth}")
    raw = np.asarray(raw)
    if raw.ndim != 3 or raw.shape[2] != 3:
        raise ValueError(f"Expected an H x W x 3 frame, got shape {raw.shape}")
    if not np.issubdtype(raw.dtype, np.integer):
        raise BadPixelValue(f"Raw frames must hold integers, got {raw.dtype}")
    maximum = (1 << bit_depth) - 1
    if raw.size and (raw.min() < 0 or raw.max() > maximum):
        raise BadPixelValue(
            f"Pixel values span [{raw.min()}, {raw.max()}], outside [0, {maximum}] for {bit_depth}-bit input"
        )
    return RgbImage(raw.astype(np.float64) / maximum)


class FrameSource:
    """Ordered raw integer frames plus the bit depth they are encoded with"""
    bit_depth: int = 8

    def __iter__(self) -> Iterator[np.ndarray]:
        raise NotImplementedError

    def __len__(self) -> int:
        raise NotImplementedError


class ArrayFrameSource(FrameSource):
    def __init__(self, frames: Iterable[np.ndarray], bit_depth: int = 8):
        self.frames = list(frames)
        self.bit_depth = bit_depth

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.frames)

    def __len__(self) -> int:
        return len(self.frames)


class PpmDirectorySource(FrameSource):
    """``frame_%06d.ppm`` files of a directory, in frame-number order"""

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise ConfigError(f"Frame directory {self.directory} does not exist")
        self.paths: List[Path] = sorted(
            (p for p in self.directory.iterdir() if FRAME_PATTERN.match(p.name)),
            key=lambda p: int(FRAME_PATTERN.match(p.name).group(1)),
        )
        if not self.paths:
            logger.warning(f"No frame_NNNNNN.ppm files in {self.directory}")

    def __iter__(self) -> Iterator[np.ndarray]:
        for path in self.paths:
            yield read_ppm_raw(path)

    def __len__(self) -> int:
        return len(self.paths)


class RawVideoSource(FrameSource):
    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.header = read_raw_header(self.path)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter_raw_frames(self.path)

    def __len__(self) -> int:
        return self.header.frames


def open_frame_source(path: Union[str, Path], bit_depth: Optional[int] = None) -> FrameSource:
    """A PPM directory or an SPVR file, chosen by what ``path`` is"""
    path = Path(path)
    source = PpmDirectorySource(path) if path.is_dir() else RawVideoSource(path)
    if bit_depth is not None and bit_depth != source.bit_depth:
        raise ConfigError(f"{path} holds {source.bit_depth}-bit frames, not {bit_depth}-bit")
    return source


def frame_name(index: int) -> str:
    return f"frame_{index:06d}.ppm"
