from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import SpectralCube, WavelengthGrid
from src.spectral.errors import CorruptFile, NotACube, ShapeMismatch
from .binary import F32, BinaryReader, BinaryWriter
from .cube import CubeFileHeader, read_band_sequential, write_band_sequential

logger = get_logger(__name__)

PathLike = Union[str, Path]

RAW_MAGIC = b'SPVR'
RAW_HEADER = '4sIII'
SPECTRAL_MAGIC = b'SPVC'
SPECTRAL_HEADER = '4sIIIIdd'


@dataclass(frozen=True)
class RawVideoHeader:
    width: int
    height: int
    frames: int

    @property
    def frame_size(self) -> int:
        return self.width * self.height * 3


@dataclass(frozen=True)
class SpectralVideoHeader:
    width: int
    height: int
    bands: int
    frames: int
    start_nm: float
    step_nm: float

    def grid(self) -> WavelengthGrid:
        return WavelengthGrid(self.start_nm, self.step_nm, self.bands)

    def frame_header(self) -> CubeFileHeader:
        return CubeFileHeader(self.width, self.height, self.bands, self.start_nm, self.step_nm, 'f32')


def _check_magic(reader: BinaryReader, magic: bytes) -> None:
    found = reader.handle.read(4)
    if found != magic:
        raise NotACube(f"{reader.name}: bad magic {found!r}, expected {magic!r}")


# SPVR: u32 W, H, frame count, then 8-bit RGB frames back to back

def read_raw_header(path: PathLike) -> RawVideoHeader:
    with open(path, 'rb') as handle:
        reader = BinaryReader(handle, str(path))
        _check_magic(reader, RAW_MAGIC)
        return RawVideoHeader(*reader.unpack(RAW_HEADER[2:]))


def iter_raw_frames(path: PathLike) -> Iterator[np.ndarray]:
    """Yield H x W x 3 uint8 frames one at a time"""
    with open(path, 'rb') as handle:
        reader = BinaryReader(handle, str(path))
        _check_magic(reader, RAW_MAGIC)
        header = RawVideoHeader(*reader.unpack(RAW_HEADER[2:]))
        for _ in range(header.frames):
            data = reader.read(header.frame_size)
            yield np.frombuffer(data, dtype=np.uint8).reshape(header.height, header.width, 3)
        reader.expect_end()


def write_raw_video(path: PathLike, frames: Iterable[np.ndarray]) -> RawVideoHeader:
    """Stream 8-bit RGB frames; the frame count is patched in at the end"""
    count, shape = 0, None
    with open(path, 'wb') as handle:
        writer = BinaryWriter(handle)
        writer.pack(RAW_HEADER, RAW_MAGIC, 0, 0, 0)
        for frame in frames:
            frame = np.asarray(frame)
            if frame.dtype != np.uint8 or frame.ndim != 3 or frame.shape[2] != 3:
                raise ValueError(f"Raw frames must be H x W x 3 uint8, got {frame.dtype} {frame.shape}")
            if shape is None:
                shape = frame.shape
            elif frame.shape != shape:
                raise ShapeMismatch(f"Frame {count} is {frame.shape}, expected {shape}")
            handle.write(frame.tobytes())
            count += 1
        height, width = (shape[0], shape[1]) if shape else (0, 0)
        handle.seek(0)
        writer.pack(RAW_HEADER, RAW_MAGIC, width, height, count)
    return RawVideoHeader(width, height, count)


# SPVC: u32 W, H, N, frame count, f64 grid start/step, then f32 band-sequential frames

def read_spectral_header(path: PathLike) -> SpectralVideoHeader:
    with open(path, 'rb') as handle:
        reader = BinaryReader(handle, str(path))
        _check_magic(reader, SPECTRAL_MAGIC)
        return SpectralVideoHeader(*reader.unpack(SPECTRAL_HEADER[2:]))


def iter_spectral_frames(path: PathLike) -> Iterator[SpectralCube]:
    with open(path, 'rb') as handle:
        reader = BinaryReader(handle, str(path))
        _check_magic(reader, SPECTRAL_MAGIC)
        header = SpectralVideoHeader(*reader.unpack(SPECTRAL_HEADER[2:]))
        if header.frames == 0:
            reader.expect_end()
            return
        try:
            grid = header.grid()
        except ValueError as e:
            raise CorruptFile(f"{path}: invalid grid in header: {e}")
        frame_header = header.frame_header()
        for _ in range(header.frames):
            yield SpectralCube(grid, read_band_sequential(reader, frame_header))
        reader.expect_end()


class SpectralVideoWriter:
    """Writes SPVC frame by frame; use as a context manager"""

    def __init__(self, path: PathLike):
        self.path = Path(path)
        self.frames = 0
        self.grid: Optional[WavelengthGrid] = None
        self.shape = None
        self._handle = None
        self._writer: Optional[BinaryWriter] = None

    def __enter__(self) -> 'SpectralVideoWriter':
        self._handle = open(self.path, 'wb')
        self._writer = BinaryWriter(self._handle)
        self._write_header(0, 0, 0, 1.0, 1.0)
        return self

    def _write_header(self, width: int, height: int, bands: int, start: float, step: float) -> None:
        self._writer.pack(SPECTRAL_HEADER, SPECTRAL_MAGIC, width, height, bands, self.frames, start, step)

    def write(self, cube: SpectralCube) -> None:
        if self._writer is None:
            raise RuntimeError("SpectralVideoWriter used outside its context")
        if self.grid is None:
            self.grid, self.shape = cube.grid, cube.shape
        elif cube.grid != self.grid or cube.shape != self.shape:
            raise ShapeMismatch(f"Frame {self.frames} does not match the first frame's shape or grid")
        write_band_sequential(self._writer, cube.samples, F32)
        self.frames += 1

    def close(self) -> None:
        if self._handle is None:
            return
        self._handle.seek(0)
        if self.grid is not None:
            height, width = self.shape
            self._write_header(width, height, self.grid.count, self.grid.start_nm, self.grid.step_nm)
        self._handle.close()
        self._handle = None
        self._writer = None
        logger.debug(f"Closed {self.path} after {self.frames} frame(s)")

    def __exit__(self, exc_type, exc, tb):
        self.close()
        return False


def write_spectral_video(path: PathLike, frames: Iterable[SpectralCube]) -> int:
    with SpectralVideoWriter(path) as writer:
        for frame in frames:
            writer.write(frame)
    return writer.frames


def read_spectral_video(path: PathLike) -> list:
    return list(iter_spectral_frames(path))
