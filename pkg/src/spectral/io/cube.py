from dataclasses import dataclass
from pathlib import Path
import struct
from typing import Tuple, Union

import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import SpectralCube, WavelengthGrid
from src.spectral.errors import CorruptFile, NotACube, UnsupportedFormat
from .binary import F32, F64, BinaryReader, BinaryWriter

logger = get_logger(__name__)

PathLike = Union[str, Path]

CUBE_MAGIC = b'SPC1'
HEADER_FORMAT = '4sIIIddB'
HEADER_SIZE = struct.calcsize('<' + HEADER_FORMAT)
ENCODINGS = {'f32': (0, F32), 'f64': (1, F64)}
_BY_CODE = {code: (name, dtype) for name, (code, dtype) in ENCODINGS.items()}


@dataclass(frozen=True)
class CubeFileHeader:
    width: int
    height: int
    bands: int
    start_nm: float
    step_nm: float
    encoding: str = 'f64'

    @property
    def dtype(self) -> np.dtype:
        return ENCODINGS[self.encoding][1]

    @property
    def payload_size(self) -> int:
        return self.width * self.height * self.bands * self.dtype.itemsize

    def grid(self) -> WavelengthGrid:
        return WavelengthGrid(self.start_nm, self.step_nm, self.bands)


def _encoding(name: str) -> Tuple[int, np.dtype]:
    try:
        return ENCODINGS[name]
    except KeyError:
        raise UnsupportedFormat(f"Unknown cube encoding '{name}', expected one of {sorted(ENCODINGS)}")


def _write_header(writer: BinaryWriter, header: CubeFileHeader) -> None:
    code, _ = _encoding(header.encoding)
    writer.pack(HEADER_FORMAT, CUBE_MAGIC, header.width, header.height, header.bands,
                header.start_nm, header.step_nm, code)


def _read_header(reader: BinaryReader) -> CubeFileHeader:
    magic = reader.handle.read(4)
    if magic != CUBE_MAGIC:
        raise NotACube(f"{reader.name}: bad magic {magic!r}, expected {CUBE_MAGIC!r}")
    width, height, bands, start, step, code = reader.unpack(HEADER_FORMAT[2:])
    if code not in _BY_CODE:
        raise UnsupportedFormat(f"{reader.name}: unknown encoding code {code}")
    if min(width, height, bands) < 1:
        raise CorruptFile(f"{reader.name}: zero dimension in {width}x{height}x{bands}")
    return CubeFileHeader(width, height, bands, start, step, _BY_CODE[code][0])


def write_band_sequential(writer: BinaryWriter, samples: np.ndarray, dtype: np.dtype) -> None:
    """H x W x N block written as N planes of H x W"""
    writer.array(np.transpose(samples, (2, 0, 1)), dtype)


def read_band_sequential(reader: BinaryReader, header: CubeFileHeader) -> np.ndarray:
    planes = reader.array(header.width * header.height * header.bands, header.dtype)
    return np.transpose(planes.reshape(header.bands, header.height, header.width), (1, 2, 0))


def read_cube_header(path: PathLike) -> CubeFileHeader:
    with open(path, 'rb') as handle:
        return _read_header(BinaryReader(handle, str(path)))


def write_cube(path: PathLike, cube: SpectralCube, encoding: str = 'f64') -> CubeFileHeader:
    header = CubeFileHeader(cube.width, cube.height, cube.grid.count,
                            cube.grid.start_nm, cube.grid.step_nm, encoding)
    with open(path, 'wb') as handle:
        writer = BinaryWriter(handle)
        _write_header(writer, header)
        write_band_sequential(writer, cube.samples, header.dtype)
    logger.debug(f"Wrote {cube.height}x{cube.width}x{cube.grid.count} {encoding} cube to {path}")
    return header


def read_cube(path: PathLike) -> SpectralCube:
    with open(path, 'rb') as handle:
        reader = BinaryReader(handle, str(path))
        header = _read_header(reader)
        if header.bands == 1:
            raise UnsupportedFormat(f"{path}: single-band file, read it with read_map")
        try:
            grid = header.grid()
        except ValueError as e:
            raise CorruptFile(f"{path}: invalid grid in header: {e}")
        samples = read_band_sequential(reader, header)
        reader.expect_end()
    return SpectralCube(grid, samples)


def write_map(path: PathLike, values: np.ndarray, encoding: str = 'f64') -> CubeFileHeader:
    """H x W scalar map (RMSE map, 0/1 mask) as a single-band cube file"""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError(f"A map must be H x W, got shape {values.shape}")
    header = CubeFileHeader(values.shape[1], values.shape[0], 1, 0.0, 0.0, encoding)
    with open(path, 'wb') as handle:
        writer = BinaryWriter(handle)
        _write_header(writer, header)
        write_band_sequential(writer, values[:, :, np.newaxis], header.dtype)
    return header


def read_map(path: PathLike) -> np.ndarray:
    with open(path, 'rb') as handle:
        reader = BinaryReader(handle, str(path))
        header = _read_header(reader)
        if header.bands != 1:
            raise UnsupportedFormat(f"{path}: {header.bands}-band cube, read it with read_cube")
        values = read_band_sequential(reader, header)[:, :, 0]
        reader.expect_end()
    return values
