from pathlib import Path
from typing import Union

import cv2
import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import RgbImage, SpectralCube
from src.spectral.errors import CorruptFile, UnsupportedFormat

logger = get_logger(__name__)

PathLike = Union[str, Path]

PPM_MAXVAL = 255


def quantize(values: np.ndarray) -> np.ndarray:
    """[0, 1] to 8 bit, rounding half up"""
    return np.floor(np.clip(values, 0.0, 1.0) * PPM_MAXVAL + 0.5).astype(np.uint8)


def _header_tokens(path: PathLike, count: int = 4) -> list:
    tokens = []
    with open(path, 'rb') as handle:
        data = handle.read(512)
    for line in data.split(b'\n'):
        line = line.split(b'#', 1)[0]
        tokens.extend(line.split())
        if len(tokens) >= count:
            break
    return tokens[:count]


def read_ppm_raw(path: PathLike) -> np.ndarray:
    """H x W x 3 uint8 RGB of a binary P6 file with maxval 255"""
    tokens = _header_tokens(path)
    if not tokens or tokens[0] != b'P6':
        raise UnsupportedFormat(f"{path}: only binary P6 PPM is supported")
    if len(tokens) < 4 or not tokens[3].isdigit():
        raise CorruptFile(f"{path}: incomplete PPM header")
    if int(tokens[3]) != PPM_MAXVAL:
        raise UnsupportedFormat(f"{path}: maxval {int(tokens[3])} unsupported, expected {PPM_MAXVAL}")
    bgr = cv2.imread(str(path), cv2.IMREAD_COLOR)
    if bgr is None:
        raise CorruptFile(f"{path}: could not decode PPM")
    return cv2.cvtColor(bgr, cv2.COLOR_BGR2RGB)


def read_ppm(path: PathLike) -> RgbImage:
    return RgbImage(read_ppm_raw(path).astype(np.float64) / PPM_MAXVAL)


def write_ppm_raw(path: PathLike, rgb: np.ndarray) -> None:
    rgb = np.asarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"Expected H x W x 3 8-bit data, got {rgb.shape}")
    if not cv2.imwrite(str(path), cv2.cvtColor(rgb, cv2.COLOR_RGB2BGR)):
        raise OSError(f"Could not write {path}")


def write_ppm(path: PathLike, image: RgbImage) -> None:
    write_ppm_raw(path, quantize(image.values))


def write_band_view(path: PathLike, cube: SpectralCube, band: int) -> np.ndarray:
    """Grey PPM of one band, values clipped to [0, 1]"""
    if not 0 <= band < cube.grid.count:
        raise ValueError(f"Band {band} outside 0..{cube.grid.count - 1}")
    grey = quantize(cube.band(band))
    write_ppm_raw(path, np.repeat(grey[:, :, np.newaxis], 3, axis=2))
    logger.debug(f"Wrote band {band} ({cube.grid.wavelengths()[band]:g} nm) view to {path}")
    return grey
