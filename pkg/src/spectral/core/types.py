from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.spectral.errors import GridMismatch, ShapeMismatch
from .grid import WavelengthGrid, require_same_grid


def _frozen(array: np.ndarray, ndim: int, what: str) -> np.ndarray:
    """Copy to a read-only float64 array of the expected rank"""
    out = np.array(array, dtype=np.float64, copy=True)
    if out.ndim != ndim:
        raise ValueError(f"{what} must be {ndim}-dimensional, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{what} contains non-finite values")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Spectrum:
    """Reflectance sampled on a wavelength grid"""
    grid: WavelengthGrid
    values: np.ndarray
    clamped: bool = False

    def __post_init__(self):
        values = _frozen(self.values, 1, 'Spectrum values')
        if values.shape[0] != self.grid.count:
            raise GridMismatch(
                f"Spectrum has {values.shape[0]} samples, grid expects {self.grid.count}"
            )
        object.__setattr__(self, 'values', values)

    @classmethod
    def constant(cls, grid: WavelengthGrid, value: float) -> 'Spectrum':
        return cls(grid, np.full(grid.count, value, dtype=np.float64))

    def clamp(self) -> 'Spectrum':
        return Spectrum(self.grid, np.clip(self.values, 0.0, 1.0), clamped=True)

    def is_physical(self) -> bool:
        return bool(np.all((self.values >= 0.0) & (self.values <= 1.0)))

    def __len__(self) -> int:
        return self.grid.count


@dataclass(frozen=True)
class SpectralCube:
    """H x W image of spectra sharing one grid; samples are stored H x W x N"""
    grid: WavelengthGrid
    samples: np.ndarray
    clamped: bool = False

    def __post_init__(self):
        samples = _frozen(self.samples, 3, 'SpectralCube samples')
        if samples.shape[2] != self.grid.count:
            raise GridMismatch(
                f"Cube has {samples.shape[2]} bands, grid expects {self.grid.count}"
            )
        if samples.shape[0] < 1 or samples.shape[1] < 1:
            raise ValueError(f"Cube must have at least one pixel, got {samples.shape}")
        object.__setattr__(self, 'samples', samples)

    @classmethod
    def from_matrix(cls, grid: WavelengthGrid, matrix: np.ndarray, height: int, width: int) -> 'SpectralCube':
        """Build from an N x (H*W) matrix whose columns are pixels in row-major order"""
        return cls(grid, np.asarray(matrix).T.reshape(height, width, grid.count))

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    @property
    def pixel_count(self) -> int:
        return self.height * self.width

    def pixel(self, y: int, x: int) -> Spectrum:
        return Spectrum(self.grid, self.samples[y, x], clamped=self.clamped)

    def with_pixel(self, y: int, x: int, spectrum: Spectrum) -> 'SpectralCube':
        require_same_grid(self.grid, spectrum.grid)
        samples = np.array(self.samples)
        samples[y, x] = spectrum.values
        return SpectralCube(self.grid, samples, clamped=self.clamped)

    def band(self, index: int) -> np.ndarray:
        return self.samples[:, :, index]

    def as_matrix(self) -> np.ndarray:
        """N x (H*W) matrix, pixel columns in row-major order"""
        return self.samples.reshape(-1, self.grid.count).T

    def clamped_copy(self) -> 'SpectralCube':
        return SpectralCube(self.grid, np.clip(self.samples, 0.0, 1.0), clamped=True)


@dataclass(frozen=True)
class RgbImage:
    """H x W x 3 linear RGB values in [0, 1]"""
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values, 3, 'RgbImage values')
        if values.shape[2] != 3:
            raise ValueError(f"RgbImage needs 3 channels, got {values.shape[2]}")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ValueError("RgbImage values must lie in [0, 1]")
        object.__setattr__(self, 'values', values)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    def as_rows(self) -> np.ndarray:
        """(H*W) x 3 pixel rows in row-major order"""
        return self.values.reshape(-1, 3)


def require_same_shape(a, b) -> None:
    if a.shape != b.shape:
        raise ShapeMismatch(f"Shape mismatch: {a.shape} vs {b.shape}")


def clamp_spectrum(spectrum: Spectrum) -> Spectrum:
    """Explicit clamp to [0, 1]; estimates are stored unclamped until this is called"""
    return spectrum.clamp()
