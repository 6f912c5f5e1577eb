from dataclasses import dataclass
import math

import numpy as np

from src.spectral.errors import GridMismatch


@dataclass(frozen=True)
class WavelengthGrid:
    """Uniform wavelength sampling, in nanometres"""
    start_nm: float = 420.0
    step_nm: float = 10.0
    count: int = 31

    def __post_init__(self):
        if not (math.isfinite(self.start_nm) and self.start_nm > 0):
            raise ValueError(f"start_nm must be positive, got {self.start_nm}")
        if not (math.isfinite(self.step_nm) and self.step_nm > 0):
            raise ValueError(f"step_nm must be positive, got {self.step_nm}")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"count must be an integer >= 2, got {self.count}")
        object.__setattr__(self, 'start_nm', float(self.start_nm))
        object.__setattr__(self, 'step_nm', float(self.step_nm))
        object.__setattr__(self, 'count', int(self.count))

    @property
    def end_nm(self) -> float:
        return self.start_nm + (self.count - 1) * self.step_nm

    def wavelengths(self) -> np.ndarray:
        return self.start_nm + np.arange(self.count, dtype=np.float64) * self.step_nm

    def index_of(self, wavelength_nm: float) -> int:
        """Band index for a wavelength lying on the grid"""
        position = (wavelength_nm - self.start_nm) / self.step_nm
        index = int(round(position))
        if abs(position - index) > 1e-6 or not 0 <= index < self.count:
            raise ValueError(f"{wavelength_nm} nm is not a sample of {self}")
        return index

    def band_range(self, low_nm: float, high_nm: float) -> np.ndarray:
        """Indices of the bands whose wavelength lies in [low_nm, high_nm]"""
        wl = self.wavelengths()
        return np.flatnonzero((wl >= low_nm - 1e-9) & (wl <= high_nm + 1e-9))

    def __str__(self) -> str:
        return f"{self.start_nm:g}-{self.end_nm:g} nm @ {self.step_nm:g} nm ({self.count} bands)"


DEFAULT_GRID = WavelengthGrid()


def grid_wavelengths(grid: WavelengthGrid) -> np.ndarray:
    return grid.wavelengths()


def require_same_grid(a: WavelengthGrid, b: WavelengthGrid) -> None:
    if a != b:
        raise GridMismatch(f"Grid mismatch: {a} vs {b}")


def grid_for_bands(count: int) -> WavelengthGrid:
    """Default-spaced grid with ``count`` bands, used when a caller passes bare matrices"""
    if count == DEFAULT_GRID.count:
        return DEFAULT_GRID
    return WavelengthGrid(DEFAULT_GRID.start_nm, DEFAULT_GRID.step_nm, count)
