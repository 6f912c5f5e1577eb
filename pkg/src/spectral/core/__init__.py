from .grid import WavelengthGrid, DEFAULT_GRID, grid_wavelengths, grid_for_bands, require_same_grid
from .types import Spectrum, SpectralCube, RgbImage, clamp_spectrum, require_same_shape
from .colorimetry import ColorimetryTables, resample, load_colorimetry

__all__ = [
    'WavelengthGrid',
    'DEFAULT_GRID',
    'grid_for_bands',
    'grid_wavelengths',
    'require_same_grid',
    'Spectrum',
    'SpectralCube',
    'RgbImage',
    'clamp_spectrum',
    'require_same_shape',
    'ColorimetryTables',
    'resample',
    'load_colorimetry',
]
