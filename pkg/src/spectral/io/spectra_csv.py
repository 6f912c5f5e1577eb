from pathlib import Path
from typing import List, Sequence, Union

import numpy as np
import pandas as pd

from src.spectral.core import Spectrum, WavelengthGrid
from src.spectral.errors import CorruptFile, GridMismatch

PathLike = Union[str, Path]

WAVELENGTH_COLUMN = 'wavelength'
# uniform-grid tolerance on the wavelength column, nm
_GRID_TOLERANCE = 1e-6


def write_spectra_csv(path: PathLike, spectra: Sequence[Spectrum]) -> None:
    """One row per band: wavelength, s1, s2, ..."""
    if not spectra:
        raise ValueError("Nothing to write")
    grid = spectra[0].grid
    if any(s.grid != grid for s in spectra):
        raise GridMismatch("All spectra in one CSV must share a grid")
    frame = pd.DataFrame({WAVELENGTH_COLUMN: grid.wavelengths()})
    for index, spectrum in enumerate(spectra, start=1):
        frame[f"s{index}"] = spectrum.values
    frame.to_csv(path, index=False, float_format='%.17g')


def read_spectra_csv(path: PathLike) -> List[Spectrum]:
    try:
        frame = pd.read_csv(path, dtype=np.float64)
    except (pd.errors.ParserError, ValueError) as e:
        raise CorruptFile(f"{path}: {e}")
    if frame.columns[0] != WAVELENGTH_COLUMN or frame.shape[1] < 2:
        raise CorruptFile(f"{path}: expected a '{WAVELENGTH_COLUMN}' column followed by spectra")
    if frame.isna().any().any():
        raise CorruptFile(f"{path}: ragged or empty cells")

    wavelengths = frame[WAVELENGTH_COLUMN].to_numpy()
    if wavelengths.size < 2:
        raise CorruptFile(f"{path}: need at least two bands")
    steps = np.diff(wavelengths)
    if np.any(np.abs(steps - steps[0]) > _GRID_TOLERANCE):
        raise CorruptFile(f"{path}: wavelengths are not uniformly spaced")
    try:
        grid = WavelengthGrid(float(wavelengths[0]), float(steps[0]), wavelengths.size)
    except ValueError as e:
        raise CorruptFile(f"{path}: {e}")
    return [Spectrum(grid, frame[column].to_numpy()) for column in frame.columns[1:]]
