from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Tuple, Union

import numpy as np
import pandas as pd

from src.framework.logging import get_logger
from src.spectral.errors import EmptyTable
from .grid import WavelengthGrid

logger = get_logger(__name__)

DATA_DIR = Path(__file__).parent / "data"
CMF_FILE = "cie_1931_2deg_5nm.csv"
D65_FILE = "cie_d65_5nm.csv"

TableLike = Union[pd.Series, Iterable[Tuple[float, float]]]


def _as_series(table: TableLike) -> pd.Series:
    if isinstance(table, pd.Series):
        series = table.astype(np.float64)
    else:
        pairs = list(table)
        if not pairs:
            raise EmptyTable("Cannot resample an empty table")
        wavelengths, values = zip(*pairs)
        series = pd.Series(values, index=wavelengths, dtype=np.float64)
    if series.empty:
        raise EmptyTable("Cannot resample an empty table")
    return series.sort_index()


def resample(table: TableLike, grid: WavelengthGrid) -> np.ndarray:
    """Linearly interpolate a tabulated function onto a grid; zero outside the table"""
    series = _as_series(table)
    knots = series.index.to_numpy(dtype=np.float64)
    values = series.to_numpy(dtype=np.float64)
    return np.interp(grid.wavelengths(), knots, values, left=0.0, right=0.0)


@dataclass(frozen=True)
class ColorimetryTables:
    """CIE 1931 2 degree observer and D65 relative SPD on one grid"""
    grid: WavelengthGrid
    cmf_x: np.ndarray
    cmf_y: np.ndarray
    cmf_z: np.ndarray
    d65: np.ndarray

    def __post_init__(self):
        for name in ('cmf_x', 'cmf_y', 'cmf_z', 'd65'):
            vector = np.array(getattr(self, name), dtype=np.float64)
            if vector.shape != (self.grid.count,):
                raise ValueError(f"{name} must have {self.grid.count} samples, got {vector.shape}")
            if np.any(vector < 0) or not np.all(np.isfinite(vector)):
                raise ValueError(f"{name} must be finite and non-negative")
            vector.setflags(write=False)
            object.__setattr__(self, name, vector)

    @property
    def cmf(self) -> np.ndarray:
        """3 x N matrix of the colour matching functions"""
        return np.vstack([self.cmf_x, self.cmf_y, self.cmf_z])


@lru_cache(maxsize=1)
def _raw_tables() -> Tuple[pd.DataFrame, pd.DataFrame]:
    cmf = pd.read_csv(DATA_DIR / CMF_FILE, index_col='wavelength')
    d65 = pd.read_csv(DATA_DIR / D65_FILE, index_col='wavelength')
    logger.debug(f"Loaded CIE tables: {len(cmf)} CMF rows, {len(d65)} D65 rows")
    return cmf, d65


@lru_cache(maxsize=32)
def load_colorimetry(grid: WavelengthGrid) -> ColorimetryTables:
    """Colorimetry reference data resampled onto ``grid``"""
    cmf, d65 = _raw_tables()
    return ColorimetryTables(
        grid=grid,
        cmf_x=resample(cmf['x_bar'], grid),
        cmf_y=resample(cmf['y_bar'], grid),
        cmf_z=resample(cmf['z_bar'], grid),
        d65=resample(d65['d65'], grid),
    )
