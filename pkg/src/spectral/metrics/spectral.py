import numpy as np

from src.spectral.camera import lab_from_spectrum, lab_from_xyz, white_point, xyz_from_cube
from src.spectral.core import ColorimetryTables, Spectrum, SpectralCube, require_same_grid, require_same_shape
from src.spectral.errors import DegenerateSpectrum


def rmse(r: Spectrum, r_hat: Spectrum) -> float:
    require_same_grid(r.grid, r_hat.grid)
    return float(np.sqrt(np.mean((r.values - r_hat.values) ** 2)))


def gfc(r: Spectrum, r_hat: Spectrum) -> float:
    """Goodness-of-fit coefficient |<r, r_hat>| / (|r| |r_hat|)"""
    require_same_grid(r.grid, r_hat.grid)
    norm = np.linalg.norm(r.values) * np.linalg.norm(r_hat.values)
    if norm == 0.0:
        raise DegenerateSpectrum("GFC is undefined for a zero-norm spectrum")
    return float(min(1.0, abs(np.dot(r.values, r_hat.values)) / norm))


def delta_e_ab(r: Spectrum, r_hat: Spectrum, tables: ColorimetryTables) -> float:
    require_same_grid(r.grid, r_hat.grid)
    return float(np.linalg.norm(lab_from_spectrum(r, tables) - lab_from_spectrum(r_hat, tables)))


def _require_comparable(truth: SpectralCube, estimate: SpectralCube) -> None:
    require_same_grid(truth.grid, estimate.grid)
    require_same_shape(truth, estimate)


def rmse_map(truth: SpectralCube, estimate: SpectralCube) -> np.ndarray:
    _require_comparable(truth, estimate)
    return np.sqrt(np.mean((truth.samples - estimate.samples) ** 2, axis=2))


def gfc_map(truth: SpectralCube, estimate: SpectralCube) -> np.ndarray:
    """Per-pixel GFC; NaN where either spectrum has zero norm"""
    _require_comparable(truth, estimate)
    dot = np.abs(np.einsum('hwn,hwn->hw', truth.samples, estimate.samples))
    norm = np.linalg.norm(truth.samples, axis=2) * np.linalg.norm(estimate.samples, axis=2)
    out = np.full(norm.shape, np.nan)
    valid = norm > 0.0
    out[valid] = np.minimum(1.0, dot[valid] / norm[valid])
    return out


def delta_e_map(truth: SpectralCube, estimate: SpectralCube, tables: ColorimetryTables) -> np.ndarray:
    _require_comparable(truth, estimate)
    white = white_point(tables)
    lab_truth = lab_from_xyz(xyz_from_cube(truth, tables), white)
    lab_estimate = lab_from_xyz(xyz_from_cube(estimate, tables), white)
    return np.linalg.norm(lab_truth - lab_estimate, axis=2)
