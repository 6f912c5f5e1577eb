import numpy as np

from src.spectral.core import Spectrum, SpectralCube, ColorimetryTables, require_same_grid

EPSILON = (6.0 / 29.0) ** 3
KAPPA = 1.0 / (3.0 * (6.0 / 29.0) ** 2)


def _tristimulus_matrix(tables: ColorimetryTables) -> np.ndarray:
    """3 x N matrix mapping reflectance to XYZ, Y of a perfect reflector = 100"""
    k = 100.0 / np.sum(tables.d65 * tables.cmf_y)
    return k * tables.cmf * tables.d65[np.newaxis, :]


def xyz_from_spectrum(r: Spectrum, tables: ColorimetryTables) -> np.ndarray:
    require_same_grid(r.grid, tables.grid)
    return _tristimulus_matrix(tables) @ r.values


def xyz_from_cube(cube: SpectralCube, tables: ColorimetryTables) -> np.ndarray:
    """H x W x 3 XYZ image"""
    require_same_grid(cube.grid, tables.grid)
    return np.einsum('hwn,cn->hwc', cube.samples, _tristimulus_matrix(tables))


def white_point(tables: ColorimetryTables) -> np.ndarray:
    """XYZ of the perfect reflector under D65"""
    return _tristimulus_matrix(tables).sum(axis=1)


def _lab_f(t: np.ndarray) -> np.ndarray:
    return np.where(t > EPSILON, np.cbrt(t), t * KAPPA + 4.0 / 29.0)


def lab_from_xyz(xyz, white) -> np.ndarray:
    """CIE L*a*b* of XYZ values (trailing axis of length 3)"""
    xyz = np.asarray(xyz, dtype=np.float64)
    white = np.asarray(white, dtype=np.float64)
    if np.any(white <= 0):
        raise ValueError(f"White reference must be positive, got {white}")
    f = _lab_f(xyz / white)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    return np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)], axis=-1)


def lab_from_spectrum(r: Spectrum, tables: ColorimetryTables) -> np.ndarray:
    return lab_from_xyz(xyz_from_spectrum(r, tables), white_point(tables))


def lab_from_cube(cube: SpectralCube, tables: ColorimetryTables) -> np.ndarray:
    return lab_from_xyz(xyz_from_cube(cube, tables), white_point(tables))


