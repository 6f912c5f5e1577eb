from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import WavelengthGrid, ColorimetryTables, load_colorimetry
from .noise import NoiseModel

logger = get_logger(__name__)

GAUSSIAN_PEAKS_NM = (600.0, 550.0, 450.0)   # R, G, B
GAUSSIAN_SIGMA_NM = 30.0


@dataclass(frozen=True)
class CameraSpec:
    """Sensor sensitivities S (M x N), illuminant L (N), noise and per-channel white scale"""
    grid: WavelengthGrid
    sensitivities: np.ndarray
    illuminant: np.ndarray
    noise: NoiseModel = field(default_factory=NoiseModel.none)
    white_scale: Optional[np.ndarray] = None

    def __post_init__(self):
        sensitivities = np.array(self.sensitivities, dtype=np.float64)
        if sensitivities.ndim == 1:
            sensitivities = sensitivities[np.newaxis, :]
        illuminant = np.array(self.illuminant, dtype=np.float64)

        if sensitivities.ndim != 2 or sensitivities.shape[1] != self.grid.count:
            raise ValueError(
                f"Sensitivities must be M x {self.grid.count}, got {sensitivities.shape}"
            )
        if illuminant.shape != (self.grid.count,):
            raise ValueError(f"Illuminant must have {self.grid.count} samples, got {illuminant.shape}")
        for name, values in (('sensitivities', sensitivities), ('illuminant', illuminant)):
            if not np.all(np.isfinite(values)) or np.any(values < 0):
                raise ValueError(f"Camera {name} must be finite and non-negative")

        channels = sensitivities.shape[0]
        if self.noise.sigma.shape[0] != channels:
            raise ValueError(f"Noise sigma has {self.noise.sigma.shape[0]} entries for {channels} channels")

        if self.white_scale is None:
            white_response = sensitivities @ illuminant
            if np.any(white_response <= 0):
                raise ValueError("Cannot normalise a channel with zero response to white")
            white_scale = 1.0 / white_response
        else:
            white_scale = np.array(self.white_scale, dtype=np.float64)
            if white_scale.shape != (channels,) or not np.all(np.isfinite(white_scale)):
                raise ValueError(f"white_scale must be a finite {channels}-vector")

        for values in (sensitivities, illuminant, white_scale):
            values.setflags(write=False)
        object.__setattr__(self, 'sensitivities', sensitivities)
        object.__setattr__(self, 'illuminant', illuminant)
        object.__setattr__(self, 'white_scale', white_scale)

    @property
    def channels(self) -> int:
        return self.sensitivities.shape[0]

    def with_noise(self, noise: NoiseModel) -> 'CameraSpec':
        return CameraSpec(self.grid, self.sensitivities, self.illuminant, noise, self.white_scale)

    def noiseless(self) -> 'CameraSpec':
        return self.with_noise(NoiseModel.none(self.channels))


def system_matrix(camera: CameraSpec) -> np.ndarray:
    """Q = diag(white_scale) . S . diag(L)"""
    return camera.white_scale[:, np.newaxis] * camera.sensitivities * camera.illuminant[np.newaxis, :]


def gaussian_camera(
    grid: WavelengthGrid,
    peaks_nm: Sequence[float] = GAUSSIAN_PEAKS_NM,
    sigma_nm: float = GAUSSIAN_SIGMA_NM,
    tables: Optional[ColorimetryTables] = None,
    noise: Optional[NoiseModel] = None,
) -> CameraSpec:
    """Three Gaussian channels under D65"""
    tables = tables or load_colorimetry(grid)
    wl = grid.wavelengths()
    sensitivities = np.vstack([np.exp(-0.5 * ((wl - peak) / sigma_nm) ** 2) for peak in peaks_nm])
    return CameraSpec(grid, sensitivities, tables.d65, noise or NoiseModel.none(len(peaks_nm)))


def colorimetric_camera(
    grid: WavelengthGrid,
    tables: Optional[ColorimetryTables] = None,
    noise: Optional[NoiseModel] = None,
) -> CameraSpec:
    """CIE colour matching functions under D65, each channel normalised to white"""
    tables = tables or load_colorimetry(grid)
    return CameraSpec(grid, tables.cmf, tables.d65, noise or NoiseModel.none(3))


CAMERA_PRESETS = {
    'gaussian': gaussian_camera,
    'colorimetric': colorimetric_camera,
}


def camera_preset(name: str, grid: WavelengthGrid, noise: Optional[NoiseModel] = None) -> CameraSpec:
    try:
        factory = CAMERA_PRESETS[name]
    except KeyError:
        raise ValueError(f"Unknown camera preset '{name}', expected one of {sorted(CAMERA_PRESETS)}")
    logger.debug(f"Building '{name}' camera on {grid}")
    return factory(grid, noise=noise)
