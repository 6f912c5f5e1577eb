from typing import NamedTuple

import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import Spectrum, SpectralCube, RgbImage, require_same_grid
from .spec import CameraSpec, system_matrix

logger = get_logger(__name__)


class RenderResult(NamedTuple):
    image: RgbImage
    clipped: int


def simulate_response(r: Spectrum, camera: CameraSpec, counter: int = 0) -> np.ndarray:
    """rho = Q r + delta, with delta drawn for the given call counter"""
    require_same_grid(r.grid, camera.grid)
    rho = system_matrix(camera) @ r.values
    if camera.noise.enabled:
        rho = rho + camera.noise.draw(counter)[0]
    return rho


def simulate_responses(reflectances: np.ndarray, camera: CameraSpec, counter: int = 0) -> np.ndarray:
    """Responses (M x k) of the reflectance columns of an N x k matrix"""
    reflectances = np.asarray(reflectances, dtype=np.float64)
    if reflectances.shape[0] != camera.grid.count:
        raise ValueError(
            f"Reflectances have {reflectances.shape[0]} bands, camera expects {camera.grid.count}"
        )
    responses = system_matrix(camera) @ reflectances
    if camera.noise.enabled:
        responses = responses + camera.noise.draw(counter, responses.shape[1]).T
    return responses


def render_rgb_cube(cube: SpectralCube, camera: CameraSpec) -> RenderResult:
    """Noise-free responses of every pixel, clipped to [0, 1]"""
    require_same_grid(cube.grid, camera.grid)
    if camera.channels != 3:
        raise ValueError(f"RGB rendering needs a 3-channel camera, got {camera.channels}")

    q = system_matrix(camera)
    raw = np.einsum('hwn,mn->hwm', cube.samples, q)
    outside = (raw < 0.0) | (raw > 1.0)
    clipped = int(np.count_nonzero(outside))
    if clipped:
        logger.warning(f"Clipped {clipped} of {raw.size} channel values while rendering")
    return RenderResult(RgbImage(np.clip(raw, 0.0, 1.0)), clipped)
