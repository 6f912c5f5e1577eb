from concurrent.futures import ThreadPoolExecutor
from typing import List

import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import Spectrum, SpectralCube, RgbImage
from .base import EstimatorCreator
from .model import EstimationModel

logger = get_logger(__name__)

# fixed partition so results do not depend on the worker count
PIXEL_CHUNK = 4096


def estimate_rows(model: EstimationModel, rgb: np.ndarray) -> np.ndarray:
    """Spectra (P x N) for P x 3 response rows, unclamped"""
    model.require_fitted()
    rgb = np.atleast_2d(np.asarray(rgb, dtype=np.float64))
    if rgb.shape[1] != 3:
        raise ValueError(f"Expected P x 3 responses, got {rgb.shape}")
    return EstimatorCreator.create(model.kind).predict(model, rgb)


def estimate_pixel(model: EstimationModel, rgb) -> Spectrum:
    return Spectrum(model.grid, estimate_rows(model, np.asarray(rgb, dtype=np.float64)[np.newaxis, :])[0])


def estimate_cube(model: EstimationModel, image: RgbImage, threads: int = 1) -> SpectralCube:
    """Estimate every pixel of ``image``; output is identical for any ``threads``"""
    model.require_fitted()
    rows = image.as_rows()
    starts = list(range(0, rows.shape[0], PIXEL_CHUNK))
    estimator = EstimatorCreator.create(model.kind)

    def run(start: int) -> np.ndarray:
        return estimator.predict(model, rows[start:start + PIXEL_CHUNK])

    if threads <= 1 or len(starts) == 1:
        parts: List[np.ndarray] = [run(start) for start in starts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, starts))

    spectra = np.concatenate(parts, axis=0)
    logger.debug(f"Estimated {rows.shape[0]} pixels with {model.kind.value} on {threads} thread(s)")
    return SpectralCube(model.grid, spectra.reshape(image.height, image.width, model.grid.count))
