import math
from typing import Optional

import numpy as np

from src.framework.logging import get_logger
from src.spectral.camera import CameraSpec, simulate_responses
from src.spectral.core import SpectralCube, require_same_grid
from src.spectral.errors import EmptySample
from src.spectral.estimators import Provenance, TrainingSet

logger = get_logger(__name__)

DEFAULT_FRACTIONS = (0.01, 0.05, 0.10, 0.20, 0.50)


def sample_count(fraction: float, pixel_count: int) -> int:
    # tolerance keeps 0.05 * 100 * 100 at 500 rather than 499
    return int(math.floor(fraction * pixel_count + 1e-9))


def fraction_label(fraction: float) -> str:
    return f"{fraction * 100:g}%"


def sample_rng(seed: int, source_index: int, fraction: float) -> np.random.Generator:
    """Philox stream keyed by (seed, source image, fraction)"""
    sequence = np.random.SeedSequence(seed, spawn_key=(source_index, int(round(fraction * 1e6))))
    return np.random.Generator(np.random.Philox(sequence))


def sample_pixels(cube: SpectralCube, fraction: float, seed: int, source_index: int = 0) -> np.ndarray:
    """Distinct row-major pixel indices, in draw order"""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"Sampling fraction must lie in (0, 1], got {fraction}")
    count = sample_count(fraction, cube.pixel_count)
    if count < 1:
        raise EmptySample(
            f"Fraction {fraction} of {cube.pixel_count} pixels selects nothing"
        )
    rng = sample_rng(seed, source_index, fraction)
    return rng.choice(cube.pixel_count, size=count, replace=False)


def sample_training(
    cube: SpectralCube,
    camera: CameraSpec,
    fraction: float,
    seed: int,
    source_index: int = 0,
    source_id: Optional[str] = None,
) -> TrainingSet:
    """Random pixels of ``cube`` with their noise-free camera responses"""
    require_same_grid(cube.grid, camera.grid)
    pixels = sample_pixels(cube, fraction, seed, source_index)
    reflectances = cube.as_matrix()[:, pixels]
    responses = simulate_responses(reflectances, camera.noiseless())
    source_id = source_id or f"image{source_index}"
    logger.debug(f"Sampled {pixels.size} pixels ({fraction_label(fraction)}) from {source_id}")
    return TrainingSet(
        grid=cube.grid,
        reflectances=reflectances,
        responses=responses,
        provenance=Provenance(source_ids=(source_id,), fraction=fraction, seed=seed),
        sample_keys=np.column_stack([np.zeros_like(pixels), pixels]),
    )
