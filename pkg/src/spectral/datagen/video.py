from typing import Iterator, List

import numpy as np

from src.spectral.core import SpectralCube
from .scene import SceneRecipe, generate_scene


def frame_offset(t: int, drift_px_per_frame: float) -> int:
    """Horizontal shift of frame t, rounded half away from zero"""
    shift = t * drift_px_per_frame
    return int(np.sign(shift) * np.floor(abs(shift) + 0.5))


def roll_frame(cube: SpectralCube, shift: int) -> SpectralCube:
    if shift % cube.width == 0:
        return cube
    return SpectralCube(cube.grid, np.roll(cube.samples, shift, axis=1))


def roll_mask(mask: np.ndarray, shift: int) -> np.ndarray:
    return np.roll(mask, shift, axis=1)


def iter_video(base: SpectralCube, n_frames: int, drift_px_per_frame: float) -> Iterator[SpectralCube]:
    """Frames of ``base`` translated horizontally with wrap-around"""
    if n_frames < 1:
        raise ValueError(f"n_frames must be >= 1, got {n_frames}")
    for t in range(n_frames):
        yield roll_frame(base, frame_offset(t, drift_px_per_frame))


def generate_video(recipe: SceneRecipe, n_frames: int, drift_px_per_frame: float) -> List[SpectralCube]:
    base = generate_scene(recipe).cube
    return list(iter_video(base, n_frames, drift_px_per_frame))
