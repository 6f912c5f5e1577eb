import numpy as np
import pytest

from src.spectral.camera import colorimetric_camera, gaussian_camera, simulate_responses
from src.spectral.core import DEFAULT_GRID, SpectralCube, load_colorimetry
from src.spectral.datagen import SceneRecipe, generate_scene
from src.spectral.estimators import TrainingSet


@pytest.fixture
def grid():
    return DEFAULT_GRID


@pytest.fixture
def tables(grid):
    return load_colorimetry(grid)


@pytest.fixture
def camera(grid):
    return gaussian_camera(grid)


@pytest.fixture
def cie_camera(grid):
    return colorimetric_camera(grid)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def smooth_reflectances(rng, grid, k, n_bumps=3):
    """k random smooth reflectances in (0, 1), one per column"""
    wl = grid.wavelengths()
    curves = np.full((grid.count, k), 0.1)
    for _ in range(n_bumps):
        centres = rng.uniform(wl[0], wl[-1], size=k)
        widths = rng.uniform(30.0, 80.0, size=k)
        heights = rng.uniform(0.05, 0.3, size=k)
        curves += heights * np.exp(-0.5 * ((wl[:, None] - centres) / widths) ** 2)
    return np.clip(curves, 0.0, 1.0)


@pytest.fixture
def make_reflectances(rng, grid):
    return lambda k, n_bumps=3: smooth_reflectances(rng, grid, k, n_bumps)


@pytest.fixture
def training(rng, grid, camera):
    reflectances = smooth_reflectances(rng, grid, 400)
    return TrainingSet(grid, reflectances, simulate_responses(reflectances, camera))


@pytest.fixture
def small_scene():
    return generate_scene(SceneRecipe(height=16, width=16, seed=3))


@pytest.fixture
def constant_cube(grid):
    return SpectralCube(grid, np.full((4, 5, grid.count), 0.5))
