from dataclasses import dataclass, field
import math
from typing import NamedTuple, Optional

import numpy as np
from scipy import ndimage

from src.framework.logging import get_logger
from src.spectral.core import DEFAULT_GRID, SpectralCube, WavelengthGrid
from . import rng as streams

logger = get_logger(__name__)

# red ramp: logistic edge centre and width, nm
RED_EDGE_NM = 590.0
RED_EDGE_WIDTH_NM = 20.0
# highlight peaks
SPIKE_SIGMA_NM = 8.0
MIN_REFLECTANCE = 0.02


@dataclass(frozen=True)
class SceneRecipe:
    """Parameters of a synthetic spectral scene"""
    height: int = 64
    width: int = 64
    grid: WavelengthGrid = field(default_factory=lambda: DEFAULT_GRID)
    n_materials: int = 6
    smoothness_sigma_nm: float = 40.0
    highlight_fraction: float = 0.03
    highlight_gain: float = 3.0
    red_bias: float = 0.35
    jitter: float = 0.01
    seed: int = 0
    field_sigma_px: Optional[float] = None

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise ValueError(f"Scene size must be positive, got {self.height}x{self.width}")
        if self.n_materials < 1:
            raise ValueError(f"n_materials must be >= 1, got {self.n_materials}")
        scalars = (self.smoothness_sigma_nm, self.highlight_fraction, self.highlight_gain, self.red_bias, self.jitter)
        if not all(math.isfinite(value) for value in scalars):
            raise ValueError("Scene recipe scalars must be finite")
        if self.smoothness_sigma_nm <= 0:
            raise ValueError(f"smoothness_sigma_nm must be positive, got {self.smoothness_sigma_nm}")
        if not 0.0 <= self.highlight_fraction < 1.0:
            raise ValueError(f"highlight_fraction must lie in [0, 1), got {self.highlight_fraction}")
        if self.highlight_gain <= 1.0:
            raise ValueError(f"highlight_gain must exceed 1, got {self.highlight_gain}")
        if self.red_bias < 0 or self.jitter < 0:
            raise ValueError("red_bias and jitter must be non-negative")

    @property
    def pixel_count(self) -> int:
        return self.height * self.width

    @property
    def highlight_count(self) -> int:
        return int(math.floor(self.highlight_fraction * self.pixel_count + 0.5))

    @property
    def spatial_sigma(self) -> float:
        if self.field_sigma_px is not None:
            return self.field_sigma_px
        return max(1.0, min(self.height, self.width) / 8.0)


class GeneratedScene(NamedTuple):
    cube: SpectralCube
    highlights: np.ndarray


def _bumps(rng: np.random.Generator, wl: np.ndarray, count: int, sigma_nm: float, low: float, high: float) -> np.ndarray:
    centres = rng.uniform(wl[0], wl[-1], size=count)
    widths = sigma_nm * rng.uniform(0.5, 1.5, size=count)
    amplitudes = rng.uniform(low, high, size=count)
    return np.sum(amplitudes[:, None] * np.exp(-0.5 * ((wl[None, :] - centres[:, None]) / widths[:, None]) ** 2), axis=0)


def material_library(recipe: SceneRecipe) -> np.ndarray:
    """n_materials x N reflectance curves: Gaussian mixtures over a rising red edge"""
    rng = streams.philox(recipe.seed, streams.MATERIALS)
    wl = recipe.grid.wavelengths()
    red_ramp = recipe.red_bias / (1.0 + np.exp(-(wl - RED_EDGE_NM) / RED_EDGE_WIDTH_NM))
    materials = np.empty((recipe.n_materials, recipe.grid.count))
    for index in range(recipe.n_materials):
        base = rng.uniform(0.05, 0.2)
        count = int(rng.integers(1, 4))
        materials[index] = base + red_ramp + _bumps(rng, wl, count, recipe.smoothness_sigma_nm, 0.05, 0.25)
    return np.clip(materials, MIN_REFLECTANCE, 1.0)


def _material_field(recipe: SceneRecipe) -> np.ndarray:
    if recipe.n_materials == 1:
        return np.zeros((recipe.height, recipe.width), dtype=np.int64)
    rng = streams.philox(recipe.seed, streams.MATERIAL_FIELD)
    noise = rng.standard_normal((recipe.n_materials, recipe.height, recipe.width))
    sigma = recipe.spatial_sigma
    smooth = ndimage.gaussian_filter(noise, sigma=(0.0, sigma, sigma), mode='wrap')
    return np.argmax(smooth, axis=0)


def _add_highlights(recipe: SceneRecipe, samples: np.ndarray) -> np.ndarray:
    mask = np.zeros(recipe.pixel_count, dtype=bool)
    count = recipe.highlight_count
    if count == 0:
        return mask.reshape(recipe.height, recipe.width)

    positions = streams.philox(recipe.seed, streams.HIGHLIGHT_POSITIONS).choice(
        recipe.pixel_count, size=count, replace=False
    )
    mask[positions] = True
    shapes = streams.philox(recipe.seed, streams.HIGHLIGHT_SHAPES)
    wl = recipe.grid.wavelengths()
    flat = samples.reshape(recipe.pixel_count, recipe.grid.count)
    for position in positions:
        peaks = int(shapes.integers(2, 5))
        spikes = _bumps(shapes, wl, peaks, SPIKE_SIGMA_NM, 0.15, 0.3)
        flat[position] = np.minimum(flat[position] + recipe.highlight_gain * spikes, 1.0)
    return mask.reshape(recipe.height, recipe.width)


def generate_scene(recipe: SceneRecipe = SceneRecipe()) -> GeneratedScene:
    """Spectral cube plus its ground-truth highlight mask; deterministic in ``recipe.seed``"""
    materials = material_library(recipe)
    index = _material_field(recipe)
    samples = materials[index]

    if recipe.jitter > 0:
        jitter = streams.philox(recipe.seed, streams.JITTER).normal(0.0, recipe.jitter, samples.shape)
        samples = np.clip(samples + jitter, 0.0, 1.0)

    highlights = _add_highlights(recipe, samples)
    logger.debug(
        f"Generated {recipe.height}x{recipe.width} scene: {recipe.n_materials} materials, "
        f"{int(highlights.sum())} highlight pixels, seed {recipe.seed}"
    )
    return GeneratedScene(SpectralCube(recipe.grid, samples), highlights)
