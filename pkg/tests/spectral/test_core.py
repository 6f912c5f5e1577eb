import numpy as np
import pytest

from src.spectral.core import (
    DEFAULT_GRID,
    RgbImage,
    SpectralCube,
    Spectrum,
    WavelengthGrid,
    clamp_spectrum,
    grid_for_bands,
    grid_wavelengths,
    load_colorimetry,
    require_same_grid,
    require_same_shape,
    resample,
)
from src.spectral.errors import EmptyTable, GridMismatch, ShapeMismatch


def test_default_grid():
    wl = grid_wavelengths(DEFAULT_GRID)
    assert len(wl) == 31
    assert wl[0] == 420
    assert wl[30] == 720
    assert DEFAULT_GRID.end_nm == 720


def test_small_grid_wavelengths():
    np.testing.assert_array_equal(grid_wavelengths(WavelengthGrid(400, 50, 3)), [400, 450, 500])


@pytest.mark.parametrize("start, step, count", [(0, 10, 31), (420, 0, 31), (420, 10, 1), (420, -5, 4)])
def test_invalid_grid(start, step, count):
    with pytest.raises(ValueError):
        WavelengthGrid(start, step, count)


def test_index_of_and_band_range(grid):
    assert grid.index_of(550) == 13
    with pytest.raises(ValueError):
        grid.index_of(555)
    with pytest.raises(ValueError):
        grid.index_of(730)
    np.testing.assert_array_equal(grid.band_range(500, 530), [8, 9, 10, 11])


def test_grid_for_bands():
    assert grid_for_bands(31) is DEFAULT_GRID
    assert grid_for_bands(5).count == 5
    with pytest.raises(GridMismatch):
        require_same_grid(DEFAULT_GRID, grid_for_bands(5))


def test_resample_constant_and_ramp(grid):
    np.testing.assert_allclose(resample([(420, 1.0), (720, 1.0)], grid), np.ones(31))
    ramp = resample([(420, 0.0), (720, 3.0)], grid)
    assert ramp[grid.index_of(570)] == pytest.approx(1.5)


def test_resample_zero_outside_table():
    out = resample([(500, 2.0), (600, 2.0)], WavelengthGrid(400, 50, 6))
    np.testing.assert_allclose(out, [0.0, 0.0, 2.0, 2.0, 2.0, 0.0])


def test_resample_empty_table(grid):
    with pytest.raises(EmptyTable):
        resample([], grid)


def test_colorimetry_tables(grid, tables):
    assert tables.cmf_y[grid.index_of(550)] == pytest.approx(0.994950, abs=1e-3)
    assert tables.d65[grid.index_of(550)] == pytest.approx(104.046, abs=1e-3)
    assert tables.cmf.shape == (3, 31)
    for vector in (tables.cmf_x, tables.cmf_y, tables.cmf_z, tables.d65):
        assert np.all(vector >= 0)


def test_colorimetry_is_deterministic(grid):
    load_colorimetry.cache_clear()
    first = load_colorimetry(grid)
    load_colorimetry.cache_clear()
    second = load_colorimetry(grid)
    assert first is not second
    np.testing.assert_array_equal(first.cmf, second.cmf)
    np.testing.assert_array_equal(first.d65, second.d65)


def test_spectrum_length_must_match_grid(grid):
    with pytest.raises(GridMismatch):
        Spectrum(grid, np.zeros(30))


def test_spectrum_clamp(grid):
    values = np.linspace(-0.5, 1.5, grid.count)
    spectrum = Spectrum(grid, values)
    assert not spectrum.is_physical()
    clamped = clamp_spectrum(spectrum)
    assert clamped.clamped and clamped.is_physical()
    assert clamped.values.min() == 0.0 and clamped.values.max() == 1.0
    np.testing.assert_array_equal(spectrum.values, values)


def test_spectrum_is_immutable(grid):
    spectrum = Spectrum.constant(grid, 0.3)
    with pytest.raises(ValueError):
        spectrum.values[0] = 1.0


def test_cube_pixel_round_trip(rng, grid):
    cube = SpectralCube(grid, rng.uniform(size=(3, 4, grid.count)))
    for y in range(cube.height):
        for x in range(cube.width):
            again = cube.with_pixel(y, x, cube.pixel(y, x))
            np.testing.assert_array_equal(again.samples, cube.samples)


def test_cube_matrix_layout(rng, grid):
    cube = SpectralCube(grid, rng.uniform(size=(2, 3, grid.count)))
    matrix = cube.as_matrix()
    assert matrix.shape == (31, 6)
    np.testing.assert_array_equal(matrix[:, 4], cube.samples[1, 1])
    again = SpectralCube.from_matrix(grid, matrix, 2, 3)
    np.testing.assert_array_equal(again.samples, cube.samples)
    assert cube.pixel_count == 6 and cube.shape == (2, 3)


def test_cube_band_mismatch(grid):
    with pytest.raises(GridMismatch):
        SpectralCube(grid, np.zeros((2, 2, 30)))


def test_rgb_image_range():
    image = RgbImage(np.full((2, 2, 3), 0.25))
    assert image.as_rows().shape == (4, 3)
    with pytest.raises(ValueError):
        RgbImage(np.full((2, 2, 3), 1.5))
    with pytest.raises(ValueError):
        RgbImage(np.zeros((2, 2, 4)))


def test_require_same_shape(grid, constant_cube):
    other = SpectralCube(grid, np.zeros((5, 4, grid.count)))
    with pytest.raises(ShapeMismatch):
        require_same_shape(constant_cube, other)
