import time

import numpy as np
import pytest

from src.spectral.camera import CameraSpec, NoiseModel, simulate_responses, system_matrix
from src.spectral.core import RgbImage, WavelengthGrid, grid_for_bands
from src.spectral.errors import (
    BadBasisCount,
    ConfigError,
    EmptyTrainingSet,
    ModelNotFitted,
    PriorKnowledgeMissing,
    SingularSystem,
)
from src.spectral.estimators import (
    EstimationModel,
    EstimatorKind,
    FitInputs,
    FitParams,
    ShiHealeyBank,
    TrainingSet,
    combo_from_name,
    estimate_cube,
    estimate_pixel,
    estimate_rows,
    estimate_shi_healey_detailed,
    estimate_shi_healey_rows,
    expand_polynomial,
    expand_responses,
    fit_imai_berns,
    fit_linear,
    fit_model,
    fit_pseudoinverse,
    fit_shi_healey,
    fit_wiener_data,
    fit_wiener_prior,
    linear_reconstruction,
    merge_training_sets,
    pca_basis,
    requirements,
    training_rmse,
)
from src.spectral.estimators.training_set import Provenance
from src.spectral.io import write_cube
from tests.conftest import smooth_reflectances


def _in_span(rng, make_reflectances, dims, k):
    """k reflectances lying exactly in the span of ``dims`` smooth curves"""
    return make_reflectances(dims) @ rng.uniform(0.1, 1.0, size=(dims, k))


# kinds and requirements

def test_kind_parsing():
    assert EstimatorKind.parse('wiener') == EstimatorKind.WIENER_DATA
    assert EstimatorKind.parse('wiener', prior=True) == EstimatorKind.WIENER_PRIOR
    assert EstimatorKind.parse('wiener_data', prior=True) == EstimatorKind.WIENER_DATA
    assert EstimatorKind.parse('Imai-Berns') == EstimatorKind.IMAI_BERNS
    assert EstimatorKind.from_code(EstimatorKind.SHI_HEALEY.code) == EstimatorKind.SHI_HEALEY
    with pytest.raises(ValueError):
        EstimatorKind.parse('kriging')


def test_requirements_table():
    assert requirements('wiener_prior') == ('Sensitivities', 'Illumination', 'Reflectance')
    assert requirements('pseudoinverse') == ('Reflectance', 'RGB Values')
    assert requirements('shi_healey') == ('Sensitivities', 'Illumination', 'Reflectance')


def test_missing_camera_is_reported(training):
    with pytest.raises(PriorKnowledgeMissing) as excinfo:
        fit_model('linear', FitInputs(training=training))
    assert excinfo.value.missing == ['Sensitivities', 'Illumination']
    assert "Method 'linear' requires Sensitivities, Illumination" in str(excinfo.value)
    assert isinstance(excinfo.value, ConfigError)


def test_missing_training_is_reported(camera):
    with pytest.raises(PriorKnowledgeMissing) as excinfo:
        fit_model('wiener_data', FitInputs(camera=camera))
    assert excinfo.value.missing == ['Reflectance', 'RGB Values']


def test_combo_rejected_for_camera_methods(training, camera):
    params = FitParams(combo=combo_from_name('sq6'))
    for kind in ('wiener_prior', 'linear', 'shi_healey'):
        with pytest.raises(PriorKnowledgeMissing):
            fit_model(kind, FitInputs(training, camera), params)


def test_unfitted_model():
    model = EstimationModel(EstimatorKind.PSEUDOINVERSE, grid_for_bands(31))
    assert not model.is_fitted
    with pytest.raises(ModelNotFitted):
        estimate_pixel(model, [0.5, 0.5, 0.5])


def test_empty_training_set(grid):
    with pytest.raises(EmptyTrainingSet):
        TrainingSet(grid, np.zeros((grid.count, 0)), np.zeros((3, 0)))


def test_merge_drops_repeated_pixels(grid, make_reflectances, camera):
    reflectances = make_reflectances(4)
    responses = simulate_responses(reflectances, camera)
    provenance = Provenance(source_ids=('a',))
    first = TrainingSet(grid, reflectances[:, :3], responses[:, :3], provenance, [[0, 0], [0, 1], [0, 2]])
    second = TrainingSet(grid, reflectances[:, 1:], responses[:, 1:], provenance, [[0, 1], [0, 2], [0, 3]])
    merged = merge_training_sets([first, second])
    assert merged.k == 4
    np.testing.assert_array_equal(merged.reflectances, reflectances)


# Wiener

def test_wiener_prior_identity_case():
    grid = WavelengthGrid(400, 100, 4)
    camera = CameraSpec(grid, np.eye(4)[:3], np.ones(4), white_scale=np.ones(3))
    model = fit_wiener_prior(2.0 * np.eye(4), camera)
    np.testing.assert_allclose(model.W, system_matrix(camera).T, atol=1e-12)


def test_wiener_prior_matches_dense_oracle(training, camera):
    noise = 1e-4 * np.eye(3)
    model = fit_wiener_prior(training.reflectances, camera, noise)
    r = training.reflectances
    n, k = r.shape
    r_ss = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            r_ss[i, j] = sum(r[i, c] * r[j, c] for c in range(k)) / k
    q = system_matrix(camera)
    expected = r_ss @ q.T @ np.linalg.inv(q @ r_ss @ q.T + noise)
    np.testing.assert_allclose(model.W, expected, atol=1e-8)


def test_wiener_prior_reproduces_responses(rng, camera):
    q = system_matrix(camera)
    reflectances = q.T @ rng.uniform(size=(3, 20))
    model = fit_wiener_prior(reflectances, camera)
    rho = rng.uniform(size=3)
    np.testing.assert_allclose(q @ model.W @ rho, rho, atol=1e-8)


def test_wiener_prior_uses_camera_noise(training, camera):
    noisy = camera.with_noise(NoiseModel.gaussian((0.05, 0.05, 0.05)))
    plain = fit_wiener_prior(training.reflectances, camera)
    regularised = fit_wiener_prior(training.reflectances, noisy)
    assert not np.allclose(plain.W, regularised.W)


def test_wiener_prior_singular(grid, camera):
    with pytest.raises(SingularSystem):
        fit_wiener_prior(np.zeros((grid.count, 5)), camera)
    model = fit_wiener_prior(np.zeros((grid.count, 5)), camera, np.eye(3))
    np.testing.assert_array_equal(model.W, 0.0)


def test_wiener_data_identity_responses(make_reflectances):
    reflectances = make_reflectances(3)
    model = fit_wiener_data(reflectances, np.eye(3))
    np.testing.assert_allclose(model.W, reflectances, atol=1e-12)


@pytest.mark.parametrize("combo", ['linear3', 'cross6', 'sq6'])
def test_wiener_data_equals_pseudoinverse(training, combo):
    combo = combo_from_name(combo)
    wiener = fit_wiener_data(training.reflectances, training.responses, combo)
    pinv_model = fit_pseudoinverse(training.reflectances, training.responses, combo)
    np.testing.assert_allclose(wiener.W, pinv_model.W, atol=1e-8)


@pytest.mark.parametrize("seed", range(20))
def test_wiener_data_equals_pseudoinverse_on_random_sets(grid, camera, seed):
    reflectances = smooth_reflectances(np.random.default_rng(seed), grid, 1000)
    responses = simulate_responses(reflectances, camera)
    wiener = fit_wiener_data(reflectances, responses)
    pinv_model = fit_pseudoinverse(reflectances, responses)
    np.testing.assert_allclose(wiener.W, pinv_model.W, rtol=0, atol=1e-8)


def test_wiener_data_recovers_linear_model(rng, training):
    combo = combo_from_name('sq6')
    g = rng.uniform(-1.0, 1.0, size=(training.grid.count, combo.size))
    reflectances = g @ expand_responses(training.responses, combo)
    model = fit_wiener_data(reflectances, training.responses, combo)
    np.testing.assert_allclose(model.W, g, atol=1e-8)


def test_wiener_data_rank_deficient(make_reflectances):
    responses = np.tile([[0.2], [0.4], [0.6]], (1, 10))
    with pytest.raises(SingularSystem):
        fit_wiener_data(make_reflectances(10), responses)


# pseudoinverse

def test_pseudoinverse_identity_responses(make_reflectances):
    reflectances = make_reflectances(3)
    model = fit_pseudoinverse(reflectances, np.eye(3))
    np.testing.assert_allclose(model.W, reflectances, atol=1e-12)
    np.testing.assert_allclose(estimate_pixel(model, [1.0, 0.0, 0.0]).values, reflectances[:, 0], atol=1e-12)


def test_pseudoinverse_exact_model(rng, training):
    combo = combo_from_name('sq6')
    g = rng.uniform(-1.0, 1.0, size=(training.grid.count, combo.size))
    reflectances = g @ expand_responses(training.responses, combo)
    model = fit_pseudoinverse(reflectances, training.responses, combo)
    assert training_rmse(model, reflectances, training.responses) < 1e-10


def test_pseudoinverse_single_sample(make_reflectances):
    r0 = make_reflectances(1)
    rho = np.array([[1.0], [0.0], [0.0]])
    model = fit_pseudoinverse(r0, rho)
    np.testing.assert_allclose(model.W, r0 @ rho.T / np.sum(rho ** 2), atol=1e-14)
    np.testing.assert_allclose(model.W @ rho[:, 0], r0[:, 0], atol=1e-14)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("chain", [('linear3', 'sq6', 'full12'), ('linear3', 'cross6', 'full12')])
def test_nested_combos_do_not_worsen_fit(grid, camera, chain, seed):
    reflectances = smooth_reflectances(np.random.default_rng(seed), grid, 400)
    responses = simulate_responses(reflectances, camera)
    errors = []
    for name in chain:
        model = fit_pseudoinverse(reflectances, responses, combo_from_name(name))
        errors.append(training_rmse(model, reflectances, responses))
    assert errors[1] <= errors[0] + 1e-12
    assert errors[2] <= errors[1] + 1e-12


# linear model

def test_linear_exact_recovery(rng, camera, make_reflectances):
    reflectances = _in_span(rng, make_reflectances, 3, 30)
    model = fit_linear(reflectances, camera, 3)
    estimates = estimate_rows(model, simulate_responses(reflectances, camera).T)
    np.testing.assert_allclose(estimates.T, reflectances, atol=1e-8)


def test_linear_single_basis_vector(rng, camera, make_reflectances):
    v = make_reflectances(1)
    reflectances = v * rng.uniform(0.2, 1.0, size=(1, 6))
    model = fit_linear(reflectances, camera, 1)
    assert model.lam.shape == (3, 1)
    target = 0.7 * v[:, 0]
    rho = system_matrix(camera) @ target
    np.testing.assert_allclose(estimate_pixel(model, rho).values, target, atol=1e-8)


def test_linear_reproduces_responses(rng, training, camera):
    model = fit_linear(training.reflectances, camera, 3)
    rho = rng.uniform(size=3)
    np.testing.assert_allclose(system_matrix(camera) @ estimate_pixel(model, rho).values, rho, atol=1e-10)
    np.testing.assert_allclose(system_matrix(camera) @ linear_reconstruction(model), np.eye(3), atol=1e-10)


# Imai-Berns

def test_imai_berns_weights_as_responses(training):
    basis = pca_basis(training.reflectances, 3)
    weights = basis.T @ training.reflectances
    model = fit_imai_berns(training.reflectances, weights, 3)
    np.testing.assert_allclose(model.D, np.eye(3), atol=1e-10)


def test_imai_berns_exact_linear_model(rng, make_reflectances):
    reflectances = _in_span(rng, make_reflectances, 3, 40)
    weights = pca_basis(reflectances, 3).T @ reflectances
    mixing = np.array([[1.0, 0.2, 0.1], [0.3, 1.0, 0.2], [0.1, 0.4, 1.0]])
    responses = mixing @ weights
    model = fit_imai_berns(reflectances, responses, 3)
    estimates = estimate_rows(model, responses.T).T
    assert np.sqrt(np.mean((estimates - reflectances) ** 2)) < 1e-8


def test_imai_berns_complete_basis_matches_pseudoinverse(rng):
    grid = grid_for_bands(3)
    reflectances = rng.uniform(size=(3, 3))
    responses = rng.uniform(size=(3, 3)) + np.eye(3)
    imai = fit_imai_berns(reflectances, responses, 3, grid=grid)
    pinv_model = fit_pseudoinverse(reflectances, responses, grid=grid)
    rho = rng.uniform(size=(5, 3))
    np.testing.assert_allclose(estimate_rows(imai, rho), estimate_rows(pinv_model, rho), atol=1e-8)


# Shi-Healey

def test_shi_healey_recovers_bank_member(rng, camera, make_reflectances):
    reflectances = _in_span(rng, make_reflectances, 5, 20)
    model = fit_shi_healey(reflectances, camera, d=5)
    j = 7
    rho = system_matrix(camera) @ reflectances[:, j]
    result = estimate_shi_healey_detailed(rho, model)
    assert result.index == j
    assert result.d == 5
    assert np.linalg.norm(result.spectrum.values - reflectances[:, j]) < 1e-6


def test_shi_healey_reproduces_responses(rng, training, camera):
    model = fit_shi_healey(training.reflectances, camera, d=6)
    rhos = rng.uniform(0.05, 0.95, size=(25, 3))
    estimates = estimate_rows(model, rhos)
    residual = estimates @ system_matrix(camera).T - rhos
    assert np.max(np.abs(residual)) < 1e-8


def test_shi_healey_single_spectrum_bank(rng, training, camera, make_reflectances):
    r = make_reflectances(1)
    basis = pca_basis(training.reflectances, 5)
    q = system_matrix(camera)
    bank = ShiHealeyBank(reflectances=r, basis=basis, Q=q, d=5)
    model = EstimationModel(EstimatorKind.SHI_HEALEY, camera.grid, bank=bank)
    rho = np.array([0.3, 0.5, 0.2])

    v1, v2 = basis[:, :2], basis[:, 2:5]
    g = np.linalg.inv(q @ v2)
    c = v2 @ g @ rho
    a = v1 - v2 @ g @ q @ v1
    omega1, *_ = np.linalg.lstsq(a, r[:, 0] - c, rcond=None)
    expected = c + a @ omega1

    result = estimate_shi_healey_detailed(rho, model)
    assert result.index == 0
    np.testing.assert_allclose(result.spectrum.values, expected, atol=1e-10)


def test_shi_healey_basis_search(rng, training, camera):
    model = fit_shi_healey(training.reflectances, camera, d=5, search_basis=True, d_range=(4, 8))
    assert model.bank.candidate_counts() == (4, 5, 6, 7, 8)
    assert model.summary()['d_range'] == '4-8'
    rhos = rng.uniform(0.05, 0.95, size=(10, 3))
    _, _, chosen, searched_error = estimate_shi_healey_rows(rhos, model)
    assert set(chosen) <= {4, 5, 6, 7, 8}
    fixed = fit_shi_healey(training.reflectances, camera, d=5)
    _, _, _, fixed_error = estimate_shi_healey_rows(rhos, fixed)
    assert np.all(searched_error <= fixed_error + 1e-12)


def test_shi_healey_needs_more_basis_than_channels(training, camera):
    with pytest.raises(BadBasisCount):
        fit_shi_healey(training.reflectances, camera, d=3)


def test_shi_healey_empty_bank(camera):
    with pytest.raises(EmptyTrainingSet):
        fit_shi_healey(np.zeros((camera.grid.count, 0)), camera)


# dispatch

@pytest.mark.parametrize("kind, combo", [
    ('wiener_data', 'sq6'),
    ('pseudoinverse', 'full12'),
    ('imai_berns', 'cross6'),
])
def test_regression_predictions_match_loop_oracle(rng, training, camera, kind, combo):
    combo = combo_from_name(combo)
    model = fit_model(kind, FitInputs(training, camera), FitParams(combo=combo, basis_count=5))
    weights = model.W if model.W is not None else model.V @ model.D
    rhos = rng.uniform(size=(100, 3))
    for rho in rhos:
        features = [np.prod([rho[c] ** e for c, e in enumerate(term)]) for term in combo.terms]
        expected = [sum(weights[n, t] * features[t] for t in range(combo.size)) for n in range(weights.shape[0])]
        np.testing.assert_allclose(estimate_pixel(model, rho).values, expected, atol=1e-10)


@pytest.mark.parametrize("kind", list(EstimatorKind))
def test_every_kind_fits_and_estimates(rng, training, camera, kind):
    model = fit_model(kind, FitInputs(training, camera), FitParams(basis_count=5 if kind == 'shi_healey' else 3))
    assert model.is_fitted
    assert model.summary()['kind'] == kind.value
    spectrum = estimate_pixel(model, rng.uniform(size=3))
    assert spectrum.values.shape == (training.grid.count,)
    assert not spectrum.clamped


def test_estimate_cube_matches_pixels(rng, training):
    model = fit_pseudoinverse(training.reflectances, training.responses, combo_from_name('sq6'), training.grid)
    image = RgbImage(rng.uniform(size=(16, 16, 3)))
    cube = estimate_cube(model, image)
    for y in range(16):
        for x in range(16):
            np.testing.assert_allclose(cube.samples[y, x], estimate_pixel(model, image.values[y, x]).values, atol=1e-12)


def test_estimate_cube_single_and_constant(training):
    model = fit_pseudoinverse(training.reflectances, training.responses, grid=training.grid)
    single = estimate_cube(model, RgbImage(np.full((1, 1, 3), 0.4)))
    np.testing.assert_allclose(single.samples[0, 0], estimate_pixel(model, [0.4, 0.4, 0.4]).values)
    constant = estimate_cube(model, RgbImage(np.full((3, 5, 3), 0.4)))
    assert np.all(constant.samples == constant.samples[0, 0])


def test_estimate_cube_ignores_thread_count(rng, training, camera):
    model = fit_shi_healey(training.reflectances, camera, d=5)
    image = RgbImage(rng.uniform(size=(70, 70, 3)))
    single = estimate_cube(model, image, threads=1)
    pooled = estimate_cube(model, image, threads=3)
    np.testing.assert_array_equal(single.samples, pooled.samples)


@pytest.mark.parametrize("kind", ['shi_healey', 'linear', 'pseudoinverse'])
def test_written_cube_is_identical_for_any_thread_count(rng, training, camera, tmp_path, kind):
    model = fit_model(kind, FitInputs(training, camera))
    image = RgbImage(rng.uniform(size=(70, 70, 3)))
    for threads in (1, 4):
        write_cube(tmp_path / f'threads{threads}.spc', estimate_cube(model, image, threads=threads))
    assert (tmp_path / 'threads1.spc').read_bytes() == (tmp_path / 'threads4.spc').read_bytes()


@pytest.mark.slow
def test_pseudoinverse_is_much_faster_than_shi_healey(grid, camera):
    bank = smooth_reflectances(np.random.default_rng(0), grid, 1000)
    responses = simulate_responses(bank, camera)
    image = RgbImage(np.random.default_rng(1).uniform(0.05, 0.95, size=(100, 100, 3)))

    def seconds_per_pixel(model):
        estimate_cube(model, RgbImage(image.values[:2, :2]))
        start = time.perf_counter()
        estimate_cube(model, image)
        return (time.perf_counter() - start) / (100 * 100)

    pinv_model = fit_pseudoinverse(bank, responses, combo_from_name('sq6'), grid)
    shi_healey = fit_shi_healey(bank, camera)
    assert seconds_per_pixel(shi_healey) >= 10 * seconds_per_pixel(pinv_model)


def test_fits_are_deterministic(training, camera):
    first = fit_model('imai_berns', FitInputs(training), FitParams(combo=combo_from_name('sq6'), basis_count=4))
    second = fit_model('imai_berns', FitInputs(training), FitParams(combo=combo_from_name('sq6'), basis_count=4))
    np.testing.assert_array_equal(first.D, second.D)
    np.testing.assert_array_equal(first.V, second.V)


def test_expand_polynomial_accepts_rows(rng):
    rows = rng.uniform(size=(4, 3))
    assert expand_polynomial(rows, combo_from_name('cross9')).shape == (4, 9)
