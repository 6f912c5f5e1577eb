import math

import numpy as np
import pytest

from src.spectral.camera import system_matrix
from src.spectral.core import SpectralCube
from src.spectral.errors import EmptySample
from src.spectral.estimators import FitParams, combo_from_name
from src.spectral.training import (
    CandidateSet,
    MethodSpec,
    candidate_id,
    fraction_label,
    run_search,
    sample_count,
    sample_pixels,
    sample_training,
    score_set,
    search_representative,
    step3_candidates,
    union_candidate,
)
from src.spectral.training.search import image_rmse


def _cube(grid, spectra, height, width, pattern):
    """Cube whose pixel i takes spectrum column pattern[i]"""
    index = np.asarray(pattern).reshape(height, width)
    return SpectralCube(grid, spectra.T[index])


def _candidate(cube, camera, fraction, index=0, seed=0):
    return CandidateSet(
        id=candidate_id(fraction, (index,)),
        training=sample_training(cube, camera, fraction, seed, source_index=index),
        fraction=fraction,
        members=(index,),
    )


@pytest.fixture
def materials(make_reflectances):
    return make_reflectances(6)


@pytest.fixture
def images(grid, materials):
    """A varied image plus four images made of a single material each"""
    varied = _cube(grid, materials, 6, 6, np.arange(36) % 6)
    singles = [_cube(grid, materials, 6, 6, np.full(36, m)) for m in range(4)]
    return [varied] + singles


def test_sample_count():
    assert sample_count(0.05, 100 * 100) == 500
    assert sample_count(0.01, 99) == 0
    assert fraction_label(0.05) == '5%'
    assert fraction_label(0.5) == '50%'


def test_full_fraction_takes_every_pixel(small_scene):
    pixels = sample_pixels(small_scene.cube, 1.0, seed=3)
    assert sorted(pixels) == list(range(small_scene.cube.pixel_count))


def test_sample_size_and_determinism(grid):
    cube = SpectralCube(grid, np.full((100, 100, grid.count), 0.3))
    first = sample_pixels(cube, 0.05, seed=9)
    assert first.size == 500
    assert len(set(first)) == 500
    np.testing.assert_array_equal(first, sample_pixels(cube, 0.05, seed=9))
    assert not np.array_equal(first, sample_pixels(cube, 0.05, seed=10))


def test_sample_errors(constant_cube):
    with pytest.raises(EmptySample):
        sample_pixels(constant_cube, 0.01, seed=0)
    for fraction in (0.0, 1.5):
        with pytest.raises(ValueError):
            sample_pixels(constant_cube, fraction, seed=0)


def test_sample_training_contents(small_scene, camera):
    training = sample_training(small_scene.cube, camera, 0.25, seed=4, source_id='scene')
    pixels = training.sample_keys[:, 1]
    assert training.k == 64
    np.testing.assert_array_equal(training.reflectances, small_scene.cube.as_matrix()[:, pixels])
    np.testing.assert_allclose(training.responses, system_matrix(camera) @ training.reflectances)
    assert training.provenance.source_ids == ('scene',)
    assert training.provenance.fraction == 0.25


def test_method_spec():
    assert str(MethodSpec()) == 'pseudoinverse/R,G,B'
    assert str(MethodSpec('imai_berns', FitParams(combo=combo_from_name('sq6')))) == 'imai_berns/R,G,B,R2,G2,B2'


def test_score_exact_linear_image(grid, camera, make_reflectances, rng):
    basis = make_reflectances(3)
    weights = rng.dirichlet(np.ones(3), size=25).T
    image = SpectralCube.from_matrix(grid, basis @ weights, 5, 5)
    candidate = _candidate(image, camera, 1.0)
    assert score_set(candidate, [image], camera) < 1e-8


def test_score_is_mean_of_image_means(images, camera):
    candidate = _candidate(images[0], camera, 0.5)
    model = MethodSpec().fit(candidate.training, camera)
    per_image = [image_rmse(model, image, camera) for image in images[:3]]
    assert score_set(candidate, images[:3], camera) == pytest.approx(sum(per_image) / 3)
    forward = score_set(candidate, images, camera)
    backward = score_set(candidate, images[::-1], camera)
    assert forward == backward


def test_candidate_ids():
    assert candidate_id(0.05, (0, 2)) == '5%[0,2]'
    assert candidate_id(0.1, (3,)) == '10%[3]'


def test_union_drops_shared_pixels(images, camera):
    half = _candidate(images[0], camera, 0.5)
    full = _candidate(images[0], camera, 1.0)
    union = union_candidate([half, full])
    assert union.k == 36
    assert union.id == '+'.join(sorted([half.id, full.id]))
    assert math.isnan(union.fraction)

    other = _candidate(images[1], camera, 0.5, index=1)
    joined = union_candidate([half, other])
    assert joined.id == '50%[0,1]'
    assert joined.k == half.k + other.k


def test_step3_candidate_count(images, camera):
    ranked = [_candidate(image, camera, 0.5, index=i) for i, image in enumerate(images)]
    assert len(step3_candidates(ranked)) == 31
    assert len(step3_candidates(ranked[:3])) == 7
    assert len(step3_candidates(ranked + ranked[:1])) == 31


def test_single_image_single_fraction(images, camera):
    winner = search_representative(images[:1], camera, fractions=[0.5], seed=2)
    assert winner.id == '50%[0]'
    assert winner.k == 18


def test_search_matches_exhaustive_rescoring(images, camera):
    result = run_search(images, camera, fractions=[0.5, 1.0], seed=1)
    assert len(result.step2) == 5
    assert len(result.step3) == 31

    rescored = sorted(
        (candidate.with_score(score_set(candidate, images, camera)) for candidate in result.step3),
        key=CandidateSet.sort_key,
    )
    assert result.winner.id == rescored[0].id
    assert result.winner.score == rescored[0].score
    assert all(result.winner.score <= candidate.score for candidate in result.step2)
    assert result.step2[0].members == (0,)

    frame = result.to_frame()
    assert list(frame.columns) == ['step', 'id', 'k', 'score', 'winner']
    assert frame['winner'].sum() == 1
    assert frame.loc[frame['winner'], 'id'].item() == result.winner.id


def test_search_ignores_thread_count(images, camera):
    single = run_search(images, camera, fractions=[0.5, 1.0], seed=5, threads=1)
    pooled = run_search(images, camera, fractions=[0.5, 1.0], seed=5, threads=3)
    assert single.winner.id == pooled.winner.id
    assert [c.score for c in single.step3] == [c.score for c in pooled.step3]


def test_search_argument_checks(images, camera):
    with pytest.raises(ValueError):
        run_search([], camera)
    with pytest.raises(ValueError):
        run_search(images, camera, fractions=[])
