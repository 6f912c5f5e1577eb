from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from scripts.cli import cli
from src.framework.data import ResultsCollector
from src.spectral.core import DEFAULT_GRID, SpectralCube
from src.spectral.estimators import EstimatorKind
from src.spectral.io import (
    parse_report,
    read_cube,
    read_map,
    read_model,
    read_ppm_raw,
    read_spectral_header,
    read_training_set,
    write_cube,
)

CONFIG = Path(__file__).resolve().parent.parent / 'config' / 'spectracast.yaml'


@pytest.fixture
def runner(tmp_path, monkeypatch):
    # no config/spectracast.yaml in the working directory
    monkeypatch.chdir(tmp_path)
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, ['--log-level', 'ERROR', *map(str, args)])


def test_datagen_is_deterministic(runner, tmp_path):
    for name in ('a', 'b'):
        result = invoke(runner, 'datagen', '--out', tmp_path / name, '--seed', 4, '--size', '16x12')
        assert result.exit_code == 0, result.output
    first, second = tmp_path / 'a', tmp_path / 'b'
    assert (first / 'scene.spc').read_bytes() == (second / 'scene.spc').read_bytes()
    assert (first / 'scene.ppm').read_bytes() == (second / 'scene.ppm').read_bytes()
    cube = read_cube(first / 'scene.spc')
    assert cube.shape == (12, 16)
    assert read_map(first / 'mask.spc').shape == (12, 16)
    summary = parse_report((first / 'datagen.txt').read_text())
    assert summary['width'] == '16'
    assert summary['seed'] == '4'


def test_datagen_rejects_bad_size(runner, tmp_path):
    result = invoke(runner, 'datagen', '--out', tmp_path / 'out', '--size', 'sixteen')
    assert result.exit_code == 2


def test_band_view(runner, tmp_path):
    samples = np.zeros((3, 4, DEFAULT_GRID.count))
    samples[:, :, DEFAULT_GRID.index_of(550)] = 0.5
    write_cube(tmp_path / 'cube.spc', SpectralCube(DEFAULT_GRID, samples))
    result = invoke(runner, 'band-view', '--cube', tmp_path / 'cube.spc', '--wavelength', 550, '--out', tmp_path / 'b.ppm')
    assert result.exit_code == 0, result.output
    np.testing.assert_array_equal(read_ppm_raw(tmp_path / 'b.ppm'), 128)

    both = invoke(runner, 'band-view', '--cube', tmp_path / 'cube.spc', '--wavelength', 550, '--band', 3,
                  '--out', tmp_path / 'c.ppm')
    assert both.exit_code == 2
    off_grid = invoke(runner, 'band-view', '--cube', tmp_path / 'cube.spc', '--wavelength', 555,
                      '--out', tmp_path / 'd.ppm')
    assert off_grid.exit_code == 2


def test_evaluate_truth_against_itself(runner, tmp_path):
    invoke(runner, 'datagen', '--out', tmp_path / 'data', '--seed', 2, '--size', '8x8')
    scene = tmp_path / 'data' / 'scene.spc'
    result = invoke(runner, 'evaluate', '--truth', scene, '--estimate', scene, '--out', tmp_path / 'm.txt')
    assert result.exit_code == 0, result.output
    values = parse_report((tmp_path / 'm.txt').read_text())
    assert values['mean_rmse'] == '0'
    assert float(values['mean_gfc']) == pytest.approx(1.0)
    assert values['mean_delta_e'] == '0'


def test_fit_without_prior_knowledge_is_a_usage_error(runner, tmp_path):
    result = invoke(runner, 'fit', '--method', 'linear', '--out', tmp_path / 'm.spem')
    assert result.exit_code == 2
    assert 'requires' in result.output


def test_fit_bare_wiener_picks_the_form_from_the_inputs(runner, tmp_path):
    invoke(runner, 'datagen', '--out', tmp_path / 'data', '--seed', 5, '--size', '8x8')
    train = tmp_path / 'train.spts'
    sampled = invoke(runner, 'sample', '--cube', tmp_path / 'data' / 'scene.spc', '--fraction', 0.5, '--out', train)
    assert sampled.exit_code == 0, sampled.output

    prior = invoke(runner, 'fit', '--method', 'wiener', '--train', train, '--camera', 'colorimetric',
                   '--out', tmp_path / 'prior.spem')
    assert prior.exit_code == 0, prior.output
    assert read_model(tmp_path / 'prior.spem').kind == EstimatorKind.WIENER_PRIOR

    data = invoke(runner, 'fit', '--method', 'wiener', '--train', train, '--out', tmp_path / 'data.spem')
    assert data.exit_code == 0, data.output
    assert read_model(tmp_path / 'data.spem').kind == EstimatorKind.WIENER_DATA


def test_unknown_method_is_a_usage_error(runner, tmp_path):
    result = invoke(runner, 'fit', '--method', 'kriging', '--out', tmp_path / 'm.spem')
    assert result.exit_code == 2


def test_missing_input_is_a_runtime_error(runner, tmp_path):
    result = invoke(runner, 'sample', '--cube', tmp_path / 'absent.spc', '--out', tmp_path / 't.spts')
    assert result.exit_code == 1


def test_camspec_command(runner, tmp_path):
    result = invoke(runner, 'camspec', '--out', tmp_path / 'c.camspec', '--camera', 'colorimetric',
                    '--noise-sigma', 0.01, '--noise-seed', 7)
    assert result.exit_code == 0, result.output
    text = (tmp_path / 'c.camspec').read_text()
    assert text.startswith('CAMSPEC 1\n')
    assert text.rstrip().endswith('seed 7')


@pytest.mark.slow
def test_end_to_end(runner, tmp_path):
    data, db = tmp_path / 'data', tmp_path / 'runs.duckdb'

    def run(*args):
        result = runner.invoke(cli, ['--log-level', 'ERROR', '--config', str(CONFIG), '--db-path', str(db),
                                     *map(str, args)])
        assert result.exit_code == 0, result.output
        return result

    run('datagen', '--out', data, '--seed', 1, '--size', '24x24', '--frames', 3, '--drift', 1)
    run('sample', '--cube', data / 'scene.spc', '--fraction', 0.2, '--seed', 1, '--out', tmp_path / 'train.spts')
    assert read_training_set(tmp_path / 'train.spts').k == 115

    run('fit', '--method', 'pseudoinverse', '--combo', 'sq6', '--train', tmp_path / 'train.spts',
        '--out', tmp_path / 'model.spem', '--report', tmp_path / 'model.txt')
    assert read_model(tmp_path / 'model.spem').combo.size == 6

    run('estimate', '--model', tmp_path / 'model.spem', '--rgb', data / 'scene.ppm', '--out', tmp_path / 'est.spc',
        '--threads', 2)
    run('evaluate', '--truth', data / 'scene.spc', '--estimate', tmp_path / 'est.spc', '--out', tmp_path / 'm.txt')
    assert float(parse_report((tmp_path / 'm.txt').read_text())['mean_rmse']) < 0.2

    run('video', '--model', tmp_path / 'model.spem', '--frames', data / 'rgb.spvr', '--out', tmp_path / 'est.spvc',
        '--report', tmp_path / 'video.txt', '--threads', 2)
    assert read_spectral_header(tmp_path / 'est.spvc').frames == 3
    stats = parse_report((tmp_path / 'video.txt').read_text())
    assert stats['frames_in'] == '3'

    run('evaluate', '--truth', data / 'truth.spvc', '--estimate', tmp_path / 'est.spvc',
        '--mask', data / 'mask.spc', '--drift', 1, '--out', tmp_path / 'video_metrics.txt')
    assert parse_report((tmp_path / 'video_metrics.txt').read_text())['frames'] == '3'

    run('search-train', '--image', data / 'scene.spc', '--image', tmp_path / 'est.spc', '--fractions', '0.1,0.2',
        '--out', tmp_path / 'best.spts', '--report', tmp_path / 'search.txt')
    assert parse_report((tmp_path / 'search.txt').read_text())['id'].endswith(']')

    run('compare', '--train', tmp_path / 'train.spts', '--image', data / 'scene.spc',
        '--methods', 'wiener_data,pseudoinverse,linear', '--csv', tmp_path / 'compare.csv')
    assert (tmp_path / 'compare.csv').exists()

    collector = ResultsCollector(str(db))
    try:
        runs = collector.get_runs()
        assert list(runs['status']) == ['completed'] * len(runs)
        assert len(runs) == 9
    finally:
        collector.close()
