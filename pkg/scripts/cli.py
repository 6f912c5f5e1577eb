from contextlib import contextmanager
from pathlib import Path
import sys
from typing import Any, Dict, Iterator, List, Optional, Tuple

import click
import numpy as np

from src.framework.config import DEFAULT_CONFIG_PATH, RunConfig
from src.framework.data import ResultsCollector
from src.framework.logging import configure_logging, get_logger
from src.spectral.camera import CameraSpec, NoiseModel, camera_preset, render_rgb_cube
from src.spectral.core import DEFAULT_GRID, SpectralCube, WavelengthGrid, grid_for_bands, load_colorimetry
from src.spectral.datagen import SceneRecipe, frame_offset, generate_scene, iter_video, roll_mask
from src.spectral.errors import ConfigError
from src.spectral.estimators import (
    EstimatorKind,
    FitInputs,
    estimate_cube,
    fit_model,
    merge_training_sets,
)
from src.spectral.io import (
    SpectralVideoWriter,
    iter_spectral_frames,
    quantize,
    read_camera_spec,
    read_cube,
    read_map,
    read_model,
    read_ppm,
    read_training_set,
    render_report,
    write_band_view,
    write_camera_spec,
    write_cube,
    write_map,
    write_model,
    write_ppm,
    write_raw_video,
    write_report,
    write_spectral_video,
    write_training_set,
)
from src.spectral.metrics import compare_methods, evaluate_cube, split_metrics
from src.spectral.pipeline import SkipPolicy, open_frame_source, process_video
from src.spectral.training import MethodSpec, run_search, sample_training

logger = get_logger(__name__)

DEFAULT_CAMERA = 'gaussian'


def _params(**values) -> Dict[str, Any]:
    return {k: v for k, v in values.items() if v is not None}


def _load_config(ctx: click.Context, subcommand: str, cli_params: Dict[str, Any]) -> RunConfig:
    config_path = ctx.obj.get('config_path')
    if config_path is None and Path(DEFAULT_CONFIG_PATH).exists():
        config_path = DEFAULT_CONFIG_PATH
    cli_params = dict(cli_params)
    if ctx.obj.get('db_path'):
        cli_params['db_path'] = ctx.obj['db_path']
    return RunConfig(subcommand, config_path, cli_params)


def _fail(action: str, e: Exception) -> None:
    """Log and exit: 2 for configuration problems, 1 for everything else"""
    if isinstance(e, ConfigError):
        logger.error(f"Failed to {action}: {e}")
        click.echo(f"Error: {e}", err=True)
        sys.exit(2)
    logger.error(f"Failed to {action}: {e}", exc_info=True)
    click.echo(f"Error: {e}", err=True)
    sys.exit(1)


@contextmanager
def _tracked(config: RunConfig) -> Iterator[Optional[ResultsCollector]]:
    """Record the run in DuckDB when a database path is configured"""
    if not config.db_path:
        yield None
        return
    collector = ResultsCollector(config.db_path)
    collector.start_run(config.subcommand, config.to_dict())
    try:
        yield collector
    except BaseException:
        collector.end_run('failed')
        collector.close()
        raise
    collector.end_run('completed')
    collector.close()


def _resolve_camera(config: RunConfig, grid: WavelengthGrid, required: bool = False) -> Optional[CameraSpec]:
    """Camera from a camspec file, else a preset; None when neither was asked for"""
    if config.camspec:
        camera = read_camera_spec(config.camspec)
        if camera.grid != grid:
            raise ConfigError(f"Camera spec {config.camspec} is defined on {camera.grid}, data uses {grid}")
        return camera
    name = config.camera or (DEFAULT_CAMERA if required else None)
    if name is None:
        return None
    return camera_preset(name, grid)


def _parse_size(text: str) -> Tuple[int, int]:
    """'WxH' -> (width, height)"""
    try:
        width, height = (int(part) for part in text.lower().split('x'))
    except ValueError:
        raise ConfigError(f"Size must look like WIDTHxHEIGHT, got '{text}'")
    return width, height


def _is_spectral_video(path: str) -> bool:
    with open(path, 'rb') as handle:
        return handle.read(4) == b'SPVC'


def _ensure_dir(path: str) -> Path:
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


@click.group()
@click.option('--log-level', default='INFO', help='DEBUG, INFO, WARNING or ERROR')
@click.option('--log-file', default=None, help='Also write log records to this file')
@click.option('--config', 'config_path', default=None, help=f'YAML run configuration (default {DEFAULT_CONFIG_PATH} if present)')
@click.option('--db-path', default=None, help='Record runs and results in this DuckDB file')
@click.pass_context
def cli(ctx, log_level: str, log_file: str, config_path: str, db_path: str):
    """Spectral video reconstruction from RGB frames"""
    try:
        configure_logging(log_level, log_file)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint='--log-level')
    ctx.ensure_object(dict)
    ctx.obj['config_path'] = config_path
    ctx.obj['db_path'] = db_path


@cli.command()
@click.option('--out', 'out_dir', required=True, help='Output directory')
@click.option('--seed', type=int, help='Generator seed')
@click.option('--size', default=None, help='Scene size as WIDTHxHEIGHT (default 64x64)')
@click.option('--bands', type=int, help='Number of 10 nm bands from 420 nm (default 31)')
@click.option('--materials', type=int, help='Number of distinct materials')
@click.option('--smoothness', type=float, help='Material curve smoothness sigma in nm')
@click.option('--highlight-fraction', type=float, help='Fraction of highlight pixels')
@click.option('--highlight-gain', type=float, help='Gain applied to highlight spikes')
@click.option('--red-bias', type=float, help='Weight of the red ramp added to every material')
@click.option('--jitter', type=float, help='Per-band jitter standard deviation')
@click.option('--frames', type=int, help='Write a video of this many frames')
@click.option('--drift', type=float, help='Horizontal drift in pixels per frame')
@click.option('--camera', help='Camera preset used to render RGB')
@click.option('--camspec', help='Camera spec file used to render RGB')
@click.pass_context
def datagen(ctx, out_dir, seed, size, bands, materials, smoothness, highlight_fraction,
            highlight_gain, red_bias, jitter, frames, drift, camera, camspec):
    """Generate a synthetic scene (or video) with its highlight mask and rendered RGB"""
    try:
        config = _load_config(ctx, 'datagen', _params(
            seed=seed, size=size, bands=bands, n_materials=materials, smoothness_sigma_nm=smoothness,
            highlight_fraction=highlight_fraction, highlight_gain=highlight_gain, red_bias=red_bias,
            jitter=jitter, frames=frames, drift=drift, camera=camera, camspec=camspec,
        ))
        width, height = _parse_size(str(config.get('size', '64x64')))
        grid = grid_for_bands(int(config.get('bands', DEFAULT_GRID.count)))
        recipe_values = {key: config.get(key) for key in (
            'n_materials', 'smoothness_sigma_nm', 'highlight_fraction', 'highlight_gain', 'red_bias', 'jitter',
        ) if config.get(key) is not None}
        try:
            recipe = SceneRecipe(height=height, width=width, grid=grid, seed=config.seed, **recipe_values)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid scene recipe: {e}")
        n_frames = int(config.get('frames', 1))
        drift_px = float(config.get('drift', 0.0))
        if n_frames < 1:
            raise ConfigError(f"--frames must be >= 1, got {n_frames}")
        rgb_camera = _resolve_camera(config, grid, required=True)

        out = _ensure_dir(out_dir)
        with _tracked(config):
            scene = generate_scene(recipe)
            write_cube(out / 'scene.spc', scene.cube, config.encoding)
            write_map(out / 'mask.spc', scene.highlights.astype(np.float64))
            rendered = render_rgb_cube(scene.cube, rgb_camera)
            write_ppm(out / 'scene.ppm', rendered.image)
            if config.get('frames') is not None:
                frames_out = list(iter_video(scene.cube, n_frames, drift_px))
                write_spectral_video(out / 'truth.spvc', frames_out)
                write_raw_video(out / 'rgb.spvr',
                                (quantize(render_rgb_cube(frame, rgb_camera).image.values) for frame in frames_out))
            write_camera_spec(out / 'camera.camspec', rgb_camera)
            write_report(out / 'datagen.txt', 'scene_summary.txt.j2', scene={
                'height': height,
                'width': width,
                'bands': grid.count,
                'frames': n_frames,
                'highlight_pixels': int(scene.highlights.sum()),
                'clipped_channels': rendered.clipped,
            }, config=config.to_dict())

        click.echo(f"Wrote {width}x{height}x{grid.count} scene ({int(scene.highlights.sum())} highlight pixels) to {out}")

    except click.ClickException:
        raise
    except Exception as e:
        _fail('generate data', e)


@cli.command()
@click.option('--out', required=True, help='Camera spec file to write')
@click.option('--camera', 'preset', default=None, help='Preset: gaussian or colorimetric')
@click.option('--bands', type=int, help='Number of 10 nm bands from 420 nm (default 31)')
@click.option('--noise-sigma', type=float, help='Additive Gaussian noise sigma for every channel')
@click.option('--noise-seed', type=int, default=0, help='Seed of the noise generator')
@click.pass_context
def camspec(ctx, out, preset, bands, noise_sigma, noise_seed):
    """Write a preset camera spec file"""
    try:
        config = _load_config(ctx, 'camspec', _params(camera=preset, bands=bands))
        grid = grid_for_bands(int(config.get('bands', DEFAULT_GRID.count)))
        noise = None
        if noise_sigma:
            try:
                noise = NoiseModel.gaussian((noise_sigma,) * 3, noise_seed)
            except ValueError as e:
                raise ConfigError(str(e))
        camera = camera_preset(config.camera or DEFAULT_CAMERA, grid, noise=noise)
        write_camera_spec(out, camera)
        click.echo(f"Wrote {config.camera or DEFAULT_CAMERA} camera spec to {out}")

    except click.ClickException:
        raise
    except Exception as e:
        _fail('write camera spec', e)


@cli.command()
@click.option('--cube', 'cubes', multiple=True, required=True, help='Spectral cube to sample (repeatable)')
@click.option('--fraction', type=float, help='Fraction of pixels to sample')
@click.option('--seed', type=int, help='Sampling seed')
@click.option('--camera', help='Camera preset computing the responses')
@click.option('--camspec', help='Camera spec file computing the responses')
@click.option('--out', required=True, help='Training set file (SPTS) to write')
@click.pass_context
def sample(ctx, cubes, fraction, seed, camera, camspec, out):
    """Sample pixels of one or more cubes into a training set"""
    try:
        config = _load_config(ctx, 'sample', _params(fraction=fraction, seed=seed, camera=camera, camspec=camspec))
        fraction = float(config.get('fraction', 0.05))
        if not 0.0 < fraction <= 1.0:
            raise ConfigError(f"--fraction must lie in (0, 1], got {fraction}")
        with _tracked(config):
            parts = []
            for index, path in enumerate(cubes):
                cube = read_cube(path)
                rgb_camera = _resolve_camera(config, cube.grid, required=True)
                parts.append(sample_training(cube, rgb_camera, fraction, config.seed,
                                             source_index=index, source_id=Path(path).stem))
            training = merge_training_sets(parts)
            write_training_set(out, training)
        click.echo(f"Wrote training set of {training.k} spectra to {out}")

    except click.ClickException:
        raise
    except Exception as e:
        _fail('sample training set', e)


@cli.command()
@click.option('--method', help='wiener (prior form with a camera), wiener_prior, wiener_data, pseudoinverse, linear, imai_berns or shi_healey')
@click.option('--combo', help='Polynomial combo preset, e.g. linear3, sq6, cross6, full12')
@click.option('--combo-terms', help='Explicit combo, e.g. "R,G,B,R2,G2,B2"')
@click.option('--d', 'basis_count', type=int, help='Number of basis vectors')
@click.option('--search-basis/--no-search-basis', default=None, help='Shi-Healey: search d per pixel')
@click.option('--d-range', help='Shi-Healey basis search range, e.g. 4-8')
@click.option('--train', help='Training set file (SPTS)')
@click.option('--camera', help='Camera preset')
@click.option('--camspec', help='Camera spec file')
@click.option('--out', required=True, help='Model file (SPEM) to write')
@click.option('--report', help='Write the model summary here')
@click.pass_context
def fit(ctx, method, combo, combo_terms, basis_count, search_basis, d_range, train, camera, camspec, out, report):
    """Fit an estimation model"""
    try:
        config = _load_config(ctx, 'fit', _params(
            method=method, combo=combo, combo_terms=combo_terms, basis_count=basis_count,
            search_basis=search_basis, d_range=d_range, camera=camera, camspec=camspec, train=train,
        ))
        training = read_training_set(train) if train else None
        grid = training.grid if training is not None else DEFAULT_GRID
        inputs = FitInputs(training=training, camera=_resolve_camera(config, grid))

        with _tracked(config):
            model = fit_model(config.method, inputs, config.fit_params())
            write_model(out, model)
            summary = model.summary()
            if training is not None:
                summary.setdefault('k', training.k)
            if report:
                write_report(report, 'model_summary.txt.j2', summary=summary, config=config.to_dict())

        click.echo(f"Fitted {model.kind.value} model ({model.combo}) to {out}")
        for key, value in summary.items():
            click.echo(f"  {key}: {value}")

    except click.ClickException:
        raise
    except Exception as e:
        _fail('fit model', e)


@cli.command()
@click.option('--model', 'model_path', required=True, help='Model file (SPEM)')
@click.option('--rgb', required=True, help='RGB image (P6 PPM)')
@click.option('--out', required=True, help='Spectral cube file to write')
@click.option('--threads', type=int, help='Worker threads')
@click.option('--encoding', type=click.Choice(['f32', 'f64']), default=None, help='Cube sample encoding')
@click.option('--clamp/--no-clamp', default=False, help='Clamp estimates to [0, 1]')
@click.pass_context
def estimate(ctx, model_path, rgb, out, threads, encoding, clamp):
    """Estimate a spectral cube from one RGB image"""
    try:
        config = _load_config(ctx, 'estimate', _params(threads=threads, encoding=encoding, clamp=clamp or None))
        model = read_model(model_path)
        image = read_ppm(rgb)
        with _tracked(config):
            cube = estimate_cube(model, image, threads=config.threads)
            if clamp:
                cube = cube.clamped_copy()
            write_cube(out, cube, config.encoding)
        click.echo(f"Wrote {cube.width}x{cube.height}x{cube.grid.count} cube to {out}")

    except click.ClickException:
        raise
    except Exception as e:
        _fail('estimate cube', e)


@cli.command()
@click.option('--model', 'model_path', required=True, help='Model file (SPEM)')
@click.option('--frames', 'frames_path', required=True, help='Directory of frame_NNNNNN.ppm or an SPVR file')
@click.option('--out', required=True, help='Spectral video file (SPVC) to write')
@click.option('--report', help='Write pipeline statistics here')
@click.option('--skip-threshold', type=float, help='Skip frames at least this similar to the last estimated one')
@click.option('--threads', type=int, help='Estimation worker threads')
@click.option('--frame-delay-ms', type=float, help='Fixed delay after every emitted frame')
@click.option('--queue-size', type=int, help='Decoded frames buffered ahead of estimation')
@click.option('--bit-depth', type=int, help='Bit depth of the input frames')
@click.pass_context
def video(ctx, model_path, frames_path, out, report, skip_threshold, threads, frame_delay_ms, queue_size, bit_depth):
    """Turn an RGB frame sequence into a spectral video"""
    try:
        config = _load_config(ctx, 'video', _params(
            skip_threshold=skip_threshold, threads=threads, frame_delay_ms=frame_delay_ms,
            queue_size=queue_size, bit_depth=bit_depth,
        ))
        model = read_model(model_path)
        source = open_frame_source(frames_path, config.bit_depth)
        skip = SkipPolicy.from_threshold(config.skip_threshold)

        with _tracked(config) as collector:
            with SpectralVideoWriter(out) as writer:
                result = process_video(
                    source, model, skip=skip, sink=writer, threads=config.threads,
                    queue_size=config.queue_size, frame_delay_ms=config.frame_delay_ms,
                )
            stats = result.stats.to_dict()
            if collector is not None:
                collector.record_pipeline_stats(stats)
            if report:
                write_report(report, 'pipeline_stats.txt.j2', stats=stats, config=config.to_dict())

        click.echo(
            f"Wrote {stats['frames_in']} spectral frame(s) to {out}: "
            f"{stats['frames_estimated']} estimated, {stats['frames_skipped']} skipped, "
            f"{stats['throughput_fps']:.2f} fps"
        )

    except click.ClickException:
        raise
    except Exception as e:
        _fail('generate spectral video', e)


def _frame_pairs(truth_path: str, estimate_path: str) -> Iterator[Tuple[SpectralCube, SpectralCube]]:
    """Matching truth and estimate frames from two cubes or two SPVC videos"""
    truth_video, estimate_video = _is_spectral_video(truth_path), _is_spectral_video(estimate_path)
    if truth_video != estimate_video:
        raise ConfigError("Truth and estimate must both be cubes or both be spectral videos")
    if not truth_video:
        yield read_cube(truth_path), read_cube(estimate_path)
        return
    truths, estimates = iter_spectral_frames(truth_path), iter_spectral_frames(estimate_path)
    yield from zip(truths, estimates)
    if next(truths, None) is not None or next(estimates, None) is not None:
        raise ConfigError(f"{truth_path} and {estimate_path} hold different frame counts")


@cli.command()
@click.option('--truth', required=True, help='Ground-truth cube or spectral video')
@click.option('--estimate', 'estimate_path', required=True, help='Estimated cube or spectral video')
@click.option('--out', help='Write the metric report here (default: stdout)')
@click.option('--mask', help='Highlight mask (single-band cube); default is the detected highlight mask')
@click.option('--drift', type=float, help='Video drift the mask moves with, in pixels per frame')
@click.option('--rmse-map', help='Write the per-pixel RMSE map (first frame) as a single-band cube')
@click.pass_context
def evaluate(ctx, truth, estimate_path, out, mask, drift, rmse_map):
    """Compare an estimate with its ground truth"""
    try:
        config = _load_config(ctx, 'evaluate', _params(truth=truth, estimate=estimate_path, mask=mask, drift=drift))
        truth_mask = read_map(mask).astype(bool) if mask else None
        drift_px = float(config.get('drift', 0.0))

        with _tracked(config) as collector:
            tables = None
            frames = 0
            per_frame = {'mean_rmse': [], 'mean_gfc': [], 'mean_delta_e': [], 'highlight_fraction': []}
            masked, unmasked, highlight_pixels = [], [], 0
            report = None
            for index, (truth_cube, estimated) in enumerate(_frame_pairs(truth, estimate_path)):
                tables = tables or load_colorimetry(truth_cube.grid)
                report = evaluate_cube(truth_cube, estimated, tables)
                if index == 0 and rmse_map:
                    write_map(rmse_map, report.per_pixel_rmse)
                for key in per_frame:
                    per_frame[key].append(report.to_dict()[key])
                if truth_mask is not None:
                    frame_mask = roll_mask(truth_mask, frame_offset(index, drift_px))
                else:
                    frame_mask = report.highlight_mask()
                inside, outside = split_metrics(report, frame_mask)
                masked.append(inside)
                unmasked.append(outside)
                highlight_pixels += int(frame_mask.sum())
                if collector is not None:
                    collector.record_metric_report(f"frame{index}", report.to_dict())
                frames += 1
            if report is None:
                raise ConfigError("Nothing to evaluate: the inputs hold no frames")

            metrics = {key: float(np.mean(values)) for key, values in per_frame.items()}
            metrics['frames'] = frames
            split = {
                'count': highlight_pixels,
                'masked': float(np.nanmean(masked)) if not np.all(np.isnan(masked)) else float('nan'),
                'unmasked': float(np.nanmean(unmasked)) if not np.all(np.isnan(unmasked)) else float('nan'),
            }
            if out:
                text = write_report(out, 'metric_report.txt.j2', metrics=metrics, split=split, config=config.to_dict())
            else:
                text = render_report('metric_report.txt.j2', metrics=metrics, split=split, config=config.to_dict())
        click.echo(text, nl=False)

    except click.ClickException:
        raise
    except Exception as e:
        _fail('evaluate estimate', e)


@cli.command('search-train')
@click.option('--image', 'images', multiple=True, required=True, help='Spectral cube of one training image (repeatable)')
@click.option('--fractions', help='Comma separated sampling fractions')
@click.option('--seed', type=int, help='Sampling seed')
@click.option('--method', help='Method used to score candidate sets')
@click.option('--combo', help='Polynomial combo of the scoring method')
@click.option('--combo-terms', help='Explicit combo of the scoring method')
@click.option('--d', 'basis_count', type=int, help='Basis count of the scoring method')
@click.option('--camera', help='Camera preset')
@click.option('--camspec', help='Camera spec file')
@click.option('--threads', type=int, help='Worker threads')
@click.option('--out', required=True, help='Winning training set file (SPTS)')
@click.option('--report', help='Write the search report here')
@click.pass_context
def search_train(ctx, images, fractions, seed, method, combo, combo_terms, basis_count, camera, camspec, threads, out, report):
    """Search the representative training set over several images"""
    try:
        config = _load_config(ctx, 'search-train', _params(
            fractions=fractions, seed=seed, method=method, combo=combo, combo_terms=combo_terms,
            basis_count=basis_count, camera=camera, camspec=camspec, threads=threads,
        ))
        cubes = [read_cube(path) for path in images]
        rgb_camera = _resolve_camera(config, cubes[0].grid, required=True)
        spec = MethodSpec(kind=config.method, params=config.fit_params())

        with _tracked(config) as collector:
            result = run_search(cubes, rgb_camera, config.fractions, config.seed, spec, config.threads)
            write_training_set(out, result.winner.training)
            table = result.to_frame()
            if collector is not None:
                collector.record_search_candidates(table)
            if report:
                steps = [(step, rows.to_dict('records')) for step, rows in table.groupby('step', sort=True)]
                write_report(report, 'search_report.txt.j2', method=str(spec), steps=steps,
                             winner=result.winner, config=config.to_dict())

        click.echo(f"Representative set {result.winner.id} (k={result.winner.k}, score {result.winner.score:.6g}) written to {out}")

    except click.ClickException:
        raise
    except Exception as e:
        _fail('search training set', e)


@cli.command('band-view')
@click.option('--cube', 'cube_path', required=True, help='Spectral cube or spectral video')
@click.option('--wavelength', type=float, help='Band wavelength in nm')
@click.option('--band', type=int, help='Band index')
@click.option('--frame', type=int, default=0, help='Frame index when reading a spectral video')
@click.option('--out', required=True, help='Grey PPM to write')
@click.pass_context
def band_view(ctx, cube_path, wavelength, band, frame, out):
    """Write one band of a cube as a grey image"""
    if (wavelength is None) == (band is None):
        raise click.UsageError('Give exactly one of --wavelength and --band')
    try:
        _load_config(ctx, 'band-view', _params(wavelength=wavelength, band=band, frame=frame))
        if _is_spectral_video(cube_path):
            cube = next((c for i, c in enumerate(iter_spectral_frames(cube_path)) if i == frame), None)
            if cube is None:
                raise ConfigError(f"{cube_path} has no frame {frame}")
        else:
            cube = read_cube(cube_path)
        if band is None:
            try:
                band = cube.grid.index_of(wavelength)
            except ValueError as e:
                raise ConfigError(str(e))
        if not 0 <= band < cube.grid.count:
            raise ConfigError(f"Band {band} outside 0..{cube.grid.count - 1}")
        write_band_view(out, cube, band)
        click.echo(f"Wrote band {band} ({cube.grid.wavelengths()[band]:g} nm) to {out}")

    except click.ClickException:
        raise
    except Exception as e:
        _fail('write band view', e)


@cli.command()
@click.option('--train', required=True, help='Training set file (SPTS)')
@click.option('--image', 'images', multiple=True, required=True, help='Spectral cube to score on (repeatable)')
@click.option('--methods', help='Comma separated methods (default: all)')
@click.option('--combo', help='Polynomial combo for the regression methods')
@click.option('--combo-terms', help='Explicit combo for the regression methods')
@click.option('--d', 'basis_count', type=int, help='Basis count')
@click.option('--camera', help='Camera preset')
@click.option('--camspec', help='Camera spec file')
@click.option('--threads', type=int, help='Worker threads')
@click.option('--report', help='Write the comparison table here')
@click.option('--csv', 'csv_path', help='Also write the comparison as CSV')
@click.pass_context
def compare(ctx, train, images, methods, combo, combo_terms, basis_count, camera, camspec, threads, report, csv_path):
    """Compare every estimation method on one training set"""
    try:
        config = _load_config(ctx, 'compare', _params(
            methods=methods, combo=combo, combo_terms=combo_terms, basis_count=basis_count,
            camera=camera, camspec=camspec, threads=threads,
        ))
        kinds: Optional[List[EstimatorKind]] = None
        if config.get('methods'):
            try:
                kinds = [EstimatorKind.parse(name) for name in str(config.get('methods')).split(',') if name.strip()]
            except ValueError as e:
                raise ConfigError(str(e))
        training = read_training_set(train)
        cubes = [read_cube(path) for path in images]
        rgb_camera = _resolve_camera(config, training.grid, required=True)

        with _tracked(config):
            table = compare_methods(training, rgb_camera, cubes, kinds=kinds,
                                    params=config.fit_params(), threads=config.threads)
            if csv_path:
                table.to_csv(csv_path, index=False)
            if report:
                write_report(report, 'comparison.txt.j2', rows=table.to_dict('records'), config=config.to_dict())

        click.echo(table.to_string(index=False))

    except click.ClickException:
        raise
    except Exception as e:
        _fail('compare methods', e)


if __name__ == "__main__":
    cli()
