from dataclasses import dataclass, replace
import time
from typing import Iterable, List, Optional, Sequence

import pandas as pd

from src.framework.logging import get_logger
from src.spectral.camera import CameraSpec, render_rgb_cube
from src.spectral.core import ColorimetryTables, SpectralCube, load_colorimetry
from src.spectral.errors import PriorKnowledgeMissing, ShapeMismatch
from src.spectral.estimators import (
    EstimatorKind,
    FitInputs,
    FitParams,
    LINEAR3,
    TrainingSet,
    estimate_cube,
    fit_model,
)
from .report import MetricReport, evaluate_cube

logger = get_logger(__name__)

REPORT_COLUMNS = ['image', 'mean_rmse', 'mean_gfc', 'mean_delta_e', 'highlight_fraction']


@dataclass(frozen=True)
class EvaluationSummary:
    """Per-image means and their unweighted mean over images"""
    per_image: pd.DataFrame
    reports: List[MetricReport]

    @property
    def mean_rmse(self) -> float:
        return float(self.per_image['mean_rmse'].mean())

    @property
    def mean_gfc(self) -> float:
        return float(self.per_image['mean_gfc'].mean())

    @property
    def mean_delta_e(self) -> float:
        return float(self.per_image['mean_delta_e'].mean())


def evaluate_many(
    truths: Sequence[SpectralCube],
    estimates: Sequence[SpectralCube],
    tables: Optional[ColorimetryTables] = None,
) -> EvaluationSummary:
    if len(truths) != len(estimates):
        raise ShapeMismatch(f"{len(truths)} reference images but {len(estimates)} estimates")
    if not truths:
        raise ValueError("Nothing to evaluate")
    tables = tables or load_colorimetry(truths[0].grid)

    reports = [evaluate_cube(truth, estimate, tables) for truth, estimate in zip(truths, estimates)]
    per_image = pd.DataFrame(
        [{'image': index, **{key: report.to_dict()[key] for key in REPORT_COLUMNS[1:]}}
         for index, report in enumerate(reports)],
        columns=REPORT_COLUMNS,
    )
    return EvaluationSummary(per_image=per_image, reports=reports)


def compare_methods(
    training: TrainingSet,
    camera: CameraSpec,
    images: Sequence[SpectralCube],
    kinds: Optional[Iterable[EstimatorKind]] = None,
    params: FitParams = FitParams(),
    threads: int = 1,
    tables: Optional[ColorimetryTables] = None,
) -> pd.DataFrame:
    """Fit each method on one training set and score it on ``images``

    Methods whose inputs are missing are skipped with a warning. Polynomial
    combos only reach the regression methods; the others use raw RGB.
    """
    kinds = list(kinds) if kinds is not None else list(EstimatorKind)
    tables = tables or load_colorimetry(camera.grid)
    inputs = FitInputs(training=training, camera=camera)
    rendered = [render_rgb_cube(image, camera).image for image in images]
    rows = []

    for kind in kinds:
        kind = EstimatorKind(kind)
        kind_params = params if kind.is_regression else replace(params, combo=LINEAR3)
        try:
            model = fit_model(kind, inputs, kind_params)
        except PriorKnowledgeMissing as e:
            logger.warning(f"Skipping {kind.value}: {e}")
            continue
        except Exception as e:
            logger.error(f"Fitting {kind.value} failed: {e}", exc_info=True)
            raise

        estimates = []
        elapsed = 0.0
        for rgb in rendered:
            started = time.perf_counter()
            estimates.append(estimate_cube(model, rgb, threads=threads))
            elapsed += time.perf_counter() - started
        summary = evaluate_many(images, estimates, tables)
        pixels = sum(image.pixel_count for image in images)
        rows.append({
            'method': kind.value,
            'combo': str(kind_params.combo),
            'mean_rmse': summary.mean_rmse,
            'mean_gfc': summary.mean_gfc,
            'mean_delta_e': summary.mean_delta_e,
            'ms_per_pixel': 1000.0 * elapsed / pixels,
        })
        logger.info(f"{kind.value}: mean RMSE {summary.mean_rmse:.4f}, {rows[-1]['ms_per_pixel']:.4g} ms/pixel")

    return pd.DataFrame(rows, columns=['method', 'combo', 'mean_rmse', 'mean_gfc', 'mean_delta_e', 'ms_per_pixel'])
