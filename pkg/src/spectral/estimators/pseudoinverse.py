from typing import Optional

import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import WavelengthGrid, grid_for_bands
from .linalg import condition_number, pinv
from .model import EstimationModel, EstimatorKind
from .base import BaseEstimator, FitInputs, FitParams, REFLECTANCE, RGB_VALUES
from .polynomial import PolyCombo, LINEAR3, expand_polynomial, expand_responses

logger = get_logger(__name__)


def fit_pseudoinverse(
    reflectances: np.ndarray,
    responses: np.ndarray,
    combo: PolyCombo = LINEAR3,
    grid: Optional[WavelengthGrid] = None,
) -> EstimationModel:
    """W = R Pe^+"""
    reflectances = np.asarray(reflectances, dtype=np.float64)
    expanded = expand_responses(responses, combo)
    if expanded.shape[1] != reflectances.shape[1] or reflectances.shape[1] < 1:
        raise ValueError("Pseudoinverse fit needs k >= 1 paired samples")

    w = reflectances @ pinv(expanded)
    cond = condition_number(expanded)
    logger.info(f"Fitted pseudoinverse with T={combo.size}, k={reflectances.shape[1]}, cond={cond:.3g}")
    return EstimationModel(
        kind=EstimatorKind.PSEUDOINVERSE,
        grid=grid or grid_for_bands(reflectances.shape[0]),
        combo=combo,
        W=w,
        info={'k': reflectances.shape[1], 'cond_responses': cond},
    )


def training_rmse(model: EstimationModel, reflectances: np.ndarray, responses: np.ndarray) -> float:
    """RMSE of a W-model on its own training data, over all bands and samples"""
    model.require_fitted()
    residual = np.asarray(reflectances) - model.W @ expand_responses(responses, model.combo)
    return float(np.sqrt(np.mean(residual ** 2)))


class PseudoinverseEstimator(BaseEstimator):
    kind = EstimatorKind.PSEUDOINVERSE
    requires = (REFLECTANCE, RGB_VALUES)

    def _fit(self, inputs: FitInputs, params: FitParams) -> EstimationModel:
        training = inputs.training
        return fit_pseudoinverse(training.reflectances, training.responses, params.combo, training.grid)

    def predict(self, model: EstimationModel, rgb: np.ndarray) -> np.ndarray:
        return expand_polynomial(rgb, model.combo) @ model.W.T
