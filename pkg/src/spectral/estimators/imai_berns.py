from typing import Optional

import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import WavelengthGrid, grid_for_bands
from .linalg import condition_number, pinv
from .model import EstimationModel, EstimatorKind
from .pca import pca_basis
from .base import BaseEstimator, FitInputs, FitParams, REFLECTANCE, RGB_VALUES
from .polynomial import PolyCombo, LINEAR3, expand_polynomial, expand_responses

logger = get_logger(__name__)


def fit_imai_berns(
    reflectances: np.ndarray,
    responses: np.ndarray,
    d: int,
    combo: PolyCombo = LINEAR3,
    grid: Optional[WavelengthGrid] = None,
) -> EstimationModel:
    """Regress PCA weights B = V^t R on expanded responses: D = B Pe^+"""
    reflectances = np.asarray(reflectances, dtype=np.float64)
    basis = pca_basis(reflectances, d)
    weights = basis.T @ reflectances
    expanded = expand_responses(responses, combo)
    if expanded.shape[1] != reflectances.shape[1]:
        raise ValueError("Reflectance and response sample counts differ")
    d_matrix = weights @ pinv(expanded)
    cond = condition_number(expanded)
    logger.info(f"Fitted Imai-Berns with d={d}, T={combo.size}, cond={cond:.3g}")
    return EstimationModel(
        kind=EstimatorKind.IMAI_BERNS,
        grid=grid or grid_for_bands(reflectances.shape[0]),
        combo=combo,
        V=basis,
        D=d_matrix,
        info={'k': reflectances.shape[1], 'cond_responses': cond},
    )


class ImaiBernsEstimator(BaseEstimator):
    kind = EstimatorKind.IMAI_BERNS
    requires = (REFLECTANCE, RGB_VALUES)
    default_basis_count = 3

    def _fit(self, inputs: FitInputs, params: FitParams) -> EstimationModel:
        training = inputs.training
        return fit_imai_berns(
            training.reflectances, training.responses, self.basis_count(params), params.combo, training.grid
        )

    def predict(self, model: EstimationModel, rgb: np.ndarray) -> np.ndarray:
        return expand_polynomial(rgb, model.combo) @ (model.V @ model.D).T
