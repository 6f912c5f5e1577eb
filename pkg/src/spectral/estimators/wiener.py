from typing import Optional

import numpy as np

from src.framework.logging import get_logger
from src.spectral.camera import CameraSpec, system_matrix
from src.spectral.core import WavelengthGrid, grid_for_bands
from .linalg import condition_number, require_invertible, solve_right
from .model import EstimationModel, EstimatorKind
from .base import BaseEstimator, FitInputs, FitParams, SENSITIVITIES, ILLUMINATION, REFLECTANCE, RGB_VALUES
from .polynomial import PolyCombo, LINEAR3, expand_polynomial, expand_responses

logger = get_logger(__name__)

def reflectance_autocorrelation(reflectances: np.ndarray) -> np.ndarray:
    """R_ss = (1/k) R R^t"""
    reflectances = np.asarray(reflectances, dtype=np.float64)
    return reflectances @ reflectances.T / reflectances.shape[1]

def fit_wiener_prior(
    reflectances: np.ndarray,
    camera: CameraSpec,
    noise_autocorr: Optional[np.ndarray] = None,
) -> EstimationModel:
    """W = R_ss Q^t (Q R_ss Q^t + R_dd)^-1 from known sensitivities and illuminant"""
    reflectances = np.asarray(reflectances, dtype=np.float64)
    if reflectances.ndim != 2 or reflectances.shape[1] < 1:
        raise ValueError("Wiener prior fit needs a non-empty N x k reflectance matrix")

    q = system_matrix(camera)
    if noise_autocorr is None:
        noise_autocorr = camera.noise.autocorrelation()
    noise_autocorr = np.asarray(noise_autocorr, dtype=np.float64)
    if noise_autocorr.shape != (q.shape[0], q.shape[0]):
        raise ValueError(f"Noise autocorrelation must be {q.shape[0]} x {q.shape[0]}")

    r_ss = reflectance_autocorrelation(reflectances)
    inner = q @ r_ss @ q.T + noise_autocorr
    require_invertible(
        inner, 'Q R_ss Q^t + R_dd',
        hint='a non-zero noise autocorrelation regularises the system',
    )
    w = solve_right(r_ss @ q.T, inner)
    cond = condition_number(inner)
    logger.info(f"Fitted Wiener (prior form) on k={reflectances.shape[1]}, cond={cond:.3g}")
    return EstimationModel(
        kind=EstimatorKind.WIENER_PRIOR,
        grid=camera.grid,
        W=w,
        info={'k': reflectances.shape[1], 'cond_inner': cond},
    )

def fit_wiener_data(
    reflectances: np.ndarray,
    responses: np.ndarray,
    combo: PolyCombo = LINEAR3,
    grid: Optional[WavelengthGrid] = None,
) -> EstimationModel:
    """W = R_rp R_pp^-1 from paired training data, with responses expanded by ``combo``"""
    reflectances = np.asarray(reflectances, dtype=np.float64)
    expanded = expand_responses(responses, combo)
    if expanded.shape[1] != reflectances.shape[1]:
        raise ValueError("Reflectance and response sample counts differ")

    gram = expanded @ expanded.T
    require_invertible(
        gram, 'Expanded response correlation Pe Pe^t',
        hint=f"need at least {combo.size} linearly independent samples",
    )
    w = solve_right(reflectances @ expanded.T, gram)
    cond = condition_number(gram)
    logger.info(f"Fitted Wiener (data form) with T={combo.size}, k={reflectances.shape[1]}, cond={cond:.3g}")
    return EstimationModel(
        kind=EstimatorKind.WIENER_DATA,
        grid=grid or grid_for_bands(reflectances.shape[0]),
        combo=combo,
        W=w,
        info={'k': reflectances.shape[1], 'cond_gram': cond},
    )

class WienerPriorEstimator(BaseEstimator):
    kind = EstimatorKind.WIENER_PRIOR
    requires = (SENSITIVITIES, ILLUMINATION, REFLECTANCE)

    def _fit(self, inputs: FitInputs, params: FitParams) -> EstimationModel:
        return fit_wiener_prior(inputs.training.reflectances, inputs.camera, params.noise_autocorr)

    def predict(self, model: EstimationModel, rgb: np.ndarray) -> np.ndarray:
        return rgb @ model.W.T

class WienerDataEstimator(BaseEstimator):
    kind = EstimatorKind.WIENER_DATA
    requires = (REFLECTANCE, RGB_VALUES)

    def _fit(self, inputs: FitInputs, params: FitParams) -> EstimationModel:
        training = inputs.training
        return fit_wiener_data(training.reflectances, training.responses, params.combo, training.grid)

    def predict(self, model: EstimationModel, rgb: np.ndarray) -> np.ndarray:
        return expand_polynomial(rgb, model.combo) @ model.W.T
