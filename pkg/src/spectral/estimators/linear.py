import numpy as np

from src.framework.logging import get_logger
from src.spectral.camera import CameraSpec, system_matrix
from .linalg import condition_number, pinv, require_invertible
from .base import BaseEstimator, FitInputs, FitParams, SENSITIVITIES, ILLUMINATION, REFLECTANCE
from .model import EstimationModel, EstimatorKind
from .pca import pca_basis

logger = get_logger(__name__)


def fit_linear(reflectances: np.ndarray, camera: CameraSpec, d: int) -> EstimationModel:
    """Basis V from PCA of the training spectra and system matrix Lambda = Q V"""
    basis = pca_basis(reflectances, d)
    lam = system_matrix(camera) @ basis
    if lam.shape[0] == lam.shape[1]:
        require_invertible(lam, 'System matrix Lambda = Q V')
    else:
        logger.debug(f"Lambda is {lam.shape[0]} x {lam.shape[1]}, using its pseudoinverse")
    cond = condition_number(lam)
    logger.info(f"Fitted linear model with d={d}, cond(Lambda)={cond:.3g}")
    return EstimationModel(
        kind=EstimatorKind.LINEAR,
        grid=camera.grid,
        V=basis,
        lam=lam,
        info={'k': np.asarray(reflectances).shape[1], 'cond_lambda': cond},
    )


def linear_reconstruction(model: EstimationModel) -> np.ndarray:
    """N x M matrix V Lambda^-1 (or V Lambda^+ when Lambda is not square)"""
    model.require_fitted()
    lam = model.lam
    if lam.shape[0] == lam.shape[1]:
        return model.V @ np.linalg.inv(lam)
    return model.V @ pinv(lam)


class LinearEstimator(BaseEstimator):
    kind = EstimatorKind.LINEAR
    requires = (SENSITIVITIES, ILLUMINATION, REFLECTANCE)
    default_basis_count = 3

    def _fit(self, inputs: FitInputs, params: FitParams) -> EstimationModel:
        return fit_linear(inputs.training.reflectances, inputs.camera, self.basis_count(params))

    def predict(self, model: EstimationModel, rgb: np.ndarray) -> np.ndarray:
        return rgb @ linear_reconstruction(model).T
