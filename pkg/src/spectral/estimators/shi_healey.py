from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from src.framework.logging import get_logger
from src.spectral.camera import CameraSpec, system_matrix
from src.spectral.core import Spectrum
from src.spectral.errors import BadBasisCount, EmptyTrainingSet, SingularSystem
from .linalg import condition_number, pinv, require_invertible
from .base import BaseEstimator, FitInputs, FitParams, SENSITIVITIES, ILLUMINATION, REFLECTANCE
from .model import EstimationModel, EstimatorKind, ShiHealeyBank
from .pca import pca_basis

logger = get_logger(__name__)

DEFAULT_BASIS_COUNT = 5
DEFAULT_SEARCH_RANGE = (4, 8)

# upper bound on pixels x bands x bank-size elements held at once
_CHUNK_ELEMENTS = 1 << 22


class ShiHealeyResult(NamedTuple):
    spectrum: Spectrum
    index: int
    d: int
    error: float


@dataclass(frozen=True)
class _Projection:
    """Per-d quantities shared by every pixel

    With G = (Q V2)^-1, A = V1 - V2 G Q V1 and P = A A^+, the candidate built
    from training spectrum r_i is  r_i_hat = c + P (r_i - c),  c = V2 G rho,
    so  r_i_hat - r_i = (I - P) c - (I - P) r_i.
    """
    d: int
    lift: np.ndarray          # N x M, V2 G
    projector: np.ndarray     # N x N, P
    complement: np.ndarray    # N x N, I - P
    bank_projected: np.ndarray   # N x k, P R
    bank_residual: np.ndarray    # N x k, (I - P) R


def _projection(bank: ShiHealeyBank, d: int) -> _Projection:
    v1, v2 = bank.split(d)
    qv2 = bank.Q @ v2
    require_invertible(qv2, f"Q V2 (d={d})")
    g = np.linalg.inv(qv2)
    a = v1 - v2 @ g @ bank.Q @ v1
    projector = a @ pinv(a)
    complement = np.eye(projector.shape[0]) - projector
    return _Projection(
        d=d,
        lift=v2 @ g,
        projector=projector,
        complement=complement,
        bank_projected=projector @ bank.reflectances,
        bank_residual=complement @ bank.reflectances,
    )


def fit_shi_healey(
    reflectances: np.ndarray,
    camera: CameraSpec,
    d: int = DEFAULT_BASIS_COUNT,
    search_basis: bool = False,
    d_range: Tuple[int, int] = DEFAULT_SEARCH_RANGE,
) -> EstimationModel:
    """Store the training bank with a PCA basis of d (or up to d_range[1]) vectors"""
    reflectances = np.asarray(reflectances, dtype=np.float64)
    if reflectances.ndim != 2 or reflectances.shape[1] < 1:
        raise EmptyTrainingSet("Shi-Healey needs at least one training spectrum")
    m = camera.channels
    limit = min(reflectances.shape)

    search: Optional[Tuple[int, int]] = None
    if search_basis:
        low, high = max(d_range[0], m + 1), min(d_range[1], limit)
        if low > high:
            raise BadBasisCount(f"No basis count in {d_range} is usable with {m} channels and rank limit {limit}")
        if (low, high) != tuple(d_range):
            logger.warning(f"Basis search range {d_range} narrowed to ({low}, {high})")
        search = (low, high)
        d = min(max(d, low), high)

    if d <= m:
        raise BadBasisCount(f"Shi-Healey needs d > {m} basis vectors, got {d}")
    d_max = max(d, search[1]) if search else d
    basis = pca_basis(reflectances, d_max)

    bank = ShiHealeyBank(
        reflectances=reflectances,
        basis=basis,
        Q=system_matrix(camera),
        d=d,
        d_range=search,
    )
    conditions = {}
    for count in bank.candidate_counts():
        _, v2 = bank.split(count)
        qv2 = bank.Q @ v2
        require_invertible(qv2, f"Q V2 (d={count})")
        conditions[f"cond_qv2_d{count}"] = condition_number(qv2)

    logger.info(
        f"Fitted Shi-Healey bank with k={bank.k}, d={d}"
        + (f", searching d in {search[0]}-{search[1]}" if search else '')
    )
    return EstimationModel(
        kind=EstimatorKind.SHI_HEALEY,
        grid=camera.grid,
        bank=bank,
        info={'k': bank.k, **conditions},
    )


def estimate_shi_healey_rows(
    rhos: np.ndarray, model: EstimationModel
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Estimates (P x N), selected bank indices, basis counts and errors for P responses

    The candidate minimising ||r_i_hat - r_i|| wins; ties go to the smaller
    basis count and then to the lowest training index.
    """
    if model.kind != EstimatorKind.SHI_HEALEY:
        raise ValueError(f"Expected a shi_healey model, got {model.kind.value}")
    model.require_fitted()
    bank = model.bank
    if bank.k == 0:
        raise EmptyTrainingSet("Shi-Healey bank holds no training spectra")

    rhos = np.atleast_2d(np.asarray(rhos, dtype=np.float64))
    if rhos.shape[1] != bank.channels:
        raise ValueError(f"Responses have {rhos.shape[1]} channels, model expects {bank.channels}")

    n_pixels, n_bands = rhos.shape[0], bank.reflectances.shape[0]
    best_error = np.full(n_pixels, np.inf)
    best_index = np.zeros(n_pixels, dtype=np.int64)
    best_d = np.zeros(n_pixels, dtype=np.int64)
    estimates = np.zeros((n_pixels, n_bands))
    chunk = max(1, _CHUNK_ELEMENTS // (n_bands * bank.k))

    for d in bank.candidate_counts():
        try:
            projection = _projection(bank, d)
        except SingularSystem:
            logger.error(f"Shi-Healey system is singular for d={d}", exc_info=True)
            raise
        for start in range(0, n_pixels, chunk):
            rows = slice(start, min(start + chunk, n_pixels))
            lifted = rhos[rows] @ projection.lift.T
            offset = lifted @ projection.complement.T
            diff = offset[:, :, np.newaxis] - projection.bank_residual[np.newaxis, :, :]
            errors = np.sqrt(np.einsum('pnk,pnk->pk', diff, diff))
            index = np.argmin(errors, axis=1)
            error = errors[np.arange(errors.shape[0]), index]

            better = error < best_error[rows]
            if np.any(better):
                candidate = projection.bank_projected[:, index].T + offset
                target = np.flatnonzero(better) + start
                estimates[target] = candidate[better]
                best_error[target] = error[better]
                best_index[target] = index[better]
                best_d[target] = d

    return estimates, best_index, best_d, best_error


def estimate_shi_healey_detailed(rho: np.ndarray, model: EstimationModel) -> ShiHealeyResult:
    estimates, index, d, error = estimate_shi_healey_rows(np.asarray(rho)[np.newaxis, :], model)
    return ShiHealeyResult(
        spectrum=Spectrum(model.grid, estimates[0]),
        index=int(index[0]),
        d=int(d[0]),
        error=float(error[0]),
    )


def estimate_shi_healey(rho: np.ndarray, model: EstimationModel) -> Spectrum:
    return estimate_shi_healey_detailed(rho, model).spectrum


class ShiHealeyEstimator(BaseEstimator):
    kind = EstimatorKind.SHI_HEALEY
    requires = (SENSITIVITIES, ILLUMINATION, REFLECTANCE)
    default_basis_count = DEFAULT_BASIS_COUNT

    def _fit(self, inputs: FitInputs, params: FitParams) -> EstimationModel:
        return fit_shi_healey(
            inputs.training.reflectances,
            inputs.camera,
            d=self.basis_count(params),
            search_basis=params.search_basis,
            d_range=params.d_range,
        )

    def predict(self, model: EstimationModel, rgb: np.ndarray) -> np.ndarray:
        return estimate_shi_healey_rows(rgb, model)[0]
