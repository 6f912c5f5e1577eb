from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.spectral.camera import CameraSpec
from src.spectral.errors import PriorKnowledgeMissing
from .model import EstimationModel, EstimatorKind
from .polynomial import PolyCombo, LINEAR3
from .training_set import TrainingSet

# Prior knowledge items, named as in the method requirements table
SENSITIVITIES = 'Sensitivities'
ILLUMINATION = 'Illumination'
REFLECTANCE = 'Reflectance'
RGB_VALUES = 'RGB Values'


@dataclass(frozen=True)
class FitInputs:
    """Whatever prior knowledge the caller has"""
    training: Optional[TrainingSet] = None
    camera: Optional[CameraSpec] = None

    def available(self) -> Tuple[str, ...]:
        items = []
        if self.camera is not None:
            items += [SENSITIVITIES, ILLUMINATION]
        if self.training is not None:
            items += [REFLECTANCE, RGB_VALUES]
        return tuple(items)


@dataclass(frozen=True)
class FitParams:
    combo: PolyCombo = LINEAR3
    basis_count: Optional[int] = None
    search_basis: bool = False
    d_range: Tuple[int, int] = (4, 8)
    noise_autocorr: Optional[np.ndarray] = None


class BaseEstimator(ABC):
    """One spectral estimation method: how it is fitted and how it predicts"""

    kind: EstimatorKind
    requires: Tuple[str, ...] = ()
    default_basis_count: Optional[int] = None

    def check_prior_knowledge(self, inputs: FitInputs) -> None:
        missing = [item for item in self.requires if item not in inputs.available()]
        if missing:
            hint = 'camera spec' if SENSITIVITIES in missing else 'training set'
            raise PriorKnowledgeMissing(self.kind.value, missing, hint=f"supply a {hint}")

    def fit(self, inputs: FitInputs, params: FitParams = FitParams()) -> EstimationModel:
        self.check_prior_knowledge(inputs)
        if not self.kind.is_regression and not params.combo.is_linear:
            raise PriorKnowledgeMissing(
                self.kind.value, [RGB_VALUES],
                hint=f"polynomial combos apply to regression methods only, got {params.combo}",
            )
        return self._fit(inputs, params)

    @abstractmethod
    def _fit(self, inputs: FitInputs, params: FitParams) -> EstimationModel:
        pass

    @abstractmethod
    def predict(self, model: EstimationModel, rgb: np.ndarray) -> np.ndarray:
        """Spectra (P x N) for P x 3 responses; no clamping"""
        pass

    def basis_count(self, params: FitParams) -> int:
        return params.basis_count if params.basis_count is not None else self.default_basis_count


class EstimatorCreator:
    @staticmethod
    def create(kind) -> BaseEstimator:
        """Factory returning the estimator implementation for ``kind``"""
        kind = EstimatorKind(kind)
        if kind == EstimatorKind.WIENER_PRIOR:
            from .wiener import WienerPriorEstimator
            return WienerPriorEstimator()
        elif kind == EstimatorKind.WIENER_DATA:
            from .wiener import WienerDataEstimator
            return WienerDataEstimator()
        elif kind == EstimatorKind.PSEUDOINVERSE:
            from .pseudoinverse import PseudoinverseEstimator
            return PseudoinverseEstimator()
        elif kind == EstimatorKind.LINEAR:
            from .linear import LinearEstimator
            return LinearEstimator()
        elif kind == EstimatorKind.IMAI_BERNS:
            from .imai_berns import ImaiBernsEstimator
            return ImaiBernsEstimator()
        elif kind == EstimatorKind.SHI_HEALEY:
            from .shi_healey import ShiHealeyEstimator
            return ShiHealeyEstimator()
        else:
            raise ValueError(f"Unsupported estimator kind: {kind}")


def fit_model(kind, inputs: FitInputs, params: FitParams = FitParams()) -> EstimationModel:
    return EstimatorCreator.create(kind).fit(inputs, params)


def requirements(kind) -> Tuple[str, ...]:
    return EstimatorCreator.create(kind).requires
