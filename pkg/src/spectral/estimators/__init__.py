from .polynomial import (
    PolyCombo,
    COMBO_PRESETS,
    LINEAR3,
    combo_from_name,
    combo_is_subset,
    expand_polynomial,
    expand_responses,
    parse_combo_terms,
    parse_term,
)
from .pca import pca_basis, pca_spectrum, explained_scatter
from .training_set import TrainingSet, Provenance, merge_training_sets
from .model import EstimationModel, EstimatorKind, ShiHealeyBank
from .base import BaseEstimator, EstimatorCreator, FitInputs, FitParams, fit_model, requirements
from .wiener import fit_wiener_prior, fit_wiener_data, reflectance_autocorrelation
from .pseudoinverse import fit_pseudoinverse, training_rmse
from .linear import fit_linear, linear_reconstruction
from .imai_berns import fit_imai_berns
from .shi_healey import (
    fit_shi_healey,
    estimate_shi_healey,
    estimate_shi_healey_detailed,
    estimate_shi_healey_rows,
    ShiHealeyResult,
)
from .estimate import estimate_rows, estimate_pixel, estimate_cube

__all__ = [
    'PolyCombo',
    'COMBO_PRESETS',
    'LINEAR3',
    'combo_from_name',
    'combo_is_subset',
    'expand_polynomial',
    'expand_responses',
    'parse_combo_terms',
    'parse_term',
    'pca_basis',
    'pca_spectrum',
    'explained_scatter',
    'TrainingSet',
    'Provenance',
    'merge_training_sets',
    'EstimationModel',
    'EstimatorKind',
    'ShiHealeyBank',
    'BaseEstimator',
    'EstimatorCreator',
    'FitInputs',
    'FitParams',
    'fit_model',
    'requirements',
    'fit_wiener_prior',
    'fit_wiener_data',
    'reflectance_autocorrelation',
    'fit_pseudoinverse',
    'training_rmse',
    'fit_linear',
    'linear_reconstruction',
    'fit_imai_berns',
    'fit_shi_healey',
    'estimate_shi_healey',
    'estimate_shi_healey_detailed',
    'estimate_shi_healey_rows',
    'ShiHealeyResult',
    'estimate_rows',
    'estimate_pixel',
    'estimate_cube',
]
