from .spectral import rmse, gfc, delta_e_ab, rmse_map, gfc_map, delta_e_map
from .report import MetricReport, evaluate_cube, highlight_mask, masked_mean, split_metrics, HIGHLIGHT_FACTOR
from .comparison import EvaluationSummary, evaluate_many, compare_methods

__all__ = [
    'rmse',
    'gfc',
    'delta_e_ab',
    'rmse_map',
    'gfc_map',
    'delta_e_map',
    'MetricReport',
    'evaluate_cube',
    'highlight_mask',
    'masked_mean',
    'split_metrics',
    'HIGHLIGHT_FACTOR',
    'EvaluationSummary',
    'evaluate_many',
    'compare_methods',
]
