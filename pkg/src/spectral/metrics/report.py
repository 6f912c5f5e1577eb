from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import ColorimetryTables, SpectralCube
from src.spectral.errors import DegenerateSpectrum, ShapeMismatch
from .spectral import delta_e_map, gfc_map, rmse_map

logger = get_logger(__name__)

HIGHLIGHT_FACTOR = 2.0


@dataclass(frozen=True)
class MetricReport:
    """Image-level means plus the per-pixel maps they were averaged from"""
    mean_rmse: float
    mean_gfc: float
    mean_delta_e: float
    per_pixel_rmse: np.ndarray
    per_pixel_gfc: np.ndarray
    per_pixel_delta_e: np.ndarray
    highlight_fraction: float

    @property
    def shape(self) -> Tuple[int, int]:
        return self.per_pixel_rmse.shape

    def highlight_mask(self) -> np.ndarray:
        return highlight_mask(self.per_pixel_rmse)

    def to_dict(self) -> Dict[str, float]:
        height, width = self.shape
        return {
            'height': height,
            'width': width,
            'mean_rmse': self.mean_rmse,
            'mean_gfc': self.mean_gfc,
            'mean_delta_e': self.mean_delta_e,
            'highlight_fraction': self.highlight_fraction,
        }


def highlight_mask(per_pixel_rmse: np.ndarray) -> np.ndarray:
    """Pixels whose RMSE exceeds twice the image mean"""
    per_pixel_rmse = np.asarray(per_pixel_rmse, dtype=np.float64)
    if per_pixel_rmse.size == 0:
        raise ValueError("Cannot threshold an empty RMSE map")
    return per_pixel_rmse > HIGHLIGHT_FACTOR * np.mean(per_pixel_rmse)


def masked_mean(values: np.ndarray, mask: np.ndarray) -> float:
    """Mean of ``values`` where ``mask`` is set; NaN for an empty selection"""
    values = np.asarray(values, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if values.shape != mask.shape:
        raise ShapeMismatch(f"Map shape {values.shape} does not match mask shape {mask.shape}")
    if not mask.any():
        return float('nan')
    return float(np.mean(values[mask]))


def split_metrics(report: MetricReport, mask: np.ndarray) -> Tuple[float, float]:
    """(mean RMSE inside mask, mean RMSE outside mask)"""
    mask = np.asarray(mask, dtype=bool)
    return masked_mean(report.per_pixel_rmse, mask), masked_mean(report.per_pixel_rmse, ~mask)


def evaluate_cube(truth: SpectralCube, estimate: SpectralCube, tables: ColorimetryTables) -> MetricReport:
    rmse = rmse_map(truth, estimate)
    gfc = gfc_map(truth, estimate)
    delta_e = delta_e_map(truth, estimate, tables)

    degenerate = np.isnan(gfc)
    if degenerate.all():
        raise DegenerateSpectrum("Every pixel has a zero-norm spectrum, GFC is undefined")
    if degenerate.any():
        logger.warning(f"{int(degenerate.sum())} zero-norm pixel(s) left out of the GFC mean")

    mask = highlight_mask(rmse)
    return MetricReport(
        mean_rmse=float(np.mean(rmse)),
        mean_gfc=float(np.mean(gfc[~degenerate])),
        mean_delta_e=float(np.mean(delta_e)),
        per_pixel_rmse=rmse,
        per_pixel_gfc=gfc,
        per_pixel_delta_e=delta_e,
        highlight_fraction=float(np.mean(mask)),
    )
