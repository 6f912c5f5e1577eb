from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src.spectral.core import WavelengthGrid
from src.spectral.errors import BadBasisCount, ModelNotFitted
from .polynomial import PolyCombo, LINEAR3


class EstimatorKind(str, Enum):
    WIENER_PRIOR = 'wiener_prior'
    WIENER_DATA = 'wiener_data'
    PSEUDOINVERSE = 'pseudoinverse'
    LINEAR = 'linear'
    IMAI_BERNS = 'imai_berns'
    SHI_HEALEY = 'shi_healey'

    @property
    def code(self) -> int:
        return list(EstimatorKind).index(self)

    @classmethod
    def from_code(cls, code: int) -> 'EstimatorKind':
        return list(cls)[code]

    @classmethod
    def parse(cls, value: str, prior: bool = False) -> 'EstimatorKind':
        """Kind for ``value``; bare ``wiener`` picks the prior form when ``prior`` is set"""
        normalized = value.strip().lower().replace('-', '_')
        if normalized == 'wiener':
            normalized = cls.WIENER_PRIOR.value if prior else cls.WIENER_DATA.value
        return cls(normalized)

    @property
    def is_regression(self) -> bool:
        """Kinds that regress on (expanded) RGB values and accept any combo"""
        return self in (EstimatorKind.WIENER_DATA, EstimatorKind.PSEUDOINVERSE, EstimatorKind.IMAI_BERNS)


# Matrices each kind must carry to be usable
REQUIRED_FIELDS = {
    EstimatorKind.WIENER_PRIOR: ('W',),
    EstimatorKind.WIENER_DATA: ('W',),
    EstimatorKind.PSEUDOINVERSE: ('W',),
    EstimatorKind.LINEAR: ('V', 'lam'),
    EstimatorKind.IMAI_BERNS: ('V', 'D'),
    EstimatorKind.SHI_HEALEY: ('bank',),
}


@dataclass(frozen=True)
class ShiHealeyBank:
    """Training spectra plus the basis and system matrix Shi-Healey searches with

    ``basis`` holds the first ``max(d, d_range[1])`` PCA vectors; for a given d
    the first d - M columns form V1 and the next M columns V2.
    """
    reflectances: np.ndarray
    basis: np.ndarray
    Q: np.ndarray
    d: int
    d_range: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        reflectances = np.array(self.reflectances, dtype=np.float64)
        basis = np.array(self.basis, dtype=np.float64)
        q = np.array(self.Q, dtype=np.float64)
        m = q.shape[0]
        counts = (self.d,) if self.d_range is None else (self.d,) + tuple(self.d_range)
        if min(counts) <= m:
            raise BadBasisCount(f"Shi-Healey needs more basis vectors than the {m} channels, got {counts}")
        if max(counts) > basis.shape[1]:
            raise BadBasisCount(f"Basis has {basis.shape[1]} columns, {max(counts)} requested")
        for values in (reflectances, basis, q):
            values.setflags(write=False)
        object.__setattr__(self, 'reflectances', reflectances)
        object.__setattr__(self, 'basis', basis)
        object.__setattr__(self, 'Q', q)

    @property
    def k(self) -> int:
        return self.reflectances.shape[1]

    @property
    def channels(self) -> int:
        return self.Q.shape[0]

    def split(self, d: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
        d = self.d if d is None else d
        m = self.channels
        return self.basis[:, :d - m], self.basis[:, d - m:d]

    @property
    def V1(self) -> np.ndarray:
        return self.split()[0]

    @property
    def V2(self) -> np.ndarray:
        return self.split()[1]

    def candidate_counts(self) -> Tuple[int, ...]:
        if self.d_range is None:
            return (self.d,)
        low, high = self.d_range
        return tuple(range(low, high + 1))


@dataclass(frozen=True)
class EstimationModel:
    """A fitted estimator; only the matrices of its kind are populated"""
    kind: EstimatorKind
    grid: WavelengthGrid
    combo: PolyCombo = LINEAR3
    W: Optional[np.ndarray] = None
    V: Optional[np.ndarray] = None
    lam: Optional[np.ndarray] = None
    D: Optional[np.ndarray] = None
    bank: Optional[ShiHealeyBank] = None
    info: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'kind', EstimatorKind(self.kind))
        for name in ('W', 'V', 'lam', 'D'):
            value = getattr(self, name)
            if value is not None:
                value = np.array(value, dtype=np.float64)
                value.setflags(write=False)
                object.__setattr__(self, name, value)
        populated = {name for name in ('W', 'V', 'lam', 'D', 'bank') if getattr(self, name) is not None}
        required = set(REQUIRED_FIELDS[self.kind])
        extra = populated - required
        if extra:
            raise ValueError(f"Model of kind {self.kind.value} must not carry {sorted(extra)}")
        if not self.kind.is_regression and not self.combo.is_linear:
            raise ValueError(f"Kind {self.kind.value} works on raw RGB and takes no polynomial combo")

    @property
    def is_fitted(self) -> bool:
        return all(getattr(self, name) is not None for name in REQUIRED_FIELDS[self.kind])

    def require_fitted(self) -> None:
        if not self.is_fitted:
            missing = [name for name in REQUIRED_FIELDS[self.kind] if getattr(self, name) is None]
            raise ModelNotFitted(f"{self.kind.value} model is missing {missing}")

    @property
    def term_count(self) -> int:
        return self.combo.size

    def summary(self) -> Dict[str, Any]:
        """k, T, d and condition numbers of the matrices the method inverted"""
        summary: Dict[str, Any] = {
            'kind': self.kind.value,
            'grid': str(self.grid),
            'combo': str(self.combo),
            'T': self.term_count,
        }
        if self.V is not None:
            summary['d'] = self.V.shape[1]
        if self.bank is not None:
            summary['d'] = self.bank.d
            summary['k'] = self.bank.k
            if self.bank.d_range is not None:
                summary['d_range'] = f"{self.bank.d_range[0]}-{self.bank.d_range[1]}"
        summary.update(self.info)
        return summary
