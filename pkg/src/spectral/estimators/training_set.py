from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.spectral.core import WavelengthGrid
from src.spectral.errors import EmptyTrainingSet


@dataclass(frozen=True)
class Provenance:
    """Where the samples of a training set came from"""
    source_ids: Tuple[str, ...] = ()
    fraction: float = 1.0
    seed: int = 0


@dataclass(frozen=True)
class TrainingSet:
    """Paired reflectances R (N x k) and responses P (M x k)

    ``sample_keys`` is a k x 2 integer array of (source index, pixel index)
    pairs, indexes into ``provenance.source_ids``; it lets unions drop
    pixels that appear in several sets.
    """
    grid: WavelengthGrid
    reflectances: np.ndarray
    responses: np.ndarray
    provenance: Provenance = field(default_factory=Provenance)
    sample_keys: Optional[np.ndarray] = None

    def __post_init__(self):
        reflectances = np.array(self.reflectances, dtype=np.float64)
        responses = np.array(self.responses, dtype=np.float64)
        if reflectances.ndim != 2 or responses.ndim != 2:
            raise ValueError("Reflectances and responses must be matrices")
        if reflectances.shape[0] != self.grid.count:
            raise ValueError(
                f"Reflectances have {reflectances.shape[0]} bands, grid expects {self.grid.count}"
            )
        if reflectances.shape[1] != responses.shape[1]:
            raise ValueError(
                f"Column count mismatch: {reflectances.shape[1]} reflectances, {responses.shape[1]} responses"
            )
        if reflectances.shape[1] < 1:
            raise EmptyTrainingSet("A training set needs at least one sample")

        if self.sample_keys is None:
            keys = np.column_stack([np.zeros(reflectances.shape[1], dtype=np.int64),
                                    np.arange(reflectances.shape[1], dtype=np.int64)])
        else:
            keys = np.array(self.sample_keys, dtype=np.int64)
            if keys.shape != (reflectances.shape[1], 2):
                raise ValueError(f"sample_keys must be k x 2, got {keys.shape}")

        for values in (reflectances, responses, keys):
            values.setflags(write=False)
        object.__setattr__(self, 'reflectances', reflectances)
        object.__setattr__(self, 'responses', responses)
        object.__setattr__(self, 'sample_keys', keys)

    @property
    def k(self) -> int:
        return self.reflectances.shape[1]

    @property
    def channels(self) -> int:
        return self.responses.shape[0]


def merge_training_sets(sets: Sequence[TrainingSet]) -> TrainingSet:
    """Concatenate training sets, keeping the first occurrence of a repeated pixel"""
    if not sets:
        raise EmptyTrainingSet("Nothing to merge")
    grid = sets[0].grid
    source_ids: List[str] = []
    source_index: Dict[str, int] = {}
    seen = set()
    reflectances, responses, keys = [], [], []

    for training in sets:
        if training.grid != grid:
            raise ValueError("Cannot merge training sets on different grids")
        for column, (src, pixel) in enumerate(training.sample_keys):
            source = training.provenance.source_ids[src] if training.provenance.source_ids else str(src)
            if source not in source_index:
                source_index[source] = len(source_ids)
                source_ids.append(source)
            key = (source_index[source], int(pixel))
            if key in seen:
                continue
            seen.add(key)
            keys.append(key)
            reflectances.append(training.reflectances[:, column])
            responses.append(training.responses[:, column])

    fractions = {training.provenance.fraction for training in sets}
    provenance = Provenance(
        source_ids=tuple(source_ids),
        fraction=fractions.pop() if len(fractions) == 1 else float('nan'),
        seed=sets[0].provenance.seed,
    )
    return TrainingSet(
        grid=grid,
        reflectances=np.column_stack(reflectances),
        responses=np.column_stack(responses),
        provenance=provenance,
        sample_keys=np.array(keys, dtype=np.int64),
    )
