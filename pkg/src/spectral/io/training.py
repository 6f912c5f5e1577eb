from pathlib import Path
from typing import Union

import numpy as np

from src.spectral.core import WavelengthGrid
from src.spectral.errors import CorruptFile, NotACube, UnsupportedFormat
from src.spectral.estimators import Provenance, TrainingSet
from .binary import BinaryReader, BinaryWriter

PathLike = Union[str, Path]

TRAINING_MAGIC = b'SPTS'
TRAINING_VERSION = 1


def write_training_set(path: PathLike, training: TrainingSet) -> None:
    """SPTS: header, f64 R block, f64 P block, sample keys, provenance strings"""
    n, k = training.reflectances.shape
    m = training.channels
    with open(path, 'wb') as handle:
        writer = BinaryWriter(handle)
        writer.pack('4sHIII', TRAINING_MAGIC, TRAINING_VERSION, n, m, k)
        writer.pack('dd', training.grid.start_nm, training.grid.step_nm)
        writer.array(training.reflectances)
        writer.array(training.responses)
        writer.array(training.sample_keys, np.dtype('<i8'))
        provenance = training.provenance
        writer.pack('dQI', provenance.fraction, provenance.seed, len(provenance.source_ids))
        for source in provenance.source_ids:
            writer.string(source)


def read_training_set(path: PathLike) -> TrainingSet:
    with open(path, 'rb') as handle:
        reader = BinaryReader(handle, str(path))
        magic = handle.read(4)
        if magic != TRAINING_MAGIC:
            raise NotACube(f"{path}: bad magic {magic!r}, expected {TRAINING_MAGIC!r}")
        version, n, m, k = reader.unpack('HIII')
        if version != TRAINING_VERSION:
            raise UnsupportedFormat(f"{path}: training set version {version}")
        start, step = reader.unpack('dd')
        reflectances = reader.array(n * k).reshape(n, k)
        responses = reader.array(m * k).reshape(m, k)
        keys = np.frombuffer(reader.read(k * 2 * 8), dtype='<i8').reshape(k, 2)
        fraction, seed, sources = reader.unpack('dQI')
        source_ids = tuple(reader.string() for _ in range(sources))
        reader.expect_end()
    try:
        return TrainingSet(
            grid=WavelengthGrid(start, step, n),
            reflectances=reflectances,
            responses=responses,
            provenance=Provenance(source_ids=source_ids, fraction=fraction, seed=seed),
            sample_keys=keys,
        )
    except ValueError as e:
        raise CorruptFile(f"{path}: {e}")
