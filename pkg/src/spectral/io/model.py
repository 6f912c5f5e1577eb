import json
from pathlib import Path
from typing import Union

from src.spectral.core import WavelengthGrid
from src.spectral.errors import CorruptFile, NotACube, UnsupportedFormat
from src.spectral.estimators import EstimationModel, EstimatorKind, PolyCombo, ShiHealeyBank
from .binary import BinaryReader, BinaryWriter

PathLike = Union[str, Path]

MODEL_MAGIC = b'SPEM'
MODEL_VERSION = 1

# matrices stored per kind, in file order
_MATRICES = {
    EstimatorKind.WIENER_PRIOR: ('W',),
    EstimatorKind.WIENER_DATA: ('W',),
    EstimatorKind.PSEUDOINVERSE: ('W',),
    EstimatorKind.LINEAR: ('V', 'lam'),
    EstimatorKind.IMAI_BERNS: ('V', 'D'),
    EstimatorKind.SHI_HEALEY: (),
}


def write_model(path: PathLike, model: EstimationModel) -> None:
    model.require_fitted()
    with open(path, 'wb') as handle:
        writer = BinaryWriter(handle)
        writer.pack('4sHB', MODEL_MAGIC, MODEL_VERSION, model.kind.code)
        writer.pack('ddI', model.grid.start_nm, model.grid.step_nm, model.grid.count)
        writer.pack('H', model.combo.size)
        for term in model.combo.terms:
            writer.pack('BBB', *term)
        for name in _MATRICES[model.kind]:
            writer.matrix(getattr(model, name))
        if model.kind == EstimatorKind.SHI_HEALEY:
            bank = model.bank
            low, high = bank.d_range or (0, 0)
            writer.pack('III', bank.d, low, high)
            writer.matrix(bank.Q)
            writer.matrix(bank.basis)
            writer.pack('I', bank.k)
            writer.matrix(bank.reflectances)
        writer.string(json.dumps(model.info, sort_keys=True))


def read_model(path: PathLike) -> EstimationModel:
    with open(path, 'rb') as handle:
        reader = BinaryReader(handle, str(path))
        magic = handle.read(4)
        if magic != MODEL_MAGIC:
            raise NotACube(f"{path}: bad magic {magic!r}, expected {MODEL_MAGIC!r}")
        version, code = reader.unpack('HB')
        if version != MODEL_VERSION:
            raise UnsupportedFormat(f"{path}: model version {version}")
        try:
            kind = EstimatorKind.from_code(code)
        except IndexError:
            raise CorruptFile(f"{path}: unknown estimator kind code {code}")
        start, step, count = reader.unpack('ddI')
        (term_count,) = reader.unpack('H')
        terms = tuple(reader.unpack('BBB') for _ in range(term_count))
        fields = {name: reader.matrix() for name in _MATRICES[kind]}

        if kind == EstimatorKind.SHI_HEALEY:
            d, low, high = reader.unpack('III')
            q = reader.matrix()
            basis = reader.matrix()
            (k,) = reader.unpack('I')
            reflectances = reader.matrix()
            if reflectances.shape[1] != k:
                raise CorruptFile(f"{path}: bank declares k={k} but holds {reflectances.shape[1]} spectra")
            fields['bank'] = ShiHealeyBank(
                reflectances=reflectances,
                basis=basis,
                Q=q,
                d=d,
                d_range=(low, high) if high else None,
            )
        info = json.loads(reader.string())
        reader.expect_end()

    try:
        return EstimationModel(
            kind=kind,
            grid=WavelengthGrid(start, step, count),
            combo=PolyCombo(terms),
            info=info,
            **fields,
        )
    except ValueError as e:
        raise CorruptFile(f"{path}: {e}")
