from pathlib import Path
from typing import List, Union

import numpy as np

from src.spectral.camera import CameraSpec, NoiseModel
from src.spectral.core import WavelengthGrid
from src.spectral.errors import CorruptFile, UnsupportedFormat

PathLike = Union[str, Path]

CAMSPEC_HEADER = 'CAMSPEC 1'


def _numbers(values) -> str:
    return ' '.join(f"{float(v):.17g}" for v in values)


def format_camera_spec(camera: CameraSpec) -> str:
    grid = camera.grid
    lines = [
        CAMSPEC_HEADER,
        f"grid {grid.start_nm:.17g} {grid.step_nm:.17g} {grid.count}",
        f"illuminant {_numbers(camera.illuminant)}",
    ]
    for index, row in enumerate(camera.sensitivities):
        lines.append(f"channel {index} {_numbers(row)}")
    if camera.noise.kind == 'additive_gaussian':
        lines.append(f"noise gaussian {_numbers(camera.noise.sigma)} seed {camera.noise.seed}")
    return '\n'.join(lines) + '\n'


def write_camera_spec(path: PathLike, camera: CameraSpec) -> None:
    Path(path).write_text(format_camera_spec(camera), encoding='utf-8')


def _floats(tokens: List[str], where: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as e:
        raise CorruptFile(f"{where}: {e}")


def parse_camera_spec(text: str, name: str = '<camspec>') -> CameraSpec:
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines or ' '.join(lines[0]) != CAMSPEC_HEADER:
        raise UnsupportedFormat(f"{name}: expected '{CAMSPEC_HEADER}' header")

    grid, illuminant, noise = None, None, None
    channels = {}
    for number, tokens in enumerate(lines[1:], start=2):
        where = f"{name}:{number}"
        keyword, rest = tokens[0], tokens[1:]
        if keyword == 'grid':
            if len(rest) != 3:
                raise CorruptFile(f"{where}: grid needs start, step and count")
            try:
                grid = WavelengthGrid(float(rest[0]), float(rest[1]), int(rest[2]))
            except ValueError as e:
                raise CorruptFile(f"{where}: {e}")
        elif keyword == 'illuminant':
            illuminant = _floats(rest, where)
        elif keyword == 'channel':
            if not rest or not rest[0].isdigit():
                raise CorruptFile(f"{where}: channel needs an index")
            channels[int(rest[0])] = _floats(rest[1:], where)
        elif keyword == 'noise':
            if len(rest) < 3 or rest[0] != 'gaussian' or rest[-2] != 'seed':
                raise CorruptFile(f"{where}: expected 'noise gaussian <sigma...> seed <u64>'")
            try:
                noise = NoiseModel.gaussian(_floats(rest[1:-2], where), int(rest[-1]))
            except ValueError as e:
                raise CorruptFile(f"{where}: {e}")
        else:
            raise CorruptFile(f"{where}: unknown keyword '{keyword}'")

    if grid is None or illuminant is None or not channels:
        raise CorruptFile(f"{name}: grid, illuminant and at least one channel are required")
    if sorted(channels) != list(range(len(channels))):
        raise CorruptFile(f"{name}: channel indices must be 0..{len(channels) - 1}")
    if len({c.size for c in channels.values()}) != 1:
        raise CorruptFile(f"{name}: channels have different lengths")
    sensitivities = np.vstack([channels[i] for i in range(len(channels))])
    try:
        return CameraSpec(grid, sensitivities, illuminant, noise or NoiseModel.none(len(channels)))
    except ValueError as e:
        raise CorruptFile(f"{name}: {e}")


def read_camera_spec(path: PathLike) -> CameraSpec:
    return parse_camera_spec(Path(path).read_text(encoding='utf-8'), str(path))
