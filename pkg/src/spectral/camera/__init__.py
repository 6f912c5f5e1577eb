from .noise import NoiseModel
from .spec import (
    CameraSpec,
    system_matrix,
    gaussian_camera,
    colorimetric_camera,
    camera_preset,
    CAMERA_PRESETS,
)
from .forward import simulate_response, simulate_responses, render_rgb_cube, RenderResult
from .colour import (
    xyz_from_spectrum,
    xyz_from_cube,
    white_point,
    lab_from_xyz,
    lab_from_spectrum,
    lab_from_cube,
)

__all__ = [
    'NoiseModel',
    'CameraSpec',
    'system_matrix',
    'gaussian_camera',
    'colorimetric_camera',
    'camera_preset',
    'CAMERA_PRESETS',
    'simulate_response',
    'simulate_responses',
    'render_rgb_cube',
    'RenderResult',
    'xyz_from_spectrum',
    'xyz_from_cube',
    'white_point',
    'lab_from_xyz',
    'lab_from_spectrum',
    'lab_from_cube',
]
