from .cube import CubeFileHeader, read_cube, read_cube_header, write_cube, read_map, write_map
from .spectra_csv import read_spectra_csv, write_spectra_csv
from .ppm import read_ppm, read_ppm_raw, write_ppm, write_ppm_raw, write_band_view, quantize
from .video import (
    RawVideoHeader,
    SpectralVideoHeader,
    SpectralVideoWriter,
    iter_raw_frames,
    iter_spectral_frames,
    read_raw_header,
    read_spectral_header,
    read_spectral_video,
    write_raw_video,
    write_spectral_video,
)
from .training import read_training_set, write_training_set
from .model import read_model, write_model
from .camera import format_camera_spec, parse_camera_spec, read_camera_spec, write_camera_spec
from .reports import parse_report, render_report, write_report

__all__ = [
    'CubeFileHeader',
    'read_cube',
    'read_cube_header',
    'write_cube',
    'read_map',
    'write_map',
    'read_spectra_csv',
    'write_spectra_csv',
    'read_ppm',
    'read_ppm_raw',
    'write_ppm',
    'write_ppm_raw',
    'write_band_view',
    'quantize',
    'RawVideoHeader',
    'SpectralVideoHeader',
    'SpectralVideoWriter',
    'iter_raw_frames',
    'iter_spectral_frames',
    'read_raw_header',
    'read_spectral_header',
    'read_spectral_video',
    'write_raw_video',
    'write_spectral_video',
    'read_training_set',
    'write_training_set',
    'read_model',
    'write_model',
    'format_camera_spec',
    'parse_camera_spec',
    'read_camera_spec',
    'write_camera_spec',
    'parse_report',
    'render_report',
    'write_report',
]
