from typing import Iterable, Optional


class SpectralError(Exception):
    """Base class for every error raised by the spectral packages"""
    pass


# core / camera

class EmptyTable(SpectralError, ValueError):
    """A tabulated function has no samples"""
    pass


class GridMismatch(SpectralError, ValueError):
    """Two operands live on different wavelength grids"""
    pass


class ShapeMismatch(SpectralError, ValueError):
    """Two images or cubes do not share their spatial shape"""
    pass


# estimators

class BadBasisCount(SpectralError, ValueError):
    """Requested number of basis vectors is out of range"""
    pass


class SingularSystem(SpectralError):
    """A matrix that must be inverted is singular or rank deficient"""
    pass


class EmptyTrainingSet(SpectralError, ValueError):
    """A training bank holds no spectra"""
    pass


class ModelNotFitted(SpectralError):
    """An estimation model lacks the matrices its kind needs"""
    pass


# metrics

class DegenerateSpectrum(SpectralError, ValueError):
    """A spectrum with zero norm was given where a direction is needed"""
    pass


# training

class EmptySample(SpectralError, ValueError):
    """A sampling fraction selects no pixels"""
    pass


# pipeline

class BadPixelValue(SpectralError, ValueError):
    """Raw pixel values exceed the declared bit depth"""
    pass


class FrameError(SpectralError):
    """Estimation failed for one frame of a video"""

    def __init__(self, frame_index: int, cause: Exception):
        self.frame_index = frame_index
        self.cause = cause
        super().__init__(f"Frame {frame_index}: {cause}")


# io

class NotACube(SpectralError):
    """File does not start with the spectral cube magic"""
    pass


class CorruptFile(SpectralError):
    """File structure is inconsistent with its header"""
    pass


class UnsupportedFormat(SpectralError):
    """File is valid but uses a variant this package does not read"""
    pass


# configuration

class ConfigError(SpectralError, ValueError):
    """Invalid or incomplete run configuration"""
    pass


class PriorKnowledgeMissing(ConfigError):
    """An estimation method was requested without the inputs it needs"""

    def __init__(self, method: str, missing: Iterable[str], hint: Optional[str] = None):
        self.method = method
        self.missing = list(missing)
        message = f"Method '{method}' requires {', '.join(self.missing)}"
        if hint:
            message = f"{message} ({hint})"
        super().__init__(message)
