from dataclasses import dataclass
from typing import Sequence

import numpy as np

NOISE_KINDS = ('none', 'additive_gaussian')


@dataclass(frozen=True)
class NoiseModel:
    """Additive sensor noise; draws are keyed by (seed, call counter)"""
    kind: str = 'none'
    sigma: Sequence[float] = (0.0, 0.0, 0.0)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"Unknown noise kind '{self.kind}', expected one of {NOISE_KINDS}")
        sigma = np.array(self.sigma, dtype=np.float64)
        if sigma.ndim != 1 or np.any(sigma < 0) or not np.all(np.isfinite(sigma)):
            raise ValueError(f"sigma must be a vector of finite values >= 0, got {self.sigma}")
        if self.kind == 'none' and np.any(sigma != 0):
            raise ValueError("Noise kind 'none' requires all sigma to be zero")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        sigma.setflags(write=False)
        object.__setattr__(self, 'sigma', sigma)
        object.__setattr__(self, 'seed', int(self.seed))

    @classmethod
    def none(cls, channels: int = 3) -> 'NoiseModel':
        return cls('none', (0.0,) * channels, 0)

    @classmethod
    def gaussian(cls, sigma: Sequence[float], seed: int = 0) -> 'NoiseModel':
        return cls('additive_gaussian', tuple(sigma), seed)

    @property
    def enabled(self) -> bool:
        return self.kind != 'none' and bool(np.any(self.sigma > 0))

    def autocorrelation(self) -> np.ndarray:
        """Noise autocorrelation matrix, diag(sigma^2)"""
        return np.diag(self.sigma ** 2)

    def draw(self, counter: int, size: int = 1) -> np.ndarray:
        """``size`` x M noise vectors for consecutive counters starting at ``counter``

        Each counter gets its own Philox stream spawned from the seed, so the
        draw for a counter does not depend on which thread asks for it or in
        which order.
        """
        channels = self.sigma.shape[0]
        if not self.enabled:
            return np.zeros((size, channels))
        if counter < 0:
            raise ValueError(f"counter must be >= 0, got {counter}")
        out = np.empty((size, channels))
        for offset in range(size):
            sequence = np.random.SeedSequence(self.seed, spawn_key=(counter + offset,))
            out[offset] = np.random.Generator(np.random.Philox(sequence)).standard_normal(channels)
        return out * self.sigma
