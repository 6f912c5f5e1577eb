import numpy as np

# stream ids; a recipe seed plus a stream id fully determines every draw
MATERIALS = 0
MATERIAL_FIELD = 1
HIGHLIGHT_POSITIONS = 2
HIGHLIGHT_SHAPES = 3
JITTER = 4


def philox(seed: int, *stream: int) -> np.random.Generator:
    """Philox4x64 generator for ``seed`` and the given stream path"""
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(sequence))
