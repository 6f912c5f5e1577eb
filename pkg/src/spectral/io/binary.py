import struct
from typing import BinaryIO, Tuple

import numpy as np

from src.spectral.errors import CorruptFile

F64 = np.dtype('<f8')
F32 = np.dtype('<f4')


class BinaryWriter:
    """Little-endian record writer over an open binary file"""

    def __init__(self, handle: BinaryIO):
        self.handle = handle

    def pack(self, fmt: str, *values) -> None:
        self.handle.write(struct.pack('<' + fmt, *values))

    def string(self, text: str) -> None:
        data = text.encode('utf-8')
        self.pack('I', len(data))
        self.handle.write(data)

    def array(self, values: np.ndarray, dtype: np.dtype = F64) -> None:
        self.handle.write(np.ascontiguousarray(values, dtype=dtype).tobytes())

    def matrix(self, values: np.ndarray) -> None:
        """u32 rows, u32 cols, then f64 row-major"""
        values = np.atleast_2d(np.asarray(values, dtype=np.float64))
        self.pack('II', *values.shape)
        self.array(values)


class BinaryReader:
    def __init__(self, handle: BinaryIO, name: str = '<stream>'):
        self.handle = handle
        self.name = name

    def read(self, size: int) -> bytes:
        data = self.handle.read(size)
        if len(data) != size:
            raise CorruptFile(f"{self.name}: truncated, wanted {size} bytes, got {len(data)}")
        return data

    def unpack(self, fmt: str) -> Tuple:
        fmt = '<' + fmt
        return struct.unpack(fmt, self.read(struct.calcsize(fmt)))

    def string(self) -> str:
        (length,) = self.unpack('I')
        try:
            return self.read(length).decode('utf-8')
        except UnicodeDecodeError as e:
            raise CorruptFile(f"{self.name}: bad string: {e}")

    def array(self, count: int, dtype: np.dtype = F64) -> np.ndarray:
        return np.frombuffer(self.read(count * dtype.itemsize), dtype=dtype).astype(np.float64)

    def matrix(self) -> np.ndarray:
        rows, cols = self.unpack('II')
        return self.array(rows * cols).reshape(rows, cols)

    def expect_end(self) -> None:
        if self.handle.read(1):
            raise CorruptFile(f"{self.name}: trailing bytes after payload")
