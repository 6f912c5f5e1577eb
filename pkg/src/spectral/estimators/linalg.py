import numpy as np

from src.spectral.errors import SingularSystem

PINV_RCOND = 1e-10


def pinv(matrix: np.ndarray) -> np.ndarray:
    """Moore-Penrose pseudoinverse; singular values below 1e-10 * s_max count as zero"""
    return np.linalg.pinv(np.asarray(matrix, dtype=np.float64), rcond=PINV_RCOND)


def condition_number(matrix: np.ndarray) -> float:
    s = np.linalg.svd(np.asarray(matrix, dtype=np.float64), compute_uv=False)
    if s.size == 0 or s[-1] == 0:
        return float('inf')
    return float(s[0] / s[-1])


def require_invertible(matrix: np.ndarray, what: str, hint: str = '') -> None:
    """Raise SingularSystem when a square matrix is numerically rank deficient"""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape[0] != matrix.shape[1]:
        raise SingularSystem(f"{what} is not square: {matrix.shape}")
    rank = np.linalg.matrix_rank(matrix)
    if rank < matrix.shape[0]:
        message = f"{what} is singular (rank {rank} of {matrix.shape[0]})"
        if hint:
            message = f"{message}; {hint}"
        raise SingularSystem(message)


def solve_right(lhs: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """lhs . matrix^-1 for a square invertible ``matrix``"""
    return np.linalg.solve(matrix.T, lhs.T).T
