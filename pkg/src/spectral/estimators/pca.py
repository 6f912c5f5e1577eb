from typing import Tuple

import numpy as np

from src.spectral.errors import BadBasisCount


def pca_spectrum(reflectances: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvectors and eigenvalues of the uncentered scatter R R^t, decreasing order

    Computed from the SVD of R: the left singular vectors are the scatter
    eigenvectors and the squared singular values its eigenvalues.
    """
    reflectances = np.asarray(reflectances, dtype=np.float64)
    u, s, _ = np.linalg.svd(reflectances, full_matrices=False)
    # largest-magnitude entry of every column is positive
    pivots = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[pivots, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, s ** 2


def pca_basis(reflectances: np.ndarray, d: int) -> np.ndarray:
    """N x d orthonormal basis of the top-d scatter eigenvectors"""
    reflectances = np.asarray(reflectances, dtype=np.float64)
    if reflectances.ndim != 2:
        raise ValueError(f"Reflectances must be an N x k matrix, got shape {reflectances.shape}")
    n, k = reflectances.shape
    if not 1 <= d <= min(n, k):
        raise BadBasisCount(f"Basis count {d} outside [1, {min(n, k)}] for a {n} x {k} training matrix")
    vectors, _ = pca_spectrum(reflectances)
    return np.ascontiguousarray(vectors[:, :d])


def explained_scatter(reflectances: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Scatter captured by each basis column: ||v_i^t R||^2"""
    return np.sum((basis.T @ reflectances) ** 2, axis=1)
