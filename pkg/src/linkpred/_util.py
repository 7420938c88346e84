"""Small shared numeric helpers."""

from __future__ import annotations

import numpy as np


def mirror_upper(matrix: np.ndarray) -> np.ndarray:
    """Copy the strict upper triangle onto the lower one, in place.

    Guarantees bitwise symmetry regardless of how the entries were produced.
    """
    lower = np.tril_indices(matrix.shape[0], -1)
    matrix[lower] = matrix.T[lower]
    return matrix


def sup_norm_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Largest absolute entrywise difference between two matrices."""
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))
