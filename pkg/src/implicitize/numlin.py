"""Dense complex linear algebra: SVD, gap-rule numerical rank, row scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_GAP_THRESHOLD = 200.0
# singular values below this fraction of the largest are always zero
ABSOLUTE_FLOOR = 1e-14


@dataclass(frozen=True)
class SVDResult:
    singular_values: np.ndarray
    right_singular_vectors: np.ndarray  # columns, paired with singular_values
    left_singular_vectors: np.ndarray | None = None


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def svd(m) -> SVDResult:
    """Full SVD of ``m``; raises ``numpy.linalg.LinAlgError`` on non-convergence."""
    m = _as_matrix(m)
    if 0 in m.shape:
        raise ValueError("svd needs at least one row and one column")
    U, s, Vh = np.linalg.svd(m, full_matrices=True)
    return SVDResult(s, Vh.conj().T, U)


def numerical_rank_from_values(singular_values, gap_threshold: float = DEFAULT_GAP_THRESHOLD) -> int:
    """Rank implied by a descending list of singular values.

    Everything after the largest ratio ``s[i]/s[i+1]`` exceeding
    ``gap_threshold`` is zero, as is anything below ``ABSOLUTE_FLOOR * s[0]``.
    """
    if gap_threshold <= 1:
        raise ValueError("gap_threshold must exceed 1")
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0 or s[0] == 0:
        return 0
    floor_rank = int(np.count_nonzero(s > ABSOLUTE_FLOOR * s[0]))
    gap_rank = s.size
    if s.size > 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(s[1:] > 0, s[:-1] / np.where(s[1:] > 0, s[1:], 1.0), np.inf)
        i = int(np.argmax(ratios))
        if ratios[i] > gap_threshold:
            gap_rank = i + 1
    return min(gap_rank, floor_rank)


def numerical_kernel_dim(m, gap_threshold: float = DEFAULT_GAP_THRESHOLD) -> int:
    m = _as_matrix(m)
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return cols
    s = np.linalg.svd(m, compute_uv=False)
    return cols - numerical_rank_from_values(s, gap_threshold)


def precondition_rows(m) -> np.ndarray:
    """Scale each nonzero row to unit Euclidean norm."""
    m = _as_matrix(m)
    norms = np.linalg.norm(m, axis=1)
    scale = np.where(norms > 0, norms, 1.0)
    return m / scale[:, None]
