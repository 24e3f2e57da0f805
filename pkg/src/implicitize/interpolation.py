"""Hilbert function values and implicit equations by interpolation.

For a degree ``d`` the interpolation matrix has one row per general cone
point and one column per degree-``d`` monomial in the cone coordinates. Its
numerical kernel is the degree-``d`` part of the image's ideal; with as many
rows as columns the kernel dimension has stabilized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .numlin import DEFAULT_GAP_THRESHOLD, numerical_rank_from_values, precondition_rows
from .polynomial import ConeMap, Polynomial, ProblemSpec, monomial_basis
from .sampler import SourceWitness, numerical_image_sample


def monomial_values(points, d: int) -> np.ndarray:
    """Rows of degree-``d`` monomial values (graded-lex columns) at each point."""
    Y = np.atleast_2d(np.asarray(points, dtype=complex))
    k = Y.shape[1]
    exps = np.array(monomial_basis(d, k), dtype=np.int64)
    # bring every point to unit max-norm first; rows get renormalized anyway
    scale = np.max(np.abs(Y), axis=1, keepdims=True)
    Y = Y / np.where(scale > 0, scale, 1.0)
    powers = np.ones((Y.shape[0], k, d + 1), dtype=complex)
    for e in range(1, d + 1):
        powers[:, :, e] = powers[:, :, e - 1] * Y
    M = np.ones((Y.shape[0], len(exps)), dtype=complex)
    for j in range(k):
        M *= powers[:, j, exps[:, j]]
    return M


def build_interpolation_matrix(points, d: int) -> np.ndarray:
    pts = [np.asarray(p, dtype=complex) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    if len({p.shape for p in pts}) != 1 or pts[0].ndim != 1:
        raise ValueError("points must share one dimension")
    return precondition_rows(monomial_values(np.array(pts), d))


@dataclass
class NumericalInterpolationTable:
    degree_argument: int
    num_monomials: int
    hilbert_value: int
    singular_values: np.ndarray
    sample_points: np.ndarray
    interpolation_matrix: np.ndarray = field(repr=False)
    right_singular_vectors: np.ndarray = field(repr=False)
    threshold: float = DEFAULT_GAP_THRESHOLD

    def to_json(self, include_matrix: bool = False) -> dict:
        from .serialization import encode_array

        out = {
            "degree": self.degree_argument,
            "num_monomials": self.num_monomials,
            "hilbert_value": self.hilbert_value,
            "threshold": self.threshold,
            "singular_values": [float(s) for s in self.singular_values],
            "points": encode_array(self.sample_points),
        }
        if include_matrix:
            out["matrix"] = encode_array(self.interpolation_matrix)
        return out


def interpolation_table(points: np.ndarray, d: int, threshold: float = DEFAULT_GAP_THRESHOLD) -> NumericalInterpolationTable:
    A = build_interpolation_matrix(points, d)
    _, s, Vh = np.linalg.svd(A)
    h = A.shape[1] - numerical_rank_from_values(s, threshold)
    return NumericalInterpolationTable(d, A.shape[1], h, s, np.asarray(points), A, Vh.conj().T, threshold)


def numerical_hilbert_function(
    spec: ProblemSpec,
    w: SourceWitness,
    cone: ConeMap,
    d: int,
    threshold: float = DEFAULT_GAP_THRESHOLD,
    seed=None,
    threads: int = 1,
) -> NumericalInterpolationTable:
    if d < 0:
        raise ValueError("degree argument must be nonnegative")
    N = comb(cone.target_dim - 1 + d, d)
    points = numerical_image_sample(w, cone, N, seed, threads=threads)
    return interpolation_table(points, d, threshold)


def extract_image_equations(t: NumericalInterpolationTable) -> list[np.ndarray]:
    """Unit coefficient vectors (graded-lex monomial order) spanning the kernel."""
    if t.hilbert_value == 0:
        return []
    V = t.right_singular_vectors
    return [V[:, j].copy() for j in range(V.shape[1] - t.hilbert_value, V.shape[1])]


def equation_polynomial(coefficients, d: int, num_vars: int) -> Polynomial:
    return Polynomial(dict(zip(monomial_basis(d, num_vars), coefficients)), num_vars)


def equation_residuals(coefficients, points, d: int) -> np.ndarray:
    """|form(p)| at each point, with each point's monomial row at unit norm."""
    rows = precondition_rows(monomial_values(points, d))
    return np.abs(rows @ np.asarray(coefficients))
