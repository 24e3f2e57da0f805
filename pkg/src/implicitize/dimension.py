"""Dimension of the image via tangent-space kernels at a general point."""

from __future__ import annotations

import numpy as np

from .numlin import DEFAULT_GAP_THRESHOLD, numerical_kernel_dim, precondition_rows
from .polynomial import PolySystem, ProblemSpec
from .sampler import SourceWitness, numerical_source_sample


class DimensionError(RuntimeError):
    pass


def tangent_space_dim(generators, x, threshold: float = DEFAULT_GAP_THRESHOLD, num_vars: int | None = None) -> int:
    """``n`` minus the numerical rank of Jac(I) at ``x``; an empty ideal gives ``n``."""
    x = np.asarray(x, dtype=complex)
    n = num_vars or x.size
    if not len(generators):
        return n
    J = PolySystem(generators, n).jacobian(x)[0]
    return numerical_kernel_dim(precondition_rows(J), threshold)


def _dim_at(spec: ProblemSpec, x: np.ndarray, threshold: float) -> int:
    n = spec.num_vars
    JF = PolySystem(spec.map.components, n).jacobian(x)[0]
    if spec.ideal_generators:
        JI = PolySystem(spec.ideal_generators, n).jacobian(x)[0]
    else:
        JI = np.zeros((0, n), dtype=complex)
    tangent = numerical_kernel_dim(precondition_rows(JI), threshold) if len(JI) else n
    fiber = numerical_kernel_dim(precondition_rows(np.vstack([JI, JF])), threshold)
    return tangent - fiber


def numerical_image_dim(spec: ProblemSpec, w: SourceWitness, seed=None, threshold: float = DEFAULT_GAP_THRESHOLD, threads: int = 1) -> int:
    """dim of the closure of F(X), checked at two independent general points."""
    rng = np.random.default_rng(seed)
    for _ in range(2):
        x1, x2 = numerical_source_sample(w, 2, rng, threads=threads)
        d1, d2 = _dim_at(spec, x1, threshold), _dim_at(spec, x2, threshold)
        if d1 == d2:
            return d1
    raise DimensionError(f"inconsistent image dimensions at independent samples ({d1} vs {d2})")


def cone_dim(spec: ProblemSpec, w: SourceWitness, cone, seed=None, threshold: float = DEFAULT_GAP_THRESHOLD, threads: int = 1) -> int:
    """Dimension of the affine cone over the projective closure of the image."""
    d = numerical_image_dim(spec, w, seed, threshold, threads)
    return d + 1 if cone.augmented else d

