"""General points on the source variety X and on the image cone.

When ``I = 0`` samples are random tuples. Otherwise X (a complete
intersection) is cut by random affine hyperplanes, the square system is
solved once by a total-degree homotopy, and each further sample comes from
moving one cached witness point to a fresh random slice.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .numlin import numerical_kernel_dim
from .polynomial import ConeMap, Polynomial, PolySystem, ProblemSpec
from .tracker import SliceHomotopy, TrackSettings, random_gamma, solve_total_degree, track_paths

log = logging.getLogger(__name__)

SAMPLE_RESIDUAL = 1e-8
MAX_SLICE_RETRIES = 5


class SamplingError(RuntimeError):
    pass


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-circle phases times moduli uniform in [0.5, 1.5]."""
    modulus = rng.uniform(0.5, 1.5, size=shape)
    return modulus * np.exp(2j * np.pi * rng.random(size=shape))


@dataclass
class SourceWitness:
    """A witness set for X, or the trivial witness when I = 0."""

    spec: ProblemSpec
    source_dim: int
    slice_matrix: np.ndarray | None
    slice_constants: np.ndarray | None
    points: np.ndarray

    @property
    def trivial(self) -> bool:
        return self.slice_matrix is None

    @property
    def slice(self) -> list[Polynomial]:
        if self.trivial:
            return []
        return [Polynomial.linear(a, b) for a, b in zip(self.slice_matrix, self.slice_constants)]

    def ideal_system(self) -> PolySystem | None:
        gens = self.spec.ideal_generators
        return PolySystem(gens, self.spec.num_vars) if gens else None


def build_source_witness(spec: ProblemSpec, seed=None, settings: TrackSettings | None = None, threads: int = 1) -> SourceWitness:
    n = spec.num_vars
    gens = list(spec.ideal_generators)
    if not gens:
        return SourceWitness(spec, n, None, None, np.zeros((0, n), dtype=complex))
    rng = np.random.default_rng(seed)
    r = len(gens)
    if r > n:
        raise SamplingError(f"{r} generators in {n} variables cannot cut a complete intersection")
    k = n - r
    S = random_complex(rng, (k, n))
    s0 = random_complex(rng, k)
    system = gens + [Polynomial.linear(a, b) for a, b in zip(S, s0)]
    results = solve_total_degree(system, settings, rng, threads)
    ideal = PolySystem(gens, n)
    keep = []
    for tp in results:
        x = tp.coordinates
        if np.max(np.abs(ideal.values(x))) > SAMPLE_RESIDUAL:
            continue
        if numerical_kernel_dim(ideal.jacobian(x)[0]) != k:
            log.debug("dropping witness point with deficient Jacobian rank")
            continue
        keep.append(x)
    if not keep:
        raise SamplingError(
            "no regular witness point found; is the ideal really a complete intersection "
            f"of codimension {r}? (Jacobian rank check failed on {len(results)} endpoints)"
        )
    return SourceWitness(spec, k, S, s0, np.array(keep))


def numerical_source_sample(
    w: SourceWitness, count: int, seed=None, settings: TrackSettings | None = None, threads: int = 1
) -> np.ndarray:
    """``count`` general points of X, one per row."""
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    n = w.spec.num_vars
    if w.trivial:
        return random_complex(rng, (count, n))
    ideal = w.ideal_system()
    k = w.source_dim
    out = np.zeros((count, n), dtype=complex)
    todo = np.arange(count)
    for attempt in range(MAX_SLICE_RETRIES + 1):
        S = random_complex(rng, (todo.size, k, n))
        s0 = random_complex(rng, (todo.size, k))
        gam = np.exp(2j * np.pi * rng.random(todo.size))
        starts = w.points[todo % len(w.points)]
        h = SliceHomotopy(
            n,
            ideal,
            None,
            (w.slice_matrix, w.slice_constants),
            (gam[:, None, None] * S, gam[:, None] * s0),
        )
        results = track_paths(h, starts, settings, threads)
        ok = np.array(
            [r.success and np.max(np.abs(ideal.values(r.coordinates))) <= SAMPLE_RESIDUAL for r in results]
        )
        for j in np.nonzero(ok)[0]:
            out[todo[j]] = results[j].coordinates
        todo = todo[~ok]
        if not todo.size:
            return out
        log.debug("retrying %d samples with fresh slices (attempt %d)", todo.size, attempt + 1)
    raise SamplingError(f"{todo.size} samples failed after {MAX_SLICE_RETRIES} fresh slices")


def sample_cone_pairs(
    w: SourceWitness, cone: ConeMap, count: int, seed=None, settings: TrackSettings | None = None, threads: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Cone-source points and their images under the cone map."""
    rng = np.random.default_rng(seed)
    x = numerical_source_sample(w, count, rng, settings, threads)
    lam = random_complex(rng, count) if cone.augmented else None
    xt = cone.lift(x, lam)
    return xt, PolySystem(cone.map.components).values(xt)


def numerical_image_sample(
    w: SourceWitness, cone: ConeMap, count: int, seed=None, settings: TrackSettings | None = None, threads: int = 1
) -> np.ndarray:
    """``count`` general points on the affine cone over the image closure."""
    return sample_cone_pairs(w, cone, count, seed, settings, threads)[1]
