"""Degree of the image by monodromy on linear slices, certified by the trace test.

Everything is tracked in the source: a slice ``A y + b = 0`` of the image
cone pulls back to ``A cone(x) + b = 0`` on X. When the generic fibre of the
cone map on X is positive dimensional, fixed random affine forms in the
source coordinates are added so that the tracked system is square and each
image point keeps finitely many preimages.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Callable

import numpy as np
from scipy.spatial import cKDTree

from .dimension import cone_dim
from .polynomial import ConeMap, Polynomial, PolySystem, ProblemSpec
from .sampler import SourceWitness, random_complex, sample_cone_pairs
from .serialization import decode_array, encode_array, spec_from_json, spec_to_json
from .tracker import DEDUP_TOLERANCE, SliceHomotopy, TrackSettings, random_gamma, track_paths

log = logging.getLogger(__name__)

SLICE_RESIDUAL = 1e-6
SOURCE_RESIDUAL = 1e-8
TRACE_STEP = 0.1
TRACE_TOLERANCE = 1e-6

Progress = Callable[[dict], None]


class DegreeError(RuntimeError):
    pass


@dataclass(frozen=True)
class Slice:
    """``c`` affine-linear forms ``matrix @ y + constants`` with unit coefficient rows."""

    matrix: np.ndarray
    constants: np.ndarray

    @classmethod
    def random(cls, rng: np.random.Generator, c: int, ambient: int) -> Slice:
        A = random_complex(rng, (c, ambient))
        A /= np.linalg.norm(A, axis=1, keepdims=True)
        return cls(A, random_complex(rng, c))

    @classmethod
    def through(cls, rng: np.random.Generator, c: int, point) -> Slice:
        point = np.asarray(point, dtype=complex)
        s = cls.random(rng, c, point.size)
        return cls(s.matrix, -s.matrix @ point)

    def __len__(self) -> int:
        return self.matrix.shape[0]

    @property
    def forms(self) -> list[Polynomial]:
        return [Polynomial.linear(a, b) for a, b in zip(self.matrix, self.constants)]

    def values(self, Y) -> np.ndarray:
        return np.atleast_2d(Y) @ self.matrix.T + self.constants

    def data(self, scale: complex = 1.0) -> tuple[np.ndarray, np.ndarray]:
        return scale * self.matrix, scale * self.constants

    def to_json(self) -> dict:
        return {"matrix": encode_array(self.matrix), "constants": encode_array(self.constants)}

    @classmethod
    def from_json(cls, data: dict) -> Slice:
        return cls(decode_array(data["matrix"]), decode_array(data["constants"]))


@dataclass
class PseudoWitnessSet:
    spec: ProblemSpec
    cone: ConeMap
    slice: Slice
    extra: Slice | None
    source_points: np.ndarray
    image_points: np.ndarray
    is_complete: bool = False
    loop_log: list[int] = field(default_factory=list)
    trace_tests_failed: int = 0

    @property
    def degree(self) -> int:
        return len(self.image_points)

    @property
    def cone_dim(self) -> int:
        return len(self.slice)

    @cached_property
    def _ideal(self) -> PolySystem | None:
        return PolySystem(self.cone.ideal, self.cone.cone_source_dim) if self.cone.ideal else None

    @cached_property
    def _cone(self) -> PolySystem:
        return PolySystem(self.cone.map.components)

    def image(self, X) -> np.ndarray:
        return self._cone.values(X)

    def homotopy(self, start, target) -> SliceHomotopy:
        extra = None if self.extra is None else self.extra.data()
        return SliceHomotopy(self.cone.cone_source_dim, self._ideal, self._cone, start, target, extra)

    def bezout_bound(self) -> int:
        ideal = prod(g.degree for g in self.cone.ideal)
        return ideal * max(c.degree for c in self.cone.map.components) ** self.cone_dim

    def valid_endpoints(self, results, slice_: Slice | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Keep successful endpoints that sit on X and on ``slice_``; returns (mask, X, Y)."""
        slice_ = slice_ or self.slice
        X = np.array([r.coordinates for r in results]).reshape(len(results), self.cone.cone_source_dim)
        ok = np.array([r.success for r in results], dtype=bool)
        if not len(results):
            return ok, X, np.zeros((0, self.cone.target_dim), dtype=complex)
        Y = self.image(X)
        if self._ideal is not None:
            ok &= np.max(np.abs(self._ideal.values(X)), axis=1) <= SOURCE_RESIDUAL
        ok &= np.max(np.abs(slice_.values(Y)), axis=1) <= SLICE_RESIDUAL
        return ok, X, Y

    def to_json(self) -> dict:
        return {
            "problem": spec_to_json(self.spec),
            "slice": self.slice.to_json(),
            "extra": None if self.extra is None else self.extra.to_json(),
            "source_points": encode_array(self.source_points),
            "image_points": encode_array(self.image_points),
            "degree": self.degree,
            "is_complete": self.is_complete,
            "loop_log": list(self.loop_log),
            "trace_tests_failed": self.trace_tests_failed,
        }

    @classmethod
    def from_json(cls, data: dict) -> PseudoWitnessSet:
        from .polynomial import make_cone_map

        spec = spec_from_json(data["problem"])
        cone = make_cone_map(spec)
        src = decode_array(data["source_points"]).reshape(-1, cone.cone_source_dim)
        img = decode_array(data["image_points"]).reshape(-1, cone.target_dim)
        extra = None if data.get("extra") is None else Slice.from_json(data["extra"])
        pws = cls(spec, cone, Slice.from_json(data["slice"]), extra, src, img,
                  bool(data["is_complete"]), list(data.get("loop_log", [])), int(data.get("trace_tests_failed", 0)))
        if data.get("degree", pws.degree) != pws.degree:
            raise ValueError("witness file degree disagrees with its point count")
        return pws


def new_points(known: np.ndarray, candidates: np.ndarray, tol: float = DEDUP_TOLERANCE) -> np.ndarray:
    """Indices of candidates distinct (relative max-norm) from ``known`` and from each other."""
    if not len(candidates):
        return np.zeros(0, dtype=int)

    def embed(Y):
        return np.hstack([Y.real, Y.imag])

    radius = tol * np.maximum(1.0, np.max(np.abs(candidates), axis=1))
    fresh = np.ones(len(candidates), dtype=bool)
    if len(known):
        tree = cKDTree(embed(known))
        hits = tree.query_ball_point(embed(candidates), radius, p=np.inf)
        fresh &= np.array([not h for h in hits], dtype=bool)
    keep: set[int] = set()
    own = cKDTree(embed(candidates))
    for i, near in enumerate(own.query_ball_point(embed(candidates), radius, p=np.inf)):
        if fresh[i] and keep.isdisjoint(near):
            keep.add(i)
    return np.asarray(sorted(keep), dtype=int)


def initial_witness_pair(
    spec: ProblemSpec,
    w: SourceWitness,
    cone: ConeMap,
    seed=None,
    c: int | None = None,
    threads: int = 1,
) -> PseudoWitnessSet:
    rng = np.random.default_rng(seed)
    if c is None:
        c = cone_dim(spec, w, cone, rng, threads=threads)
    if c < 1:
        raise DegreeError("the image cone has dimension 0; its degree is not defined here")
    n = cone.cone_source_dim
    e = n - len(cone.ideal) - c
    if e < 0:
        raise DegreeError(f"cone dimension {c} exceeds the source dimension {n - len(cone.ideal)}")
    xt, y = sample_cone_pairs(w, cone, 1, rng, threads=threads)
    L0 = Slice.through(rng, c, y[0])
    extra = Slice.through(rng, e, xt[0]) if e else None
    return PseudoWitnessSet(spec, cone, L0, extra, xt, y)


def monodromy_loop(pws: PseudoWitnessSet, seed=None, settings: TrackSettings | None = None, threads: int = 1) -> PseudoWitnessSet:
    """One shared loop ``L0 -> L1 -> L0`` applied to every known pair; new image points are appended."""
    rng = np.random.default_rng(seed)
    if not len(pws.source_points):
        raise DegreeError("empty pseudo-witness set")
    L0 = pws.slice
    L1 = Slice.random(rng, len(L0), pws.cone.target_dim)
    g0, g1 = random_gamma(rng), random_gamma(rng)
    out = track_paths(pws.homotopy(L0.data(), L1.data(g1)), pws.source_points, settings, threads)
    mid = np.array([r.success for r in out], dtype=bool)
    if not mid.all():
        log.debug("%d of %d paths failed on the first half of the loop", (~mid).sum(), len(mid))
    starts = np.array([r.coordinates for r in out])[mid]
    back = track_paths(pws.homotopy(L1.data(), L0.data(g0)), starts, settings, threads)
    ok, X, Y = pws.valid_endpoints(back)
    fresh = new_points(pws.image_points, Y[ok])
    if len(fresh):
        pws.source_points = np.vstack([pws.source_points, X[ok][fresh]])
        pws.image_points = np.vstack([pws.image_points, Y[ok][fresh]])
    pws.loop_log.append(pws.degree)
    return pws


def trace_residual(pws: PseudoWitnessSet, seed=None, settings: TrackSettings | None = None, threads: int = 1) -> float:
    """Relative second difference of the trace under two parallel translates; ``inf`` on tracking failure."""
    rng = np.random.default_rng(seed)
    eps = TRACE_STEP * np.exp(2j * np.pi * rng.random())
    A, b = pws.slice.data()
    traces = [pws.image_points.sum(axis=0)]
    for k in (1, 2):
        shifted = Slice(A, b + k * eps * np.eye(len(b))[0])
        res = track_paths(pws.homotopy((A, b), shifted.data()), pws.source_points, settings, threads)
        ok, _, Y = pws.valid_endpoints(res, shifted)
        if not ok.all():
            return float("inf")
        traces.append(Y.sum(axis=0))
    second = traces[0] - 2 * traces[1] + traces[2]
    scale = max(np.max(np.abs(t)) for t in traces)
    return float(np.max(np.abs(second)) / max(scale, np.finfo(float).tiny))


def trace_test(pws: PseudoWitnessSet, seed=None, settings: TrackSettings | None = None, threads: int = 1) -> bool:
    if not len(pws.source_points):
        raise DegreeError("empty pseudo-witness set")
    return trace_residual(pws, seed, settings, threads) <= TRACE_TOLERANCE


def move_to_slice(pws: PseudoWitnessSet, new: Slice, seed=None, settings: TrackSettings | None = None, threads: int = 1) -> PseudoWitnessSet:
    """Track every pair to ``new`` by a gamma-twisted parameter homotopy."""
    rng = np.random.default_rng(seed)
    gamma = random_gamma(rng)
    res = track_paths(pws.homotopy(pws.slice.data(), new.data(gamma)), pws.source_points, settings, threads)
    ok, X, Y = pws.valid_endpoints(res, new)
    keep = new_points(np.zeros((0, Y.shape[1])), Y[ok])
    pws.slice = new
    pws.source_points = X[ok][keep]
    pws.image_points = Y[ok][keep]
    return pws


def numerical_image_degree(
    spec: ProblemSpec,
    w: SourceWitness,
    cone: ConeMap,
    max_repetitive_monodromies: int = 4,
    max_trace_tests: int = 10,
    seed=None,
    settings: TrackSettings | None = None,
    threads: int = 1,
    progress: Progress | None = None,
    max_loops: int | None = None,
) -> PseudoWitnessSet:
    """Monodromy until ``max_repetitive_monodromies`` loops learn nothing, then the trace test.

    On a failed trace test the points are moved to a fresh slice and
    monodromy resumes; after ``max_trace_tests`` failures the result is
    returned with ``is_complete = False`` and its degree is a lower bound.
    ``max_loops`` caps the total number of loops (the result is then
    incomplete unless a trace test already passed).
    """
    rng = np.random.default_rng(seed)
    emit = progress or (lambda event: None)
    emit({"event": "sampling"})
    pws = initial_witness_pair(spec, w, cone, rng, threads=threads)
    emit({"event": "tracking", "cone_dim": pws.cone_dim})
    stale = 0
    loops = 0
    while True:
        before = pws.degree
        monodromy_loop(pws, rng, settings, threads)
        loops += 1
        emit({"event": "points_found", "count": pws.degree})
        stale = stale + 1 if pws.degree == before else 0
        if max_loops is not None and loops >= max_loops:
            return pws
        if stale < max_repetitive_monodromies:
            continue
        emit({"event": "trace_test", "count": pws.degree})
        if trace_test(pws, rng, settings, threads):
            pws.is_complete = True
            emit({"event": "degree", "degree": pws.degree, "is_complete": True})
            return pws
        pws.trace_tests_failed += 1
        if pws.trace_tests_failed >= max_trace_tests:
            emit({"event": "degree", "degree": pws.degree, "is_complete": False})
            return pws
        move_to_slice(pws, Slice.random(rng, pws.cone_dim, cone.target_dim), rng, settings, threads)
        if not pws.degree:
            fresh = initial_witness_pair(spec, w, cone, rng, c=pws.cone_dim, threads=threads)
            pws.slice, pws.extra = fresh.slice, fresh.extra
            pws.source_points, pws.image_points = fresh.source_points, fresh.image_points
        stale = 0
