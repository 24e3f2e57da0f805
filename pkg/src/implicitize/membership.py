"""Point membership in F(X) by parameter homotopy from a pseudo-witness set."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .monodromy import PseudoWitnessSet, Slice
from .tracker import DEDUP_TOLERANCE, SINGULAR_ENDPOINT, TrackSettings, random_gamma, track_paths

log = logging.getLogger(__name__)

MATCH_TOLERANCE = DEDUP_TOLERANCE


class IncompleteWitnessError(ValueError):
    pass


@dataclass(frozen=True)
class MembershipResult:
    on_image: bool
    distance: float  # relative max-norm distance to the nearest endpoint image
    failed_paths: int
    singular_paths: int

    @property
    def complete(self) -> bool:
        return self.failed_paths == 0


def lift_query(pws: PseudoWitnessSet, y) -> np.ndarray:
    y = np.asarray(y, dtype=complex).ravel()
    M = pws.cone.target_dim
    if pws.cone.augmented:
        if y.size == M - 1:
            return np.concatenate([[1.0], y])
        raise ValueError(f"query point has {y.size} coordinates, expected {M - 1}")
    if y.size != M:
        raise ValueError(f"query point has {y.size} coordinates, expected {M}")
    return y


def membership(pws: PseudoWitnessSet, y, tolerance: float = MATCH_TOLERANCE, seed=None,
               settings: TrackSettings | None = None, threads: int = 1) -> MembershipResult:
    if not pws.is_complete:
        raise IncompleteWitnessError("membership needs a pseudo-witness set that passed the trace test")
    rng = np.random.default_rng(seed)
    target = lift_query(pws, y)
    Ly = Slice.through(rng, pws.cone_dim, target)
    gamma = random_gamma(rng)
    res = track_paths(pws.homotopy(pws.slice.data(), Ly.data(gamma)), pws.source_points, settings, threads)
    ok, _, Y = pws.valid_endpoints(res, Ly)
    failed = int((~ok).sum())
    singular = sum(r.status == SINGULAR_ENDPOINT for r in res)
    if failed:
        log.warning("%d of %d membership paths failed; the answer may be incomplete", failed, len(res))
    if ok.any():
        scale = max(1.0, float(np.max(np.abs(target))))
        dist = float(np.min(np.max(np.abs(Y[ok] - target), axis=1))) / scale
    else:
        dist = float("inf")
    return MembershipResult(dist <= tolerance, dist, failed, singular)


def is_on_image(pws: PseudoWitnessSet, y, tolerance: float = MATCH_TOLERANCE, seed=None,
                settings: TrackSettings | None = None, threads: int = 1) -> bool:
    """Whether ``y`` lies in F(X) (up to ``tolerance`` in relative max-norm)."""
    return membership(pws, y, tolerance, seed, settings, threads).on_image
