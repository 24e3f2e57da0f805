"""Predictor-corrector path tracking.

Paths are tracked in batches: every active path carries its own ``t`` and
step size, and each sweep does one Euler prediction plus a few Newton
corrections for all of them at once. Batch composition never changes the
arithmetic done for an individual path, so results do not depend on how
start points are grouped.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polynomial import Polynomial, PolySystem, total_degree_roots

log = logging.getLogger(__name__)

SUCCESS = "success"
DIVERGED = "diverged"
SINGULAR_ENDPOINT = "singular_endpoint"
STEP_UNDERFLOW = "step_underflow"

DEDUP_TOLERANCE = 1e-6


class TrackingError(RuntimeError):
    """Raised when no path of a solve reaches a regular endpoint."""


class SingularJacobianError(ArithmeticError):
    """Raised when Newton's method meets a numerically singular Jacobian."""


@dataclass(frozen=True)
class TrackSettings:
    initial_step: float = 0.05
    min_step: float = 1e-7
    max_step: float = 0.1
    corrector_tolerance: float = 1e-8
    max_corrector_iterations: int = 3
    step_increase_factor: float = 2.0
    successes_before_increase: int = 5
    step_decrease_factor: float = 0.5
    endpoint_refinement_tolerance: float = 1e-11
    max_refinement_iterations: int = 8
    divergence_bound: float = 1e8
    success_residual: float = 1e-6
    max_condition: float = 1e12
    max_sweeps: int = 20000

    def __post_init__(self):
        if not 0 < self.min_step < self.initial_step <= 0.1:
            raise ValueError("need 0 < min_step < initial_step <= 0.1")
        if self.corrector_tolerance <= 0 or self.endpoint_refinement_tolerance <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class TrackedPoint:
    coordinates: np.ndarray
    status: str
    residual: float
    raw_residual: float = float("nan")  # before endpoint refinement

    @property
    def success(self) -> bool:
        return self.status == SUCCESS


def batched_solve(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``A[p] x[p] = b[p]``; returns solutions and a mask of the regular systems."""
    P, k = b.shape
    try:
        x = np.linalg.solve(A, b[..., None])[..., 0]
        ok = np.all(np.isfinite(x), axis=1)
        return np.where(ok[:, None], x, 0), ok
    except np.linalg.LinAlgError:
        x = np.zeros_like(b)
        ok = np.zeros(P, dtype=bool)
        for p in range(P):
            try:
                x[p] = np.linalg.solve(A[p], b[p])
                ok[p] = np.all(np.isfinite(x[p]))
            except np.linalg.LinAlgError:
                pass
        return np.where(ok[:, None], x, 0), ok


def _max_norm(X: np.ndarray) -> np.ndarray:
    return np.max(np.abs(X), axis=-1) if X.shape[-1] else np.zeros(X.shape[:-1])


# ---------------------------------------------------------------------------
# homotopies


class Homotopy:
    """Straight-line homotopy ``(1 - t) * gamma * start + t * target``."""

    def __init__(self, start_system: Sequence[Polynomial], target_system: Sequence[Polynomial], gamma: complex):
        if len(start_system) != len(target_system):
            raise ValueError("start and target systems differ in length")
        self.start = start_system if isinstance(start_system, PolySystem) else PolySystem(start_system)
        self.target = target_system if isinstance(target_system, PolySystem) else PolySystem(target_system)
        if self.start.num_vars != self.target.num_vars:
            raise ValueError("start and target systems live in different rings")
        if len(self.target) != self.target.num_vars:
            raise ValueError("homotopy systems must be square")
        if not np.isclose(abs(gamma), 1.0):
            raise ValueError("gamma must have unit modulus")
        self.gamma = complex(gamma)

    @property
    def num_vars(self) -> int:
        return self.target.num_vars

    def evaluate(self, X, t, idx=None):
        G, JG = self.start.values_and_jacobian(X)
        F, JF = self.target.values_and_jacobian(X)
        s = (1 - t)[:, None]
        tt = t[:, None]
        H = s * self.gamma * G + tt * F
        Hx = s[:, :, None] * self.gamma * JG + tt[:, :, None] * JF
        Ht = F - self.gamma * G
        return H, Hx, Ht


class SliceHomotopy:
    """Moves a linear section of the image of ``inner`` while keeping X fixed.

    The tracked system in the source variables is

        ideal(x) = 0,   A(t) inner(x) + b(t) = 0,   E x + f = 0

    with ``A(t) = A0 + t (A1 - A0)`` and ``b(t)`` likewise. ``inner=None``
    slices the source coordinates directly. Slice data may be shared
    (``A`` of shape ``(c, M)``) or per path (``(P, c, M)``); ``idx`` passed to
    :meth:`evaluate` picks the rows of per-path data.
    """

    def __init__(self, num_vars, ideal, inner, start, target, extra=None):
        self.ideal = ideal if ideal is not None and len(ideal) else None
        self.inner = inner
        self.A0, self.b0 = (np.asarray(a, dtype=complex) for a in start)
        self.A1, self.b1 = (np.asarray(a, dtype=complex) for a in target)
        self.extra = None if extra is None or len(extra[0]) == 0 else tuple(np.asarray(a, complex) for a in extra)
        self._num_vars = num_vars
        r = len(self.ideal) if self.ideal is not None else 0
        c = self.A0.shape[-2]
        e = len(self.extra[0]) if self.extra is not None else 0
        if r + c + e != num_vars:
            raise ValueError(f"slice system has {r + c + e} equations in {num_vars} unknowns")

    @property
    def num_vars(self) -> int:
        return self._num_vars

    @staticmethod
    def _pick(a, idx, vector_ndim):
        if a.ndim > vector_ndim and idx is not None:
            return a[idx]
        return a

    def evaluate(self, X, t, idx=None):
        P = X.shape[0]
        A0, A1 = self._pick(self.A0, idx, 2), self._pick(self.A1, idx, 2)
        b0, b1 = self._pick(self.b0, idx, 1), self._pick(self.b1, idx, 1)
        if self.inner is None:
            Y = X
            JY = np.broadcast_to(np.eye(self._num_vars, dtype=complex), (P, self._num_vars, self._num_vars))
        else:
            Y, JY = self.inner.values_and_jacobian(X)
        dA = A1 - A0
        db = b1 - b0
        tt = t[:, None, None]
        At = A0 + tt * dA
        bt = b0 + t[:, None] * db
        Hs = np.einsum("pcm,pm->pc", At, Y) + bt
        Js = At @ JY
        Hts = np.einsum("pcm,pm->pc", np.broadcast_to(dA, At.shape), Y) + np.broadcast_to(db, Hs.shape)
        parts, jparts, tparts = [], [], []
        if self.ideal is not None:
            G, JG = self.ideal.values_and_jacobian(X)
            parts.append(G)
            jparts.append(JG)
            tparts.append(np.zeros_like(G))
        parts.append(Hs)
        jparts.append(Js)
        tparts.append(Hts)
        if self.extra is not None:
            E, f = self.extra
            parts.append(X @ E.T + f)
            jparts.append(np.broadcast_to(E, (P,) + E.shape))
            tparts.append(np.zeros((P, len(f)), dtype=complex))
        return np.concatenate(parts, axis=1), np.concatenate(jparts, axis=1), np.concatenate(tparts, axis=1)


# ---------------------------------------------------------------------------
# tracking


def _refine(h, X, idx, settings: TrackSettings):
    """Newton at t = 1. Returns points, residuals, and a regularity mask."""
    P = X.shape[0]
    ones = np.ones(P)
    X = X.copy()
    ok = np.ones(P, dtype=bool)
    done = np.zeros(P, dtype=bool)
    prev = np.full(P, np.inf)
    for _ in range(settings.max_refinement_iterations):
        work = ~done & ok
        if not work.any():
            break
        w = np.nonzero(work)[0]
        H, Hx, _ = h.evaluate(X[w], ones[w], None if idx is None else idx[w])
        delta, good = batched_solve(Hx, -H)
        ok[w[~good]] = False
        X[w] += delta
        dn = _max_norm(delta)
        scale = 1 + _max_norm(X[w])
        conv = good & (dn <= settings.endpoint_refinement_tolerance * scale)
        # a regular root contracts quadratically; stalling means a singular one
        stalled = good & ~conv & (dn > 0.5 * prev[w]) & np.isfinite(prev[w]) & (prev[w] < 1e-4 * scale)
        ok[w[stalled]] = False
        done[w[conv]] = True
        prev[w] = dn
    ok &= done
    H, Hx, _ = h.evaluate(X, ones, idx)
    res = _max_norm(H)
    if ok.any():
        w = np.nonzero(ok)[0]
        cond = np.linalg.cond(Hx[w])
        ok[w[~(cond < settings.max_condition)]] = False
    return X, res, ok


def _track_chunk(h, starts: np.ndarray, settings: TrackSettings, idx: np.ndarray | None) -> list[TrackedPoint]:
    P, k = starts.shape
    X = starts.astype(complex).copy()
    t = np.zeros(P)
    step = np.full(P, settings.initial_step)
    streak = np.zeros(P, dtype=int)
    status = np.array([""] * P, dtype=object)
    active = np.arange(P)
    tol = settings.corrector_tolerance
    sweeps = 0
    while active.size and sweeps < settings.max_sweeps:
        sweeps += 1
        pidx = None if idx is None else idx[active]
        Xa, ta = X[active], t[active]
        dt = np.minimum(step[active], 1.0 - ta)
        _, Hx, Ht = h.evaluate(Xa, ta, pidx)
        tangent, ok = batched_solve(Hx, -Ht)
        Xp = Xa + dt[:, None] * tangent
        tp = np.where(dt >= 1.0 - ta, 1.0, ta + dt)
        converged = np.zeros(active.size, dtype=bool)
        for _ in range(settings.max_corrector_iterations):
            H, Hx, _ = h.evaluate(Xp, tp, pidx)
            delta, good = batched_solve(Hx, -H)
            ok &= good
            Xp = Xp + delta
            converged |= ok & (_max_norm(delta) <= tol * (1 + _max_norm(Xp)))
        accept = ok & converged & np.all(np.isfinite(Xp), axis=1)

        acc = active[accept]
        X[acc] = Xp[accept]
        t[acc] = tp[accept]
        streak[acc] += 1
        grow = acc[streak[acc] >= settings.successes_before_increase]
        step[grow] = np.minimum(step[grow] * settings.step_increase_factor, settings.max_step)
        streak[grow] = 0

        rej = active[~accept]
        step[rej] *= settings.step_decrease_factor
        streak[rej] = 0
        status[rej[step[rej] < settings.min_step]] = STEP_UNDERFLOW

        status[acc[_max_norm(X[acc]) > settings.divergence_bound]] = DIVERGED
        finished = acc[(t[acc] >= 1.0) & (status[acc] == "")]
        status[finished] = "done"
        active = active[status[active] == ""]
    status[status == ""] = STEP_UNDERFLOW

    raw = np.full(P, np.nan)
    residual = np.full(P, np.nan)
    done = np.nonzero(status == "done")[0]
    if done.size:
        ones = np.ones(done.size)
        H, _, _ = h.evaluate(X[done], ones, None if idx is None else idx[done])
        raw[done] = _max_norm(H)
        Xr, res, regular = _refine(h, X[done], None if idx is None else idx[done], settings)
        X[done] = np.where(np.isfinite(Xr), Xr, X[done])
        residual[done] = res
        good = regular & (res <= settings.success_residual) & (raw[done] <= settings.success_residual)
        status[done[good]] = SUCCESS
        status[done[~good]] = SINGULAR_ENDPOINT
    return [TrackedPoint(X[p].copy(), str(status[p]), float(residual[p]), float(raw[p])) for p in range(P)]


def track_paths(h, starts, settings: TrackSettings | None = None, threads: int = 1) -> list[TrackedPoint]:
    """Track every row of ``starts`` from t = 0 to t = 1 along ``h``."""
    settings = settings or TrackSettings()
    starts = np.atleast_2d(np.asarray(starts, dtype=complex))
    if starts.shape[1] != h.num_vars:
        raise ValueError(f"start points have {starts.shape[1]} coordinates, homotopy has {h.num_vars}")
    P = starts.shape[0]
    if P == 0:
        return []
    if threads <= 1 or P < 2 * threads:
        return _track_chunk(h, starts, settings, np.arange(P))
    chunks = np.array_split(np.arange(P), threads)
    with ThreadPoolExecutor(threads) as pool:
        parts = pool.map(lambda c: _track_chunk(h, starts[c], settings, c), chunks)
    return [tp for part in parts for tp in part]


def track_path(h, start_point, settings: TrackSettings | None = None) -> TrackedPoint:
    return track_paths(h, np.asarray(start_point, dtype=complex)[None, :], settings)[0]


def newton_refine(system, point, tolerance: float = 1e-11, max_iters: int = 10) -> TrackedPoint:
    """Newton's method on a square system from an approximate root.

    Raises :class:`SingularJacobianError` if the Jacobian at an iterate is
    numerically singular. Returns ``singular_endpoint`` status when the
    iteration does not converge to ``tolerance``.
    """
    sysm = system if isinstance(system, PolySystem) else PolySystem(system)
    if len(sysm) != sysm.num_vars:
        raise ValueError("newton_refine needs a square system")
    x = np.asarray(point, dtype=complex).copy()
    for _ in range(max_iters):
        F, J = sysm.values_and_jacobian(x)
        J = J[0]
        if np.linalg.cond(J) > 1e14:
            raise SingularJacobianError(f"Jacobian is numerically singular at {x}")
        delta = np.linalg.solve(J, -F[0])
        x = x + delta
        if np.max(np.abs(delta)) <= tolerance * (1 + np.max(np.abs(x))):
            res = float(np.max(np.abs(sysm.values(x)[0])))
            return TrackedPoint(x, SUCCESS, res, res)
    res = float(np.max(np.abs(sysm.values(x)[0])))
    return TrackedPoint(x, SINGULAR_ENDPOINT, res, res)


# ---------------------------------------------------------------------------
# total-degree solving


def random_gamma(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def total_degree_start_system(degrees: Sequence[int]) -> list[Polynomial]:
    n = len(degrees)
    return [Polynomial.variable(i, n) ** d - 1 for i, d in enumerate(degrees)]


def track_total_degree(system, settings: TrackSettings | None = None, seed=None, threads: int = 1) -> list[TrackedPoint]:
    """Track all Bezout paths of ``system``; returns every path's outcome."""
    target = system if isinstance(system, PolySystem) else PolySystem(system)
    if len(target) != target.num_vars:
        raise ValueError("total-degree solving needs a square system")
    degrees = target.degrees
    if any(d < 1 for d in degrees):
        raise ValueError("every equation must have positive degree")
    rng = np.random.default_rng(seed)
    h = Homotopy(total_degree_start_system(degrees), target, random_gamma(rng))
    return track_paths(h, total_degree_roots(degrees), settings, threads)


def dedupe(points: np.ndarray, tol: float = DEDUP_TOLERANCE) -> np.ndarray:
    """Indices of the first occurrence of each point, comparing in max-norm."""
    keep: list[int] = []
    for i, p in enumerate(points):
        if all(np.max(np.abs(p - points[j])) > tol * max(1.0, np.max(np.abs(p))) for j in keep):
            keep.append(i)
    return np.asarray(keep, dtype=int)


def solve_total_degree(system, settings: TrackSettings | None = None, seed=None, threads: int = 1) -> list[TrackedPoint]:
    """Finite regular solutions of a square system, deduplicated."""
    results = track_total_degree(system, settings, seed, threads)
    good = [r for r in results if r.success]
    if not good:
        counts = {s: sum(r.status == s for r in results) for s in {r.status for r in results}}
        raise TrackingError(f"no path reached a regular endpoint ({counts})")
    keep = dedupe(np.array([r.coordinates for r in good]))
    return [good[i] for i in keep]
