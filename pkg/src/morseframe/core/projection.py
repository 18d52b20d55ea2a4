"""
Euclidean projection onto the scaled permutohedron with a Kuhn-Tucker
certificate.

Sorting c ascending and fitting a nondecreasing sequence t to
c_sorted - w (w the sorted vertex coordinates) gives the projection
c' = c - t. The pooled blocks of the isotonic fit are exactly the groups on
which c - c' is constant, and the jumps between consecutive blocks are the
multipliers of the active prefix constraints.
"""
import functools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from scipy.optimize import isotonic_regression

from .exceptions import InputError, RefusalError
from .permutohedron import (
    DEFAULT_TOL,
    OrderedPartition,
    _as_vector,
    _check_kappa,
    membership,
    open_face_of,
    ordered_partitions,
    weights,
)

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_Q = 6


@dataclass(frozen=True)
class ProjectionResult:
    """Projection c' of c onto kappa * P^{q-1} with its certificate."""

    c_prime: Tuple[float, ...]
    face: OrderedPartition
    offsets: Tuple[float, ...]
    lam: float
    lambda_k: Tuple[float, ...]

    @property
    def q(self) -> int:
        return len(self.c_prime)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.c_prime, dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c_prime": list(self.c_prime),
            "face": self.face.to_one_based(),
            "offsets": list(self.offsets),
            "lambda": self.lam,
            "lambda_k": list(self.lambda_k),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProjectionResult":
        return cls(
            c_prime=tuple(float(x) for x in data["c_prime"]),
            face=OrderedPartition.from_one_based(data["face"]),
            offsets=tuple(float(x) for x in data["offsets"]),
            lam=float(data["lambda"]),
            lambda_k=tuple(float(x) for x in data["lambda_k"]),
        )


@dataclass
class KKTCheck:
    """Outcome of a certificate check; truthy iff every condition holds."""

    ok: bool
    residual: float
    violations: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def project(
    c: Sequence[float], kappa: float, tie_tol: float = DEFAULT_TOL
) -> ProjectionResult:
    """Nearest point of kappa * P^{q-1} to c, with face and multipliers."""
    vec = _as_vector(c)
    _check_kappa(kappa)
    q = vec.size

    order = np.argsort(vec, kind="stable")
    fit = isotonic_regression(vec[order] - weights(q, kappa), increasing=True)
    t_sorted = np.asarray(fit.x, dtype=float)

    inside = membership(vec, kappa, 0.0)
    if inside:
        c_prime = vec.copy()
    else:
        c_prime = np.empty(q)
        c_prime[order] = vec[order] - t_sorted

    face = open_face_of(c_prime, kappa, tie_tol)

    position = np.empty(q, dtype=int)
    position[order] = np.arange(q)
    offsets = np.array([t_sorted[position[block[-1]]] for block in face.blocks])
    if inside:
        offsets = np.zeros(face.s)
    # ties in c may interleave equal fitted values; keep the chain exact
    offsets = np.maximum.accumulate(offsets)

    lambda_k = np.diff(offsets)
    result = ProjectionResult(
        c_prime=tuple(float(x) for x in c_prime),
        face=face,
        offsets=tuple(float(x) for x in offsets),
        lam=float(offsets[-1]),
        lambda_k=tuple(float(x) for x in lambda_k),
    )
    logger.debug(f"Projected {vec.tolist()} onto {kappa}*P: face {face}")
    return result


def _prefix_constraint(
    c_prime: np.ndarray, members: Sequence[int], kappa: float
) -> float:
    """Phi_{J_1}(c') = -sum_{J_1} c'_j + kappa * m (m - q) / 2."""
    q = c_prime.size
    m = len(members)
    return float(-c_prime[list(members)].sum() + kappa * m * (m - q) / 2.0)


def kkt_verify(
    c: Sequence[float],
    kappa: float,
    result: ProjectionResult,
    tol: float = DEFAULT_TOL,
) -> KKTCheck:
    """Check feasibility, stationarity, dual feasibility and complementary
    slackness of a projection certificate."""
    vec = _as_vector(c)
    _check_kappa(kappa)
    q = vec.size
    violations: List[str] = []

    face = result.face
    s = face.s
    if result.q != q or face.q != q:
        return KKTCheck(False, float("inf"), [f"dimension mismatch: q={q}"])
    if len(result.offsets) != s or len(result.lambda_k) != s - 1:
        return KKTCheck(
            False,
            float("inf"),
            [f"expected {s} offsets and {s - 1} block multipliers"],
        )

    c_prime = result.as_array()
    if not membership(c_prime, kappa, tol):
        violations.append("c_prime is not in the scaled permutohedron")

    lambda_k = np.asarray(result.lambda_k, dtype=float)
    tail = np.concatenate([np.cumsum(lambda_k[::-1])[::-1], [0.0]])
    reconstructed = result.lam - tail

    residual = 0.0
    for k, block in enumerate(face.blocks):
        diff = vec[list(block)] - c_prime[list(block)] - reconstructed[k]
        residual = max(residual, float(np.abs(diff).max()))
    offsets = np.asarray(result.offsets, dtype=float)
    residual = max(residual, float(np.abs(offsets - reconstructed).max()))
    if residual > tol:
        violations.append(f"stationarity residual {residual:.3e} exceeds {tol:.1e}")

    if np.any(lambda_k < -tol):
        bad = [k + 1 for k in np.flatnonzero(lambda_k < -tol)]
        violations.append(f"negative block multipliers at k={bad}")
    if np.any(np.diff(offsets) < -tol):
        violations.append("offsets are not monotone")

    members: List[int] = []
    for k in range(s - 1):
        members.extend(face.blocks[k])
        if lambda_k[k] > tol:
            phi = _prefix_constraint(c_prime, members, kappa)
            if abs(phi) > tol:
                violations.append(
                    f"multiplier {k + 1} is positive on an inactive constraint "
                    f"(Phi={phi:.3e})"
                )

    return KKTCheck(not violations, residual, violations)


@functools.lru_cache(maxsize=None)
def _face_layouts(q: int) -> Tuple[Tuple[Tuple[Tuple[int, ...], int, int], ...], ...]:
    """For every face: (block indices, start, end) of its vertex positions."""
    layouts = []
    for partition in ordered_partitions(q):
        starts = (0,) + partition.ranks[:-1]
        layouts.append(tuple(zip(partition.blocks, starts, partition.ranks)))
    return tuple(layouts)


def brute_force_project_many(points: np.ndarray, kappa: float) -> np.ndarray:
    """Row-wise brute-force projection of an (N, q) array."""
    X = np.atleast_2d(np.asarray(points, dtype=float))
    _check_kappa(kappa)
    n, q = X.shape
    if q < 1:
        raise InputError("Expected a non-empty vector (q >= 1)")
    if q > BRUTE_FORCE_MAX_Q:
        raise RefusalError(
            f"Brute-force projection refuses q={q} (limit {BRUTE_FORCE_MAX_Q})"
        )
    w = weights(q, kappa)
    scale = np.maximum(1.0, np.maximum(kappa * q, np.abs(X).max(axis=1)))
    tol = 1e-10 * scale

    best = np.full_like(X, np.nan)
    best_dist = np.full(n, np.inf)
    for layout in _face_layouts(q):
        candidate = np.empty_like(X)
        feasible = np.ones(n, dtype=bool)
        for block, start, end in layout:
            idx = list(block)
            segment = w[start:end]
            values = X[:, idx] - X[:, idx].mean(axis=1, keepdims=True) + segment.mean()
            gap = np.cumsum(np.sort(values, axis=1), axis=1) - np.cumsum(segment)
            feasible &= np.all(gap[:, :-1] >= -tol[:, None], axis=1)
            feasible &= np.abs(gap[:, -1]) <= tol
            candidate[:, idx] = values
        dist = np.where(feasible, np.sum((candidate - X) ** 2, axis=1), np.inf)
        better = dist < best_dist
        best[better] = candidate[better]
        best_dist[better] = dist[better]

    if not np.all(np.isfinite(best_dist)):
        raise InputError("No feasible face found for some rows")
    return best


def brute_force_project(c: Sequence[float], kappa: float) -> np.ndarray:
    """Projection by enumerating every face of kappa * P^{q-1}.

    Projects c onto the affine hull of each face, keeps candidates in the
    closed face and returns the nearest one. Intended as an oracle for q <= 6.
    """
    vec = _as_vector(c)
    return brute_force_project_many(vec[None, :], kappa)[0]
