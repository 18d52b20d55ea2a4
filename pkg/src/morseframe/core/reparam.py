"""
Smooth reparametrization of saddle values.

Given saddle values c and a scale eps, the projected values
c' = pi_{eps/(q+1)}(c) lie in (-eps/2, eps/2). The diffeomorphism

    h(t) = t + t_0 + sum_{k=0}^{s} (t_{k+1} - t_k) I_k(t)

of [-eps/2, eps/2] onto [-1, 1] sends every c'_j back to c_j, is the identity
shifted by t_k near each block of the face of c', and is shifted by t_0 and
t_{s+1} near the endpoints. Here I_k are smooth steps whose transition
windows sit between consecutive blocks.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import expit

from .exceptions import InputError
from .permutohedron import (
    DEFAULT_TOL,
    OrderedPartition,
    membership,
    open_face_of,
    refines,
)
from .projection import ProjectionResult, project

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]

# below this distance from the window edge exp(-1/x) underflows to zero
_UNDERFLOW_GUARD = 1e-3
PRECONDITION_SLACK = 1e-12
MAX_BISECTION_STEPS = 200


def _unit_step(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Value, first and second derivative of exp(-1/x) / (exp(-1/x) + exp(-1/(1-x)))."""
    inner = (x > 0.0) & (x < 1.0)
    xi = np.clip(np.where(inner, x, 0.5), _UNDERFLOW_GUARD, 1.0 - _UNDERFLOW_GUARD)
    e = 1.0 / xi - 1.0 / (1.0 - xi)
    g = expit(-e)
    g_g = g * expit(e)
    d1 = 1.0 / xi**2 + 1.0 / (1.0 - xi) ** 2
    d2 = -2.0 / xi**3 + 2.0 / (1.0 - xi) ** 3
    first = g_g * d1
    second = first * (1.0 - 2.0 * g) * d1 + g_g * d2

    value = np.where(inner, g, np.where(x >= 1.0, 1.0, 0.0))
    return value, np.where(inner, first, 0.0), np.where(inner, second, 0.0)


@dataclass(frozen=True)
class SmoothStep:
    """C-infinity step I_{a,b}: 0 up to (2a+b)/3, 1 from (a+2b)/3 on."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise InputError(f"Smooth step needs a < b, got a={self.a}, b={self.b}")

    @property
    def lower(self) -> float:
        return (2.0 * self.a + self.b) / 3.0

    @property
    def upper(self) -> float:
        return (self.a + 2.0 * self.b) / 3.0

    def _eval(self, t: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        width = self.upper - self.lower
        x = (np.asarray(t, dtype=float) - self.lower) / width
        value, first, second = _unit_step(x)
        return value, first / width, second / width**2

    def __call__(self, t: ArrayLike) -> Any:
        return _scalar_or_array(self._eval(t)[0], t)

    def derivative(self, t: ArrayLike) -> Any:
        return _scalar_or_array(self._eval(t)[1], t)

    def second_derivative(self, t: ArrayLike) -> Any:
        return _scalar_or_array(self._eval(t)[2], t)


def _scalar_or_array(result: np.ndarray, like: ArrayLike) -> Any:
    if np.ndim(like) == 0:
        return float(result)
    return result


def smooth_step_eval(step: SmoothStep, t: float) -> float:
    """I_{a,b}(t) in [0, 1]."""
    return float(step(t))


@dataclass(frozen=True)
class IntervalDiffeo:
    """The diffeomorphism h_{c,eps}: [-eps/2, eps/2] -> [-1, 1]."""

    eps: float
    c_values: Tuple[float, ...]
    c_prime: Tuple[float, ...]
    face: Optional[OrderedPartition]
    t: Tuple[float, ...]
    steps: Tuple[Tuple[float, SmoothStep], ...]
    projection: Optional[ProjectionResult] = field(default=None, compare=False)
    inverse_tol: float = 1e-12

    @property
    def q(self) -> int:
        return len(self.c_values)

    @property
    def domain(self) -> Tuple[float, float]:
        return (-self.eps / 2.0, self.eps / 2.0)

    def _terms(self, t: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = np.asarray(t, dtype=float)
        value = x + self.t[0]
        first = np.ones_like(x)
        second = np.zeros_like(x)
        for delta, step in self.steps:
            v, d1, d2 = step._eval(x)
            value = value + delta * v
            first = first + delta * d1
            second = second + delta * d2
        return value, first, second

    def __call__(self, t: ArrayLike) -> Any:
        return _scalar_or_array(self._terms(t)[0], t)

    def derivative(self, t: ArrayLike) -> Any:
        return _scalar_or_array(self._terms(t)[1], t)

    def second_derivative(self, t: ArrayLike) -> Any:
        return _scalar_or_array(self._terms(t)[2], t)

    def inverse(self, y: ArrayLike, tol: Optional[float] = None) -> Any:
        """h^{-1}(y) by bisection; see ``invert_diffeo``."""
        return invert_diffeo(self, y, self.inverse_tol if tol is None else tol)

    def flat_neighbourhoods(self) -> List[Tuple[float, float]]:
        """Maximal subintervals of the domain on which h' is exactly 1."""
        lo, hi = self.domain
        pieces = []
        cursor = lo
        for _, step in sorted(self.steps, key=lambda item: item[1].lower):
            if step.lower > cursor:
                pieces.append((cursor, min(step.lower, hi)))
            cursor = max(cursor, step.upper)
        if cursor < hi:
            pieces.append((cursor, hi))
        return pieces


def invert_diffeo(h: IntervalDiffeo, y: ArrayLike, tol: float = 1e-12) -> Any:
    """Solve h(t) = y on [-eps/2, eps/2] by bisection.

    h is strictly increasing but may be nearly flat inside the step windows,
    so the search is derivative-free. Iteration stops once the bracket is
    narrower than ``tol`` and the residual is below ``tol``, or the bracket
    cannot shrink further in floating point.
    """
    target = np.asarray(y, dtype=float)
    if np.any(np.abs(target) > 1.0 + PRECONDITION_SLACK):
        raise InputError("h^{-1} is only defined on [-1, 1]")
    lo_end, hi_end = h.domain
    lo = np.full_like(target, lo_end)
    hi = np.full_like(target, hi_end)
    for _ in range(MAX_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        value = h._terms(mid)[0]
        below = value < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        width = hi - lo
        done = (width <= tol) & (np.abs(value - target) <= tol)
        if np.all(done | (width <= 2.0 * np.spacing(np.abs(lo)))):
            break
    mid = 0.5 * (lo + hi)
    mid = np.where(target <= -1.0, lo_end, np.where(target >= 1.0, hi_end, mid))
    return _scalar_or_array(mid, y)


def _windows(q: int, eps: float, ranks: Sequence[int]) -> List[SmoothStep]:
    """Steps I_k on ((r_k/(q+1) - 1/2) eps, ((r_k+1)/(q+1) - 1/2) eps)."""
    return [
        SmoothStep((r / (q + 1) - 0.5) * eps, ((r + 1) / (q + 1) - 0.5) * eps)
        for r in ranks
    ]


def _assemble(
    c: np.ndarray,
    eps: float,
    projection: Optional[ProjectionResult],
    merge_tol: float,
    inverse_tol: float,
) -> IntervalDiffeo:
    q = c.size
    if projection is None:
        face = None
        c_prime: Tuple[float, ...] = ()
        inner: Tuple[float, ...] = ()
        ranks: Tuple[int, ...] = (0,)
    else:
        face = projection.face
        c_prime = projection.c_prime
        inner = projection.offsets
        ranks = (0,) + face.ranks
    t = (-1.0 + eps / 2.0,) + tuple(inner) + (1.0 - eps / 2.0,)
    if not (t[1] > t[0] and t[-1] > t[-2]):
        raise InputError(
            f"Offsets {t} violate t_0 < t_1 and t_s < t_(s+1); saddle values too "
            f"close to +-1 for eps={eps}"
        )

    steps = []
    for k, step in enumerate(_windows(q, eps, ranks)):
        delta = t[k + 1] - t[k]
        if delta > merge_tol:
            steps.append((delta, step))
        else:
            logger.debug(f"Merging blocks {k} and {k + 1}: offset gap {delta:.3e}")

    return IntervalDiffeo(
        eps=eps,
        c_values=tuple(float(x) for x in c),
        c_prime=tuple(c_prime),
        face=face,
        t=t,
        steps=tuple(steps),
        projection=projection,
        inverse_tol=inverse_tol,
    )


def _saddle_vector(c: Sequence[float]) -> np.ndarray:
    vec = np.asarray(c, dtype=float).reshape(-1)
    if not np.all(np.isfinite(vec)):
        raise InputError(f"Saddle values contain non-finite entries: {vec.tolist()}")
    return vec


def _build(
    vec: np.ndarray,
    eps: float,
    tie_tol: float,
    merge_tol: float,
    inverse_tol: float,
) -> IntervalDiffeo:
    q = vec.size
    projection = project(vec, eps / (q + 1), tie_tol) if q else None
    return _assemble(vec, eps, projection, merge_tol, inverse_tol)


def build_diffeo(
    c: Sequence[float],
    eps: float,
    tie_tol: float = DEFAULT_TOL,
    merge_tol: float = 1e-12,
    inverse_tol: float = 1e-12,
) -> IntervalDiffeo:
    """h_{c,eps} for saddle values with |c_j| <= 1 - 3 eps, eps in (0, 1/3]."""
    vec = _saddle_vector(c)
    if not 0.0 < eps <= 1.0 / 3.0 + PRECONDITION_SLACK:
        raise InputError(f"eps must lie in (0, 1/3], got {eps}")
    if vec.size and float(np.abs(vec).max()) > 1.0 - 3.0 * eps + PRECONDITION_SLACK:
        raise InputError(
            f"Saddle values {vec.tolist()} exceed 1 - 3*eps = {1.0 - 3.0 * eps}"
        )
    return _build(vec, eps, tie_tol, merge_tol, inverse_tol)


def epsilon(c: Sequence[float], d: Optional[Any] = None) -> float:
    """eps = (1/3) min{1, min_{j1<j2} d_{j1 j2}, 1 - max_j |c_j|}."""
    vec = _saddle_vector(c)
    q = vec.size
    terms = [1.0]
    if q:
        top = float(np.abs(vec).max())
        if top >= 1.0:
            raise InputError(
                f"Saddle values must satisfy |c_j| < 1 (minima at -1, maxima at 1); "
                f"got max |c_j| = {top}"
            )
        terms.append(1.0 - top)
    if q >= 2:
        if d is None:
            raise InputError("A saddle distance matrix is required for q >= 2")
        dist = np.asarray(d, dtype=float)
        if dist.shape != (q, q):
            raise InputError(f"Distance matrix must be {q}x{q}, got {dist.shape}")
        if not np.allclose(dist, dist.T, rtol=1e-12, atol=1e-12):
            raise InputError("Distance matrix must be symmetric")
        off = dist[~np.eye(q, dtype=bool)]
        if np.any(~(off > 0)):
            raise InputError("Saddle distances must be positive off the diagonal")
        terms.append(float(off.min()))
    return min(terms) / 3.0


@dataclass(frozen=True)
class NormalizationReport:
    """Saddle values of (2/eps) (h^{-1} o f) and the data producing them."""

    eps: float
    c_prime: Tuple[float, ...]
    scaled_values: Tuple[float, ...]
    face: Optional[OrderedPartition]
    diffeo: IntervalDiffeo

    @property
    def projection(self) -> Optional[ProjectionResult]:
        return self.diffeo.projection


def normalize_saddle_values(
    c: Sequence[float],
    d: Optional[Any] = None,
    tie_tol: float = DEFAULT_TOL,
    merge_tol: float = 1e-12,
    inverse_tol: float = 1e-12,
    eps: Optional[float] = None,
) -> NormalizationReport:
    """Normalize saddle values into (2/(q+1)) P^{q-1}.

    ``eps`` overrides the value computed from ``c`` and ``d`` (the surface
    pipeline passes its safeguarded epsilon).
    """
    vec = _saddle_vector(c)
    if eps is None:
        eps = epsilon(vec, d)
    diffeo = build_diffeo(vec, eps, tie_tol, merge_tol, inverse_tol)
    c_prime = np.asarray(diffeo.c_prime, dtype=float)
    scaled = 2.0 / eps * c_prime
    report = NormalizationReport(
        eps=eps,
        c_prime=diffeo.c_prime,
        scaled_values=tuple(float(x) for x in scaled),
        face=diffeo.face,
        diffeo=diffeo,
    )
    logger.info(
        f"Normalized {vec.size} saddle value(s) with eps={eps:.6g}, "
        f"face {diffeo.face}"
    )
    return report


@dataclass(frozen=True)
class UnitIntervalMap:
    """H(c, kappa) = h_{c,kappa} o m_{kappa/2}, a diffeomorphism of [-1, 1]."""

    kappa: float
    diffeo: IntervalDiffeo

    def __call__(self, t: ArrayLike) -> Any:
        x = np.asarray(t, dtype=float) * self.kappa / 2.0
        return _scalar_or_array(self.diffeo._terms(x)[0], t)

    def derivative(self, t: ArrayLike) -> Any:
        x = np.asarray(t, dtype=float) * self.kappa / 2.0
        return _scalar_or_array(self.diffeo._terms(x)[1] * self.kappa / 2.0, t)


def compose_unit(
    c: Sequence[float],
    kappa: float,
    tie_tol: float = DEFAULT_TOL,
    merge_tol: float = 1e-12,
) -> UnitIntervalMap:
    """H(c, kappa) for kappa in (0, 1) and c in (-1 + kappa, 1 - kappa)^q."""
    vec = _saddle_vector(c)
    if not 0.0 < kappa < 1.0:
        raise InputError(f"kappa must lie in (0, 1), got {kappa}")
    if vec.size and float(np.abs(vec).max()) >= 1.0 - kappa:
        raise InputError(f"Saddle values {vec.tolist()} leave (-1+kappa, 1-kappa)")
    return UnitIntervalMap(kappa, _build(vec, kappa, tie_tol, merge_tol, 1e-12))


def homotopy_values(
    c: Sequence[float],
    d: Optional[Any],
    t: float,
    normalization: Optional[NormalizationReport] = None,
) -> np.ndarray:
    """Saddle values of (1 - t) (2/eps)(h^{-1} o f) + t f."""
    if not 0.0 <= t <= 1.0:
        raise InputError(f"Homotopy parameter must lie in [0, 1], got {t}")
    vec = _saddle_vector(c)
    if normalization is None:
        normalization = normalize_saddle_values(vec, d)
    scaled = np.asarray(normalization.scaled_values, dtype=float)
    return (1.0 - t) * scaled + t * vec


def homotopy_faces(
    c: Sequence[float],
    d: Optional[Any],
    samples: int,
    normalization: Optional[NormalizationReport] = None,
    tol: float = DEFAULT_TOL,
) -> List[Tuple[float, np.ndarray, Optional[OrderedPartition]]]:
    """Sample the homotopy at evenly spaced t with the open face of each
    sample in (2/(q+1)) P^{q-1}, or None when the sample leaves it."""
    if samples < 2:
        raise InputError(f"Need at least two homotopy samples, got {samples}")
    vec = _saddle_vector(c)
    q = vec.size
    if normalization is None:
        normalization = normalize_saddle_values(vec, d)
    out = []
    for t in np.linspace(0.0, 1.0, samples):
        values = homotopy_values(vec, d, float(t), normalization)
        face = None
        if q and membership(values, 2.0 / (q + 1), tol):
            face = open_face_of(values, 2.0 / (q + 1), tol)
        out.append((float(t), values, face))
    return out


def homotopy_face_is_stable(
    samples: Sequence[Tuple[float, np.ndarray, Optional[OrderedPartition]]]
) -> bool:
    """True iff all samples with t > 0 share one open face and the t = 0
    sample lies in a face refining it."""
    if not samples or samples[0][1].size == 0:
        return True
    start = [face for t, _, face in samples if t == 0.0]
    later = [face for t, _, face in samples if t > 0.0]
    common = later[0] if later else None
    if common is None or any(face != common for face in later):
        return False
    return all(face is not None and refines(face, common) for face in start)
