"""
Critical point search and classification.

Seeds are grid cells in which both partial derivatives change sign; each
seed is refined by a step-capped Newton iteration on the gradient and the
result is classified by the signature of the Hessian.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..core.config import Config
from ..core.exceptions import SceneNotMorseError
from .framed import TWO_PI, FramedPair, ScalarField, torus_distance, wrap_angle

logger = logging.getLogger(__name__)

KIND_NAMES = {0: "minimum", 1: "saddle", 2: "maximum"}
DUPLICATE_RADIUS = 1e-6


@dataclass(frozen=True)
class CriticalPoint:
    """A nondegenerate critical point; eigenvectors are kept for saddles."""

    position: Tuple[float, float]
    index: int
    value: float
    hessian_eigvals: Tuple[float, float] = (0.0, 0.0)
    hessian_eigvecs: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None

    @property
    def kind(self) -> str:
        return KIND_NAMES[self.index]

    @property
    def is_saddle(self) -> bool:
        return self.index == 1

    def as_array(self) -> np.ndarray:
        return np.asarray(self.position, dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "position": [self.position[0], self.position[1]],
            "index": self.index,
            "value": self.value,
        }

    def __str__(self) -> str:
        u, v = self.position
        return f"{self.kind} at ({u:.6f}, {v:.6f}) value {self.value:.6f}"


def _cell_sign_change(component: np.ndarray) -> np.ndarray:
    """Cells [i, i+1] x [j, j+1] (periodic) whose corners straddle zero."""
    corners = np.stack(
        [
            component,
            np.roll(component, -1, axis=0),
            np.roll(component, -1, axis=1),
            np.roll(np.roll(component, -1, axis=0), -1, axis=1),
        ]
    )
    return (corners.min(axis=0) <= 0.0) & (corners.max(axis=0) >= 0.0)


def _grid_seeds(pair: FramedPair) -> np.ndarray:
    U, V = pair.grid()
    fu, fv = pair.field.gradient(U, V)
    mask = _cell_sign_change(np.asarray(fu)) & _cell_sign_change(np.asarray(fv))
    half = np.pi / pair.grid_n
    seeds = np.column_stack([U[mask] + half, V[mask] + half])
    logger.debug(f"{len(seeds)} critical point seed cell(s) on {pair.grid_n}^2 grid")
    return seeds


def _hessian_matrix(scalar: ScalarField, x: np.ndarray) -> np.ndarray:
    fuu, fuv, fvv = (float(h) for h in scalar.hessian(x[0], x[1]))
    return np.array([[fuu, fuv], [fuv, fvv]])


def _newton(
    scalar: ScalarField, seed: np.ndarray, step_cap: float, config: Config
) -> Optional[np.ndarray]:
    """Refine a seed to a zero of the gradient, or None if Newton stalls."""
    x = np.array(seed, dtype=float)
    for iteration in range(config.newton_max_iter):
        grad = np.array([float(g) for g in scalar.gradient(x[0], x[1])])
        if np.hypot(*grad) <= config.newton_tol:
            logger.debug(f"Newton converged after {iteration} step(s) at {x}")
            return wrap_angle(x)
        try:
            step = np.linalg.solve(_hessian_matrix(scalar, x), grad)
        except np.linalg.LinAlgError:
            return None
        norm = float(np.hypot(*step))
        if norm > step_cap:
            step *= step_cap / norm
        x = x - step
    logger.debug(f"Newton did not converge from seed {seed}")
    return None


def classify(scalar: ScalarField, position: Any, config: Config) -> CriticalPoint:
    """Morse index from the Hessian eigenvalues at a critical position."""
    x = wrap_angle(position)
    eigvals, eigvecs = np.linalg.eigh(_hessian_matrix(scalar, x))
    if float(np.abs(eigvals).min()) <= config.degenerate_tol:
        raise SceneNotMorseError(
            f"Degenerate critical point at ({x[0]:.6f}, {x[1]:.6f}): "
            f"Hessian eigenvalues {eigvals.tolist()}"
        )
    index = int(np.sum(eigvals < 0))
    vecs = None
    if index == 1:
        vecs = (
            (float(eigvecs[0, 0]), float(eigvecs[1, 0])),
            (float(eigvecs[0, 1]), float(eigvecs[1, 1])),
        )
    return CriticalPoint(
        position=(float(x[0]), float(x[1])),
        index=index,
        value=float(scalar.value(x[0], x[1])),
        hessian_eigvals=(float(eigvals[0]), float(eigvals[1])),
        hessian_eigvecs=vecs,
    )


def _sort_key(cp: CriticalPoint) -> Tuple[int, float, float]:
    return (cp.index, round(cp.position[0], 9), round(cp.position[1], 9))


def find_critical_points(
    pair: FramedPair, config: Optional[Config] = None
) -> List[CriticalPoint]:
    """Critical points of the pair's field, ordered by (index, u, v).

    Raises:
        SceneNotMorseError: on a degenerate Hessian or when the counts of
            minima, saddles and maxima violate the Euler relation.
    """
    config = config or Config()
    scalar = pair.field

    declared = scalar.declared_critical_points
    if declared is not None:
        points = [classify(scalar, dcp.position, config) for dcp in declared]
        for dcp, cp in zip(declared, points):
            if dcp.index != cp.index:
                raise SceneNotMorseError(
                    f"Declared {KIND_NAMES[dcp.index]} at {dcp.position} "
                    f"has Hessian index {cp.index}"
                )
    else:
        step_cap = 2.0 * TWO_PI / pair.grid_n
        found: List[np.ndarray] = []
        for seed in _grid_seeds(pair):
            x = _newton(scalar, seed, step_cap, config)
            if x is None:
                continue
            if any(torus_distance(x, y) < DUPLICATE_RADIUS for y in found):
                continue
            found.append(x)
        points = [classify(scalar, x, config) for x in found]

    points.sort(key=_sort_key)
    counts = [sum(1 for cp in points if cp.index == k) for k in range(3)]
    chi = counts[0] - counts[1] + counts[2]
    if chi != scalar.euler_characteristic:
        raise SceneNotMorseError(
            f"Found {counts[0]} minima, {counts[1]} saddles, {counts[2]} maxima; "
            f"p - q + r = {chi} but the surface has chi = "
            f"{scalar.euler_characteristic}"
        )
    logger.info(
        f"Critical points of {pair.scene}: p={counts[0]}, q={counts[1]}, "
        f"r={counts[2]}"
    )
    return points
