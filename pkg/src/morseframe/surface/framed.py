"""
Scalar fields and 1-forms on the flat torus [0, 2pi)^2.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..core.reparam import IntervalDiffeo

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

Arrays2 = Tuple[np.ndarray, np.ndarray]
Arrays3 = Tuple[np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True)
class DeclaredCriticalPoint:
    """A critical point announced by a synthetic scene instead of searched."""

    position: Tuple[float, float]
    index: int


class ScalarField(ABC):
    """A smooth function f(u, v), 2pi-periodic in both arguments.

    All evaluations broadcast over numpy arrays.
    """

    name: str = "field"
    euler_characteristic: int = 0

    @abstractmethod
    def value(self, u: Any, v: Any) -> np.ndarray:
        """f(u, v)."""

    @abstractmethod
    def gradient(self, u: Any, v: Any) -> Arrays2:
        """(f_u, f_v)."""

    @abstractmethod
    def hessian(self, u: Any, v: Any) -> Arrays3:
        """(f_uu, f_uv, f_vv)."""

    @property
    def declared_critical_points(self) -> Optional[List[DeclaredCriticalPoint]]:
        """Critical points of synthetic scenes; None for searchable fields."""
        return None

    @property
    def params(self) -> Dict[str, float]:
        return {}


class ComposedField(ScalarField):
    """(2/eps) h^{-1} o f for the diffeomorphism h = h_{c,eps}."""

    def __init__(self, base: ScalarField, diffeo: IntervalDiffeo):
        self.base = base
        self.diffeo = diffeo
        self.scale = 2.0 / diffeo.eps
        self.name = f"composed({base.name})"
        self.euler_characteristic = base.euler_characteristic

    @property
    def declared_critical_points(self) -> Optional[List[DeclaredCriticalPoint]]:
        return self.base.declared_critical_points

    @property
    def params(self) -> Dict[str, float]:
        return self.base.params

    def _inner(self, u: Any, v: Any) -> np.ndarray:
        # floating noise may push |f| a hair past 1
        return np.clip(np.asarray(self.base.value(u, v), dtype=float), -1.0, 1.0)

    def value(self, u: Any, v: Any) -> np.ndarray:
        x = self.diffeo.inverse(self._inner(u, v))
        return self.scale * np.asarray(x, dtype=float)

    def _outer_derivatives(self, u: Any, v: Any) -> Tuple[np.ndarray, np.ndarray]:
        """g'(f) and g''(f) for g = (2/eps) h^{-1}."""
        x = np.asarray(self.diffeo.inverse(self._inner(u, v)), dtype=float)
        h1 = np.asarray(self.diffeo.derivative(x), dtype=float)
        h2 = np.asarray(self.diffeo.second_derivative(x), dtype=float)
        return self.scale / h1, -self.scale * h2 / h1**3

    def gradient(self, u: Any, v: Any) -> Arrays2:
        g1, _ = self._outer_derivatives(u, v)
        fu, fv = self.base.gradient(u, v)
        return g1 * fu, g1 * fv

    def hessian(self, u: Any, v: Any) -> Arrays3:
        g1, g2 = self._outer_derivatives(u, v)
        fu, fv = self.base.gradient(u, v)
        fuu, fuv, fvv = self.base.hessian(u, v)
        return (
            g2 * fu * fu + g1 * fuu,
            g2 * fu * fv + g1 * fuv,
            g2 * fv * fv + g1 * fvv,
        )


@dataclass(frozen=True)
class RotatedDifferential:
    """The 1-form k * (-f_v du + f_u dv) built from a scalar field."""

    base: ScalarField
    scale: float = 1.0

    def components(self, u: Any, v: Any) -> Arrays2:
        """Coefficients (a_u, a_v) of du and dv."""
        fu, fv = self.base.gradient(u, v)
        return -self.scale * fv, self.scale * fu

    def __call__(self, u: Any, v: Any, du: Any, dv: Any) -> np.ndarray:
        a_u, a_v = self.components(u, v)
        return a_u * du + a_v * dv

    def kernel_direction(self, u: Any, v: Any) -> Arrays2:
        """(a_v, -a_u), which spans ker(alpha) and points up the base field."""
        a_u, a_v = self.components(u, v)
        return a_v, -a_u

    def scaled(self, k: float) -> "RotatedDifferential":
        return RotatedDifferential(self.base, self.scale * k)


@dataclass(frozen=True)
class FramedPair:
    """A scalar field f with its companion 1-form alpha and grid resolution."""

    field: ScalarField
    alpha: RotatedDifferential
    grid_n: int = 256
    scene: str = ""
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def from_field(
        cls, scalar: ScalarField, grid_n: int = 256, scene: str = ""
    ) -> "FramedPair":
        return cls(scalar, RotatedDifferential(scalar), grid_n, scene or scalar.name)

    def grid(self, n: Optional[int] = None) -> Arrays2:
        """Meshgrid (U, V) of the torus with n points per axis, indexed [i, j]."""
        n = n or self.grid_n
        axis = TWO_PI * np.arange(n) / n
        return np.meshgrid(axis, axis, indexing="ij")

    def metric_length(self, u: Any, v: Any, du: Any, dv: Any) -> np.ndarray:
        """sqrt(df(D)^2 + alpha(D)^2) for the displacement D = (du, dv) at (u, v)."""
        fu, fv = self.field.gradient(u, v)
        df = fu * du + fv * dv
        return np.sqrt(df**2 + self.alpha(u, v, du, dv) ** 2)


def wrap_angle(x: Any) -> np.ndarray:
    """Map into [0, 2pi), snapping values within 1e-9 of 2pi to 0."""
    out = np.mod(np.asarray(x, dtype=float), TWO_PI)
    return np.where(TWO_PI - out < 1e-9, 0.0, out)


def torus_delta(a: Any, b: Any) -> np.ndarray:
    """Shortest signed displacement a - b on the circle."""
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return np.mod(d + np.pi, TWO_PI) - np.pi


def torus_distance(p: Any, q: Any) -> np.ndarray:
    """Flat torus distance between points given as (..., 2) arrays."""
    d = torus_delta(p, q)
    return np.sqrt(np.sum(d**2, axis=-1))
