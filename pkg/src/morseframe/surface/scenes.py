"""
Registry of analytic scenes on the flat torus.
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional

import numpy as np

from ..core.exceptions import InputError
from .framed import DeclaredCriticalPoint, FramedPair, ScalarField

logger = logging.getLogger(__name__)


class TwoCosines(ScalarField):
    """f = (a cos u + b cos v) / (a + b).

    Maximum 1 at (0, 0), minimum -1 at (pi, pi), saddles at (0, pi) and
    (pi, 0) with values (a - b)/(a + b) and (b - a)/(a + b).
    """

    name = "two_cosines"

    def __init__(self, a: float = 1.0, b: float = 1.0):
        if not (a > 0 and b > 0):
            raise InputError(f"two_cosines needs a > 0 and b > 0, got a={a}, b={b}")
        self.a = float(a)
        self.b = float(b)
        self._norm = self.a + self.b

    @property
    def params(self) -> Dict[str, float]:
        return {"a": self.a, "b": self.b}

    def value(self, u: Any, v: Any) -> np.ndarray:
        return (self.a * np.cos(u) + self.b * np.cos(v)) / self._norm

    def gradient(self, u: Any, v: Any) -> Any:
        return -self.a * np.sin(u) / self._norm, -self.b * np.sin(v) / self._norm

    def hessian(self, u: Any, v: Any) -> Any:
        fuu = -self.a * np.cos(u) / self._norm
        fvv = -self.b * np.cos(v) / self._norm
        return fuu, np.zeros_like(fuu * fvv), fvv


class SphereHeight(ScalarField):
    """Height function of the round sphere, carried on the torus chart.

    f = -(cos u + cos v)/2 with the critical set declared as the minimum at
    (0, 0) and the maximum at (pi, pi) (Euler characteristic 2). The torus
    chart is only a drawing surface; the scene exercises the saddle-free
    pipeline.
    """

    name = "sphere_height"
    euler_characteristic = 2

    def value(self, u: Any, v: Any) -> np.ndarray:
        return -(np.cos(u) + np.cos(v)) / 2.0

    def gradient(self, u: Any, v: Any) -> Any:
        return np.sin(u) / 2.0, np.sin(v) / 2.0

    def hessian(self, u: Any, v: Any) -> Any:
        fuu = np.cos(u) / 2.0
        fvv = np.cos(v) / 2.0
        return fuu, np.zeros_like(fuu * fvv), fvv

    @property
    def declared_critical_points(self) -> Optional[List[DeclaredCriticalPoint]]:
        return [
            DeclaredCriticalPoint((0.0, 0.0), 0),
            DeclaredCriticalPoint((float(np.pi), float(np.pi)), 2),
        ]


@dataclass(frozen=True)
class SceneInfo:
    """Registry entry."""

    name: str
    factory: Callable[..., ScalarField]
    defaults: Mapping[str, float]
    description: str
    synthetic: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "defaults": dict(self.defaults),
            "description": self.description,
            "synthetic": self.synthetic,
        }


_REGISTRY: Dict[str, SceneInfo] = {
    info.name: info
    for info in (
        SceneInfo(
            "two_cosines",
            TwoCosines,
            {"a": 1.0, "b": 1.0},
            "(a cos u + b cos v)/(a + b): one min, one max, two saddles",
        ),
        SceneInfo(
            "sphere_height",
            SphereHeight,
            {},
            "saddle-free stub with a declared min and max (chi = 2)",
            synthetic=True,
        ),
    )
}


def scene_names() -> List[str]:
    return sorted(_REGISTRY)


def list_scenes() -> List[SceneInfo]:
    """All registered scenes, sorted by name."""
    return [_REGISTRY[name] for name in scene_names()]


def make_scene(name: str, params: Optional[Mapping[str, float]] = None) -> ScalarField:
    """Instantiate a registered scene, filling in default parameters."""
    info = _REGISTRY.get(name)
    if info is None:
        raise InputError(
            f"Unknown scene {name!r}; available: {', '.join(scene_names())}"
        )
    merged = dict(info.defaults)
    for key, value in (params or {}).items():
        if key not in info.defaults:
            raise InputError(f"Scene {name!r} has no parameter {key!r}")
        merged[key] = float(value)
    logger.debug(f"Building scene {name} with {merged}")
    return info.factory(**merged)


def make_pair(
    name: str, params: Optional[Mapping[str, float]] = None, grid_n: int = 256
) -> FramedPair:
    """The framed pair (f, rotated df) for a registered scene."""
    return FramedPair.from_field(make_scene(name, params), grid_n, name)
