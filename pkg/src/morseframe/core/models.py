"""
Data models for the morseframe package.
"""
import json
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional

from .exceptions import InputError

GRID_MIN = 64
GRID_MAX = 4096
SCENE_TOLERANCES = ("tie_tol", "tol_kkt", "delta_ext", "r_capture")


def _numbers(mapping: Any, key: str) -> Dict[str, Any]:
    """Promote numbers to float; anything else is left for validate() to report."""
    if not isinstance(mapping, dict):
        raise InputError(f"Scene configuration {key!r} must be an object")
    return {
        k: float(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else v
        for k, v in mapping.items()
    }


@dataclass
class SceneConfig:
    """A scene selection with its parameters, grid and tolerance overrides."""

    scene: str
    params: Dict[str, float] = field(default_factory=dict)
    grid_n: int = 256
    tolerances: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        from ..surface.scenes import scene_names

        errors = []
        if self.scene not in scene_names():
            errors.append(
                f"unknown scene {self.scene!r} (available: {', '.join(scene_names())})"
            )
        if isinstance(self.grid_n, bool) or not isinstance(self.grid_n, int):
            errors.append(f"grid_n must be an integer, got {self.grid_n!r}")
        elif not GRID_MIN <= self.grid_n <= GRID_MAX:
            errors.append(f"grid_n must lie in [{GRID_MIN}, {GRID_MAX}]")
        for name, value in self.params.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                errors.append(f"parameter {name!r} must be a number")
        unknown = sorted(set(self.tolerances) - set(SCENE_TOLERANCES))
        if unknown:
            errors.append(f"unknown tolerance(s): {', '.join(unknown)}")
        for name, value in self.tolerances.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                errors.append(f"tolerance {name!r} must be a number")
        if errors:
            raise InputError(f"Invalid scene configuration: {'; '.join(errors)}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SceneConfig":
        if not isinstance(data, dict) or "scene" not in data:
            raise InputError("Scene configuration must be an object with a 'scene'")
        extra = sorted(set(data) - {f.name for f in fields(cls)})
        if extra:
            raise InputError(f"Unknown scene configuration key(s): {', '.join(extra)}")
        return cls(
            scene=data["scene"],
            params=_numbers(data.get("params", {}), "params"),
            grid_n=data.get("grid_n", 256),
            tolerances=_numbers(data.get("tolerances", {}), "tolerances"),
        )

    @classmethod
    def from_json(cls, text: str) -> "SceneConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"Scene configuration is not valid JSON: {e}")
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scene": self.scene,
            "params": dict(self.params),
            "grid_n": self.grid_n,
            "tolerances": dict(self.tolerances),
        }

    def __str__(self) -> str:
        params = ", ".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.scene}({params}) on a {self.grid_n}x{self.grid_n} grid"


@dataclass
class Report:
    """Result of an analyze or normalize run, in serializable form.

    Face blocks and saddle pairs are 1-based.
    """

    scene: Dict[str, Any]
    p: int
    q: int
    r: int
    critical_points: List[Dict[str, Any]]
    saddle_distances: List[List[float]]
    epsilon: float
    c: List[float]
    c_prime: List[float]
    scaled_values: List[float]
    face: Optional[List[List[int]]]
    t_offsets: List[float]
    kkt: Dict[str, Any]
    special_before: Dict[str, Any]
    special_after: Optional[Dict[str, Any]]
    separatrix_edges: List[Dict[str, Any]]
    tolerances: Dict[str, Any]
    homotopy: Optional[List[Dict[str, Any]]] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        if self.homotopy is None:
            data.pop("homotopy")
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Report":
        names = [f.name for f in fields(cls)]
        missing = [n for n in names if n not in data and n != "homotopy"]
        if missing:
            raise InputError(f"Report is missing field(s): {', '.join(missing)}")
        return cls(**{n: data[n] for n in names if n in data})
