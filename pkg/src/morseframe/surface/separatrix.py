"""
Separatrix tracing along the kernel line field of alpha.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..core.config import Config
from ..core.exceptions import InputError, TracingIncompleteError
from .critical import CriticalPoint
from .framed import FramedPair, torus_delta, torus_distance

logger = logging.getLogger(__name__)

MONOTONE_TOL = 1e-8
MAX_STEP = 0.05

# (branch name, eigenvector slot, sign along the eigenvector, flow orientation)
BRANCHES = (
    ("ascending+", 1, 1.0, 1.0),
    ("ascending-", 1, -1.0, 1.0),
    ("descending+", 0, 1.0, -1.0),
    ("descending-", 0, -1.0, -1.0),
)


@dataclass(frozen=True)
class SeparatrixEdge:
    """A traced separatrix from saddle number ``saddle`` to a critical point.

    ``source`` and ``target`` index the critical point list; ``target_saddle``
    is the saddle number of the target when it is a saddle.
    """

    saddle: int
    source: int
    target: int
    target_kind: int
    target_saddle: Optional[int]
    branch: str
    source_position: Tuple[float, float]
    target_position: Tuple[float, float]
    length: float
    alpha_integral: float
    monotone: bool
    polyline: np.ndarray = field(
        default_factory=lambda: np.empty((0, 2)), compare=False, repr=False
    )

    @property
    def is_saddle_saddle(self) -> bool:
        return self.target_saddle is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "saddle": self.saddle + 1,
            "branch": self.branch,
            "from": list(self.source_position),
            "to": list(self.target_position),
            "target_index": self.target_kind,
            "target_saddle": (
                None if self.target_saddle is None else self.target_saddle + 1
            ),
            "length": self.length,
            "alpha_integral": self.alpha_integral,
            "monotone": self.monotone,
        }


@dataclass(frozen=True)
class SeparatrixGraph:
    """Separatrices of a framed pair, keyed by saddle numbers."""

    edges: Tuple[SeparatrixEdge, ...] = ()

    @property
    def saddle_saddle_pairs(self) -> Set[Tuple[int, int]]:
        """Unordered saddle pairs (sorted tuples) joined by a separatrix."""
        pairs = set()
        for edge in self.edges:
            if edge.target_saddle is not None:
                a, b = sorted((edge.saddle, edge.target_saddle))
                pairs.add((a, b))
        return pairs

    def edges_from(self, saddle: int) -> List[SeparatrixEdge]:
        return [edge for edge in self.edges if edge.saddle == saddle]

    def with_edges(self, extra: Sequence[SeparatrixEdge]) -> "SeparatrixGraph":
        return SeparatrixGraph(self.edges + tuple(extra))

    def __len__(self) -> int:
        return len(self.edges)


def _capture_event(target: np.ndarray, radius: float) -> Callable[..., float]:
    def event(s: float, y: np.ndarray) -> float:
        return float(torus_distance(y[:2], target)) - radius

    event.terminal = True  # type: ignore[attr-defined]
    event.direction = -1  # type: ignore[attr-defined]
    return event


def _kernel_flow(pair: FramedPair, orientation: float) -> Callable[..., np.ndarray]:
    """Unit-speed kernel field plus the length and alpha integrands."""

    def rhs(s: float, y: np.ndarray) -> np.ndarray:
        ku, kv = (float(k) for k in pair.alpha.kernel_direction(y[0], y[1]))
        fu, fv = (float(g) for g in pair.field.gradient(y[0], y[1]))
        norm = np.hypot(ku, kv)
        if norm == 0.0:
            return np.zeros(4)
        sign = orientation if fu * ku + fv * kv >= 0.0 else -orientation
        tu, tv = sign * ku / norm, sign * kv / norm
        df = fu * tu + fv * tv
        alpha = float(pair.alpha(y[0], y[1], tu, tv))
        return np.array([tu, tv, np.hypot(df, alpha), alpha])

    return rhs


def _segment_length(pair: FramedPair, a: np.ndarray, b: np.ndarray) -> float:
    d = b - a
    mid = a + d / 2.0
    return float(pair.metric_length(mid[0], mid[1], d[0], d[1]))


def _trace_branch(
    pair: FramedPair,
    cps: Sequence[CriticalPoint],
    source: int,
    saddle_number: Dict[int, int],
    branch: Tuple[str, int, float, float],
    config: Config,
) -> SeparatrixEdge:
    name, slot, along, orientation = branch
    cp = cps[source]
    if cp.hessian_eigvecs is None:
        raise InputError(f"Critical point {cp} carries no Hessian eigenvectors")
    origin = cp.as_array()
    start = origin + along * config.launch_offset * np.asarray(cp.hessian_eigvecs[slot])

    others = [k for k in range(len(cps)) if k != source]
    events = [_capture_event(cps[k].as_array(), config.r_capture) for k in others]
    sol = solve_ivp(
        _kernel_flow(pair, orientation),
        (0.0, config.max_arc_length),
        np.array([start[0], start[1], 0.0, 0.0]),
        method="RK45",
        events=events,
        max_step=MAX_STEP,
        rtol=1e-9,
        atol=1e-11,
    )
    j = saddle_number[source]
    if sol.status != 1:
        raise TracingIncompleteError(
            f"Separatrix {name} from saddle {j + 1} at {cp.position} was not "
            f"captured within arc length {config.max_arc_length}",
            saddle=j,
            direction=name,
        )
    hit = next(k for k, times in zip(others, sol.t_events) if len(times))
    end = sol.y[:2, -1]
    target_point = end + torus_delta(cps[hit].as_array(), end)
    polyline = np.vstack([origin, sol.y[:2].T, target_point])

    length = (
        _segment_length(pair, origin, start)
        + float(sol.y[2, -1])
        + _segment_length(pair, end, target_point)
    )
    values = np.asarray(pair.field.value(polyline[:, 0], polyline[:, 1]), dtype=float)
    monotone = bool(np.all(orientation * np.diff(values) >= -MONOTONE_TOL))

    target = cps[hit]
    logger.debug(
        f"Saddle {j + 1} {name}: reached {target.kind} {hit} after "
        f"{len(sol.t)} steps, length {length:.6f}"
    )
    return SeparatrixEdge(
        saddle=j,
        source=source,
        target=hit,
        target_kind=target.index,
        target_saddle=saddle_number.get(hit),
        branch=name,
        source_position=cp.position,
        target_position=target.position,
        length=length,
        alpha_integral=float(sol.y[3, -1]),
        monotone=monotone,
        polyline=polyline,
    )


def trace_separatrices(
    pair: FramedPair,
    cps: Sequence[CriticalPoint],
    config: Optional[Config] = None,
) -> SeparatrixGraph:
    """Trace the four separatrices of every saddle.

    Each one is launched from the saddle along a Hessian eigenvector and
    integrated at unit speed along the kernel of alpha (ascending along the
    unstable direction, descending along the stable one) until it enters
    the capture disk of another critical point.

    Raises:
        TracingIncompleteError: if a trajectory exceeds the maximal arc
            length without being captured.
    """
    config = config or Config()
    saddles = [i for i, cp in enumerate(cps) if cp.is_saddle]
    saddle_number = {i: j for j, i in enumerate(saddles)}
    edges = [
        _trace_branch(pair, cps, i, saddle_number, branch, config)
        for i in saddles
        for branch in BRANCHES
    ]
    graph = SeparatrixGraph(tuple(edges))
    logger.info(
        f"Traced {len(edges)} separatrices from {len(saddles)} saddle(s); "
        f"{len(graph.saddle_saddle_pairs)} saddle-saddle connection(s)"
    )
    return graph
