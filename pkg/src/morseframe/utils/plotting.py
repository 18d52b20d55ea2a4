"""
SVG figures: torus level-set portraits and permutohedron pictures.

Figures are drawn on detached ``Figure`` objects (no pyplot state) and saved
with a fixed hash salt and no date stamp so reruns are byte-identical.
Glyphs carry SVG ids (``saddle-1``, ``vertex-3``, ...) for inspection.
"""
import logging
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import matplotlib
import numpy as np
from matplotlib.figure import Figure
from skimage import measure

from ..core.exceptions import InputError, ReportIOError
from ..core.permutohedron import OrderedPartition, vertices
from ..core.projection import ProjectionResult

logger = logging.getLogger(__name__)

PORTRAIT_GRID = 256
BACKGROUND_LEVELS = np.linspace(-0.9, 0.9, 7)
SVG_RC = {"svg.hashsalt": "morseframe", "svg.fonttype": "none"}

GLYPHS = {
    0: dict(marker="v", color="tab:blue", label="minimum"),
    1: dict(marker="X", color="tab:red", label="saddle"),
    2: dict(marker="^", color="tab:orange", label="maximum"),
}

# orthonormal basis of the plane sum(x) = 0 in R^3
_PLANE_BASIS = np.array([[1.0, -1.0, 0.0], [1.0, 1.0, -2.0]]) / np.sqrt([[2.0], [6.0]])


def _save(fig: Figure, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with matplotlib.rc_context(SVG_RC):
            fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as e:
        raise ReportIOError(f"Cannot write figure {path}: {e}")
    logger.info(f"Wrote {path}")
    return path


def _wrapped(points: np.ndarray) -> np.ndarray:
    """Wrap a polyline into [0, 2pi)^2, breaking it where it jumps."""
    wrapped = np.mod(points, 2.0 * np.pi)
    jumps = np.any(np.abs(np.diff(wrapped, axis=0)) > np.pi, axis=1)
    if not jumps.any():
        return wrapped
    return np.insert(wrapped, np.flatnonzero(jumps) + 1, np.nan, axis=0)


def plot_portrait(analysis: Any, path: Union[str, Path]) -> Path:
    """Level sets through the saddle values, separatrices and critical points.

    Args:
        analysis: an ``AnalysisResult`` of the surface backend
        path: output SVG path
    """
    pair = analysis.pair
    n = min(pair.grid_n, PORTRAIT_GRID)
    h = 2.0 * np.pi / n
    U, V = pair.grid(n)
    F = np.asarray(pair.field.value(U, V), dtype=float)
    F = np.pad(F, ((0, 1), (0, 1)), "wrap")

    fig = Figure(figsize=(6, 6))
    ax = fig.add_subplot(1, 1, 1)
    for level in BACKGROUND_LEVELS:
        for contour in measure.find_contours(F, level):
            ax.plot(contour[:, 0] * h, contour[:, 1] * h, color="0.8", lw=0.5)
    for level in sorted(set(float(x) for x in analysis.c)):
        for contour in measure.find_contours(F, level):
            ax.plot(contour[:, 0] * h, contour[:, 1] * h, color="tab:green", lw=1.0)

    for edge in analysis.graph.edges:
        line = _wrapped(edge.polyline)
        color = "tab:purple" if edge.is_saddle_saddle else "black"
        ax.plot(line[:, 0], line[:, 1], color=color, lw=1.2)

    counters = {0: 0, 1: 0, 2: 0}
    for cp in analysis.critical_points:
        counters[cp.index] += 1
        style = GLYPHS[cp.index]
        ax.plot(
            [cp.position[0]],
            [cp.position[1]],
            linestyle="none",
            marker=style["marker"],
            color=style["color"],
            markersize=9,
            gid=f"{style['label']}-{counters[cp.index]}",
        )

    ax.set_xlim(0.0, 2.0 * np.pi)
    ax.set_ylim(0.0, 2.0 * np.pi)
    ax.set_aspect("equal")
    ax.set_xlabel("u")
    ax.set_ylabel("v")
    ax.set_title(f"{pair.scene}: p={counters[0]}, q={counters[1]}, r={counters[2]}")
    return _save(fig, path)


def _plane(points: np.ndarray) -> np.ndarray:
    """Coordinates in the sum-zero plane (q = 3) or along (1, -1) (q = 2)."""
    points = np.atleast_2d(points)
    if points.shape[1] == 2:
        x = (points[:, 0] - points[:, 1]) / np.sqrt(2.0)
        return np.column_stack([x, np.zeros_like(x)])
    return points @ _PLANE_BASIS.T


def _by_angle(points: np.ndarray) -> np.ndarray:
    centre = points.mean(axis=0)
    angle = np.arctan2(points[:, 1] - centre[1], points[:, 0] - centre[0])
    return points[np.argsort(angle, kind="stable")]


def _face_vertices(verts: np.ndarray, face: OrderedPartition) -> np.ndarray:
    """Vertices of the closed face: every block sits below the next one."""
    keep = []
    for vert in verts:
        keep.append(
            all(
                vert[list(lo)].max() < vert[list(hi)].min()
                for lo, hi in zip(face.blocks, face.blocks[1:])
            )
        )
    return verts[np.asarray(keep)]


def plot_permutohedron(
    c: Sequence[float],
    kappa: float,
    projection: ProjectionResult,
    path: Union[str, Path],
    title: Optional[str] = None,
) -> Path:
    """kappa * P^{q-1} (segment or hexagon) with c, its projection and face."""
    vec = np.asarray(c, dtype=float)
    q = vec.size
    if q not in (2, 3):
        raise InputError(f"Permutohedron plots need q in {{2, 3}}, got q={q}")

    verts = np.array([p.coords for p in vertices(q, kappa)])
    flat = _plane(verts)
    fig = Figure(figsize=(6, 6))
    ax = fig.add_subplot(1, 1, 1)

    outline = _by_angle(flat) if q == 3 else flat[np.argsort(flat[:, 0])]
    closed = np.vstack([outline, outline[:1]]) if q == 3 else outline
    ax.plot(closed[:, 0], closed[:, 1], color="0.3", lw=1.5, gid="permutohedron")
    for i, point in enumerate(flat, start=1):
        ax.plot(
            [point[0]],
            [point[1]],
            linestyle="none",
            marker="o",
            color="0.3",
            gid=f"vertex-{i}",
        )

    face_pts = _plane(_face_vertices(verts, projection.face))
    if len(face_pts) >= 3:
        ring = _by_angle(face_pts)
        ax.fill(ring[:, 0], ring[:, 1], color="tab:green", alpha=0.25, gid="face")
    elif len(face_pts) == 2:
        ax.plot(face_pts[:, 0], face_pts[:, 1], color="tab:green", lw=4, gid="face")
    else:
        ax.plot(
            face_pts[:, 0], face_pts[:, 1], "s", color="tab:green", ms=12, gid="face"
        )

    pc = _plane(vec)[0]
    pp = _plane(projection.as_array())[0]
    ax.plot([pc[0], pp[0]], [pc[1], pp[1]], ls="--", color="0.5", lw=0.8)
    ax.plot([pc[0]], [pc[1]], "o", color="tab:red", gid="point-c")
    ax.plot([pp[0]], [pp[1]], "o", color="tab:blue", gid="point-c-prime")

    ax.set_aspect("equal")
    ax.set_title(
        title or f"projection onto {kappa:g} P^{q - 1}, face {projection.face}"
    )
    return _save(fig, path)
