"""
Saddle-to-saddle distances under the degenerate metric (df)^2 + alpha^2.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import dijkstra

from ..core.config import Config
from ..core.exceptions import DisconnectedGraphError
from .critical import CriticalPoint
from .framed import TWO_PI, FramedPair, torus_delta, torus_distance

logger = logging.getLogger(__name__)

# one orientation per undirected 8-neighbour edge
NEIGHBOUR_OFFSETS = ((1, 0), (0, 1), (1, 1), (1, -1))

# csgraph treats explicit zeros as edges; keep weights strictly positive
_MIN_WEIGHT = np.finfo(float).tiny


def _grid_edges(
    pair: FramedPair, keep: np.ndarray
) -> Tuple[List[np.ndarray], List[np.ndarray], List[np.ndarray]]:
    n = pair.grid_n
    h = TWO_PI / n
    U, V = pair.grid()
    ids = np.arange(n * n).reshape(n, n)
    rows, cols, weights = [], [], []
    for di, dj in NEIGHBOUR_OFFSETS:
        a = ids.ravel()
        b = np.roll(np.roll(ids, -di, axis=0), -dj, axis=1).ravel()
        du, dv = di * h, dj * h
        w = pair.metric_length(U.ravel() + du / 2, V.ravel() + dv / 2, du, dv)
        ok = keep[a] & keep[b]
        rows.append(a[ok])
        cols.append(b[ok])
        weights.append(np.maximum(np.asarray(w, dtype=float)[ok], _MIN_WEIGHT))
    return rows, cols, weights


def _saddle_links(
    pair: FramedPair, saddles: Sequence[CriticalPoint], keep: np.ndarray
) -> Tuple[List[np.ndarray], List[np.ndarray], List[np.ndarray]]:
    """Join each saddle node to the kept corners of its grid cell."""
    n = pair.grid_n
    h = TWO_PI / n
    rows, cols, weights = [], [], []
    for j, cp in enumerate(saddles):
        origin = cp.as_array()
        i0, j0 = (int(np.floor(x / h)) % n for x in origin)
        for a, b in ((0, 0), (1, 0), (0, 1), (1, 1)):
            ci, cj = (i0 + a) % n, (j0 + b) % n
            node = ci * n + cj
            if not keep[node]:
                continue
            d = torus_delta(np.array([ci * h, cj * h]), origin)
            mid = origin + d / 2.0
            w = float(pair.metric_length(mid[0], mid[1], d[0], d[1]))
            rows.append(np.array([n * n + j]))
            cols.append(np.array([node]))
            weights.append(np.array([max(w, _MIN_WEIGHT)]))
    return rows, cols, weights


def saddle_distances(
    pair: FramedPair,
    cps: Sequence[CriticalPoint],
    config: Optional[Config] = None,
) -> np.ndarray:
    """Symmetric matrix of shortest-path distances between saddles.

    The torus grid is joined by 8-neighbour edges weighted with
    sqrt(df(D)^2 + alpha(D)^2) at the edge midpoint; grid nodes within
    ``delta_ext`` of an extremum are removed since the metric is only
    defined away from the extrema.

    Raises:
        DisconnectedGraphError: if two saddles cannot reach each other in
            the pruned graph.
    """
    config = config or Config()
    saddles = [cp for cp in cps if cp.is_saddle]
    q = len(saddles)
    if q < 2:
        return np.zeros((q, q))

    n = pair.grid_n
    U, V = pair.grid()
    nodes = np.column_stack([U.ravel(), V.ravel()])
    keep = np.ones(n * n, dtype=bool)
    for cp in cps:
        if not cp.is_saddle:
            keep &= torus_distance(nodes, cp.as_array()) > config.delta_ext

    rows, cols, weights = _grid_edges(pair, keep)
    s_rows, s_cols, s_weights = _saddle_links(pair, saddles, keep)
    size = n * n + q
    graph = sparse.coo_matrix(
        (
            np.concatenate(weights + s_weights),
            (np.concatenate(rows + s_rows), np.concatenate(cols + s_cols)),
        ),
        shape=(size, size),
    ).tocsr()
    logger.debug(
        f"Distance graph: {int(keep.sum())}/{n * n} grid nodes kept, "
        f"{graph.nnz} edges"
    )

    saddle_nodes = np.arange(n * n, size)
    dist = dijkstra(graph, directed=False, indices=saddle_nodes)[:, saddle_nodes]
    if not np.all(np.isfinite(dist)):
        logger.warning(
            f"Saddles are disconnected with delta_ext={config.delta_ext}; "
            f"try a smaller exclusion radius or a finer grid"
        )
        raise DisconnectedGraphError(
            f"Saddles are disconnected in the distance graph "
            f"(delta_ext={config.delta_ext}, grid_n={n})"
        )
    dist = 0.5 * (dist + dist.T)
    np.fill_diagonal(dist, 0.0)
    return dist
