"""
Combinatorics and metric geometry of the permutohedron.

The permutohedron of order q is the convex hull of the points

    P_rho = sum_k (k - (q+1)/2) e_{rho_k},   rho a permutation of {1..q},

and its open faces correspond one-to-one with ordered partitions
(J_1, ..., J_s) of {1..q}. Indices are 0-based in this module; reports convert
to 1-based through ``OrderedPartition.to_one_based``.
"""
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from .exceptions import InputError, PreconditionError

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class OrderedPartition:
    """An ordered partition of {0..q-1}, blocks stored in ascending order."""

    blocks: Tuple[Tuple[int, ...], ...]
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise InputError(f"Ground set size must be positive, got q={self.q}")
        blocks = tuple(tuple(sorted(int(j) for j in block)) for block in self.blocks)
        if any(len(block) == 0 for block in blocks):
            raise InputError("Ordered partition blocks must be non-empty")
        flat = [j for block in blocks for j in block]
        if sorted(flat) != list(range(self.q)):
            raise InputError(
                f"Blocks {blocks} do not partition a ground set of size {self.q}"
            )
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_one_based(cls, blocks: Sequence[Sequence[int]]) -> "OrderedPartition":
        """Build from 1-based blocks, as written in reports."""
        zero_based = tuple(tuple(j - 1 for j in block) for block in blocks)
        return cls(zero_based, sum(len(block) for block in blocks))

    def to_one_based(self) -> List[List[int]]:
        """Blocks with 1-based indices."""
        return [[j + 1 for j in block] for block in self.blocks]

    @property
    def s(self) -> int:
        """Number of blocks."""
        return len(self.blocks)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(block) for block in self.blocks)

    @property
    def ranks(self) -> Tuple[int, ...]:
        """Cumulative block ends r_1 < ... < r_s = q."""
        return tuple(itertools.accumulate(self.sizes))

    @property
    def dimension(self) -> int:
        """Dimension q - s of the corresponding face."""
        return self.q - self.s

    @property
    def order(self) -> Tuple[int, ...]:
        """The permutation rho obtained by concatenating the blocks."""
        return tuple(j for block in self.blocks for j in block)

    def block_of(self, j: int) -> int:
        """Position of the block containing index j."""
        for k, block in enumerate(self.blocks):
            if j in block:
                return k
        raise InputError(f"Index {j} is outside the ground set of size {self.q}")

    def coarsen(self, cuts: Sequence[int]) -> "OrderedPartition":
        """Merge consecutive blocks.

        ``cuts`` lists cumulative block counts 0 < k_1 < ... < k_u = s; the
        result is (J_1 u ... u J_{k_1}, J_{k_1+1} u ... u J_{k_2}, ...).
        """
        cuts = list(cuts)
        if not cuts or cuts[-1] != self.s or any(
            b <= a for a, b in zip([0] + cuts, cuts)
        ):
            raise InputError(f"Invalid coarsening cuts {cuts} for {self.s} blocks")
        merged = []
        start = 0
        for end in cuts:
            merged.append(tuple(j for block in self.blocks[start:end] for j in block))
            start = end
        return OrderedPartition(tuple(merged), self.q)

    def __str__(self) -> str:
        inner = ",".join(
            "{" + ",".join(str(j) for j in block) + "}" for block in self.to_one_based()
        )
        return f"({inner})"


@dataclass(frozen=True)
class PermutohedronPoint:
    """A point of R^q in the standard coordinates of the saddle cochains."""

    coords: Tuple[float, ...]

    @property
    def q(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def scaled(self, kappa: float) -> "PermutohedronPoint":
        return PermutohedronPoint(tuple(kappa * x for x in self.coords))


def _as_vector(c: Sequence[float]) -> np.ndarray:
    vec = np.asarray(c, dtype=float).reshape(-1)
    if vec.size == 0:
        raise InputError("Expected a non-empty vector (q >= 1)")
    if not np.all(np.isfinite(vec)):
        raise InputError(f"Vector contains non-finite entries: {vec.tolist()}")
    return vec


def _check_kappa(kappa: float) -> None:
    if not kappa > 0:
        raise InputError(f"Scale kappa must be positive, got {kappa}")


def weights(q: int, kappa: float = 1.0) -> np.ndarray:
    """Sorted coordinates of the scaled vertices, kappa * (k - (q+1)/2)."""
    return kappa * (np.arange(1, q + 1, dtype=float) - (q + 1) / 2.0)


def vertex(rho: Sequence[int]) -> PermutohedronPoint:
    """The vertex P_rho for a 0-based permutation rho of range(q)."""
    rho = [int(r) for r in rho]
    q = len(rho)
    if q == 0 or sorted(rho) != list(range(q)):
        raise InputError(f"{rho} is not a permutation of range({q})")
    coords = np.empty(q)
    coords[rho] = weights(q)
    return PermutohedronPoint(tuple(float(x) for x in coords))


def vertices(q: int, kappa: float = 1.0) -> List[PermutohedronPoint]:
    """All q! vertices of kappa * P^{q-1}, in lexicographic order of rho."""
    _check_kappa(kappa)
    return [
        vertex(rho).scaled(kappa) for rho in itertools.permutations(range(q))
    ]


def partition_from_values(
    c: Sequence[float], tie_tol: float = 0.0
) -> OrderedPartition:
    """Group indices by value, blocks ordered by increasing value.

    Consecutive sorted values closer than ``tie_tol`` share a block; with
    ``tie_tol = 0`` this is exact equality.
    """
    vec = _as_vector(c)
    order = np.argsort(vec, kind="stable")
    blocks: List[List[int]] = [[int(order[0])]]
    for prev, cur in zip(order[:-1], order[1:]):
        if vec[cur] - vec[prev] > tie_tol:
            blocks.append([])
        blocks[-1].append(int(cur))
    return OrderedPartition(tuple(tuple(b) for b in blocks), vec.size)


def constraint_slacks(
    c: Sequence[float], kappa: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted order of c and the slacks of the prefix constraints.

    For every cardinality m = 1..q-1 the most violated constraint among all
    subsets of size m is attained by the m smallest entries, so
    slack[m-1] = (sum of m smallest) - kappa * m (m - q) / 2 must be >= 0.
    """
    vec = _as_vector(c)
    _check_kappa(kappa)
    q = vec.size
    order = np.argsort(vec, kind="stable")
    prefix = np.cumsum(vec[order])[:-1]
    m = np.arange(1, q, dtype=float)
    slacks = prefix - kappa * m * (m - q) / 2.0
    return order, slacks


def membership(
    c: Sequence[float], kappa: float, tol: float = DEFAULT_TOL
) -> bool:
    """True iff c lies in kappa * P^{q-1} up to the absolute tolerance."""
    vec = _as_vector(c)
    _, slacks = constraint_slacks(vec, kappa)
    if abs(float(vec.sum())) > tol:
        return False
    return bool(np.all(slacks >= -tol))


def boundary_margin(c: Sequence[float], kappa: float) -> float:
    """Signed margin of c against kappa * P^{q-1}.

    Positive inside (smallest prefix slack), negative outside; the hyperplane
    defect |sum c| always counts against the point.
    """
    vec = _as_vector(c)
    _, slacks = constraint_slacks(vec, kappa)
    interior = float(slacks.min()) if slacks.size else 0.0
    return interior - abs(float(vec.sum()))


def open_face_of(
    c: Sequence[float], kappa: float, tol: float = DEFAULT_TOL
) -> OrderedPartition:
    """Ordered partition of the open face of kappa * P^{q-1} containing c.

    A block boundary is placed after the m smallest coordinates exactly when
    the corresponding prefix constraint is active within ``tol``.
    """
    vec = _as_vector(c)
    if not membership(vec, kappa, tol):
        raise PreconditionError(
            f"Point {vec.tolist()} is not in the permutohedron scaled by {kappa}"
        )
    order, slacks = constraint_slacks(vec, kappa)
    blocks: List[List[int]] = [[]]
    for m, j in enumerate(order):
        blocks[-1].append(int(j))
        if m < vec.size - 1 and slacks[m] <= tol:
            blocks.append([])
    return OrderedPartition(tuple(tuple(b) for b in blocks), vec.size)


def refines(fine: OrderedPartition, coarse: OrderedPartition) -> bool:
    """True iff every block of ``coarse`` is a union of consecutive blocks of
    ``fine`` (reflexive)."""
    if fine.q != coarse.q:
        return False
    fine_iter = iter(fine.blocks)
    for block in coarse.blocks:
        target = set(block)
        collected: set = set()
        while len(collected) < len(target):
            nxt = next(fine_iter, None)
            if nxt is None:
                return False
            collected.update(nxt)
        if collected != target:
            return False
    return next(fine_iter, None) is None


def ordered_partitions(q: int) -> Iterator[OrderedPartition]:
    """All ordered partitions of range(q), first blocks in combination order."""
    if q < 1:
        raise InputError(f"Ground set size must be positive, got q={q}")

    def _rec(remaining: Tuple[int, ...]) -> Iterator[List[Tuple[int, ...]]]:
        if not remaining:
            yield []
            return
        for size in range(1, len(remaining) + 1):
            for first in itertools.combinations(remaining, size):
                rest = tuple(j for j in remaining if j not in first)
                for tail in _rec(rest):
                    yield [first] + tail

    for blocks in _rec(tuple(range(q))):
        yield OrderedPartition(tuple(blocks), q)


def count_faces(q: int) -> int:
    """Number of ordered partitions of a q-set (ordered Bell number)."""
    counts = [1]
    for n in range(1, q + 1):
        counts.append(sum(math.comb(n, k) * counts[n - k] for k in range(1, n + 1)))
    return counts[q]
