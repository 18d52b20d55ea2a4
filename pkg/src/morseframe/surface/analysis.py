"""
End-to-end analysis of framed pairs: saddle data, specialness and the
normalization (f, alpha) -> (2/eps)(h^{-1} o f, alpha).
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..core.config import Config
from ..core.permutohedron import (
    OrderedPartition,
    boundary_margin,
    membership,
    open_face_of,
)
from ..core.reparam import NormalizationReport, epsilon, normalize_saddle_values
from .critical import CriticalPoint, find_critical_points
from .distances import saddle_distances
from .framed import ComposedField, FramedPair
from .separatrix import SeparatrixGraph, trace_separatrices

logger = logging.getLogger(__name__)


@dataclass
class AnalysisResult:
    """Everything the normalization consumes from a framed pair."""

    pair: FramedPair
    critical_points: List[CriticalPoint]
    c: np.ndarray
    d: np.ndarray
    graph: SeparatrixGraph
    eps: float
    eps_unsafeguarded: float

    @property
    def counts(self) -> Tuple[int, int, int]:
        """(p, q, r): numbers of minima, saddles and maxima."""
        return tuple(  # type: ignore[return-value]
            sum(1 for cp in self.critical_points if cp.index == k) for k in range(3)
        )

    @property
    def q(self) -> int:
        return self.counts[1]

    @property
    def saddles(self) -> List[CriticalPoint]:
        return [cp for cp in self.critical_points if cp.is_saddle]


@dataclass
class SpecialnessVerdict:
    """Outcome of the two specialness conditions.

    ``condition_ii`` is None when condition (i) fails, since the face it
    refers to is then undefined.
    """

    condition_i: bool
    margin: Optional[float]
    condition_ii: Optional[bool]
    violations: List[Tuple[int, int]] = field(default_factory=list)
    face: Optional[OrderedPartition] = None
    special: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "condition_i": self.condition_i,
            "margin": self.margin,
            "condition_ii": self.condition_ii,
            "violations": [[a + 1, b + 1] for a, b in self.violations],
            "face": None if self.face is None else self.face.to_one_based(),
            "special": self.special,
        }


def _safeguard(
    c: np.ndarray, graph: SeparatrixGraph, eps: float, tie_tol: float
) -> float:
    """Shrink eps so |c_i - c_j| >= 3 eps on separatrix-connected saddles."""
    gaps = [
        abs(float(c[a] - c[b]))
        for a, b in graph.saddle_saddle_pairs
        if abs(float(c[a] - c[b])) > tie_tol
    ]
    if gaps and min(gaps) / 3.0 < eps:
        logger.warning(
            f"Separatrix-connected saddles force eps down from {eps:.6g} to "
            f"{min(gaps) / 3.0:.6g}"
        )
        return min(gaps) / 3.0
    return eps


def analyze(pair: FramedPair, config: Optional[Config] = None) -> AnalysisResult:
    """Critical points, saddle values c, distances d, separatrices and eps."""
    config = config or Config()
    cps = find_critical_points(pair, config)
    saddles = [cp for cp in cps if cp.is_saddle]
    c = np.array([cp.value for cp in saddles], dtype=float)
    graph = trace_separatrices(pair, cps, config)
    d = saddle_distances(pair, cps, config)

    raw = epsilon(c, d if c.size >= 2 else None)
    eps = _safeguard(c, graph, raw, config.tie_tol)
    logger.info(f"Analysis of {pair.scene}: q={c.size}, eps={eps:.6g}")
    return AnalysisResult(pair, cps, c, d, graph, eps, raw)


def is_special(
    pair: FramedPair,
    analysis: Optional[AnalysisResult] = None,
    config: Optional[Config] = None,
) -> SpecialnessVerdict:
    """Check both specialness conditions for a framed pair.

    (i) the saddle values lie in (2/(q+1)) P^{q-1};
    (ii) no separatrix joins two saddles of the same block of the open face
    containing the saddle values.
    """
    config = config or Config()
    if analysis is None:
        analysis = analyze(pair, config)
    c = analysis.c
    q = c.size
    if q == 0:
        return SpecialnessVerdict(True, None, True, special=True)

    kappa = 2.0 / (q + 1)
    margin = boundary_margin(c, kappa)
    if not membership(c, kappa, config.membership_tol):
        logger.info(f"Condition (i) fails: margin {margin:.3e}")
        return SpecialnessVerdict(False, margin, None, special=False)

    face = open_face_of(c, kappa, config.membership_tol)
    violations = sorted(
        (a, b)
        for a, b in analysis.graph.saddle_saddle_pairs
        if a != b and face.block_of(a) == face.block_of(b)
    )
    if violations:
        logger.info(f"Condition (ii) fails for saddle pairs {violations}")
    return SpecialnessVerdict(
        condition_i=True,
        margin=margin,
        condition_ii=not violations,
        violations=violations,
        face=face,
        special=not violations,
    )


def normalize_pair(
    pair: FramedPair,
    analysis: Optional[AnalysisResult] = None,
    config: Optional[Config] = None,
) -> Tuple[FramedPair, NormalizationReport, SpecialnessVerdict]:
    """Replace (f, alpha) by ((2/eps) h^{-1} o f, (2/eps) alpha) and re-verify."""
    config = config or Config()
    if analysis is None:
        analysis = analyze(pair, config)
    report = normalize_saddle_values(
        analysis.c,
        analysis.d if analysis.q >= 2 else None,
        tie_tol=config.tie_tol,
        merge_tol=config.merge_tol,
        inverse_tol=config.inverse_tol,
        eps=analysis.eps,
    )
    pair_out = FramedPair(
        field=ComposedField(pair.field, report.diffeo),
        alpha=pair.alpha.scaled(2.0 / report.eps),
        grid_n=pair.grid_n,
        scene=pair.scene,
        metadata={**pair.metadata, "normalized_eps": report.eps},
    )
    verdict = is_special(pair_out, analyze(pair_out, config), config)
    logger.info(f"Normalized {pair.scene}: special after = {verdict.special}")
    return pair_out, report, verdict
