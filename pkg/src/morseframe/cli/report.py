"""
Report assembly and re-verification.
"""
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import Config
from ..core.models import Report, SceneConfig
from ..core.permutohedron import OrderedPartition, membership
from ..core.projection import ProjectionResult, kkt_verify
from ..core.reparam import NormalizationReport, build_diffeo
from ..surface.analysis import AnalysisResult, SpecialnessVerdict

logger = logging.getLogger(__name__)

ITEM1_TOL = 1e-9
ENDPOINT_TOL = 1e-12
FLAT_SAMPLES = 64


def _kkt_fragment(
    analysis: AnalysisResult, normalization: NormalizationReport, config: Config
) -> Dict[str, Any]:
    projection = normalization.projection
    if projection is None:
        return {"lambda": 0.0, "lambda_k": [], "residual": 0.0}
    kappa = normalization.eps / (analysis.q + 1)
    check = kkt_verify(analysis.c, kappa, projection, config.tol_kkt)
    if not check:
        logger.warning(f"KKT certificate failed: {'; '.join(check.violations)}")
    return {
        "lambda": projection.lam,
        "lambda_k": list(projection.lambda_k),
        "residual": check.residual,
    }


def homotopy_entries(
    samples: Sequence[Tuple[float, np.ndarray, Optional[OrderedPartition]]]
) -> List[Dict[str, Any]]:
    return [
        {
            "t": t,
            "values": [float(x) for x in values],
            "face": None if face is None else face.to_one_based(),
        }
        for t, values, face in samples
    ]


def build_report(
    scene: SceneConfig,
    config: Config,
    analysis: AnalysisResult,
    normalization: NormalizationReport,
    before: SpecialnessVerdict,
    after: Optional[SpecialnessVerdict] = None,
    homotopy: Optional[List[Dict[str, Any]]] = None,
) -> Report:
    p, q, r = analysis.counts
    face = normalization.face
    return Report(
        scene=scene.to_dict(),
        p=p,
        q=q,
        r=r,
        critical_points=[cp.to_dict() for cp in analysis.critical_points],
        saddle_distances=[[float(x) for x in row] for row in analysis.d],
        epsilon=normalization.eps,
        c=[float(x) for x in analysis.c],
        c_prime=list(normalization.c_prime),
        scaled_values=list(normalization.scaled_values),
        face=None if face is None else face.to_one_based(),
        t_offsets=list(normalization.diffeo.t),
        kkt=_kkt_fragment(analysis, normalization, config),
        special_before=before.to_dict(),
        special_after=None if after is None else after.to_dict(),
        separatrix_edges=[edge.to_dict() for edge in analysis.graph.edges],
        tolerances=config.tolerances(),
        homotopy=homotopy,
    )


def verify_report(report: Report, config: Config) -> List[str]:
    """Re-check the certificate and the reparametrization guarantees.

    Returns the list of failed checks; empty means the report verifies.
    """
    failures: List[str] = []
    c = np.asarray(report.c, dtype=float)
    q = c.size
    eps = float(report.epsilon)
    if q != report.q:
        failures.append(f"q={report.q} but {q} saddle values")
        return failures

    if q:
        kappa = eps / (q + 1)
        result = ProjectionResult(
            c_prime=tuple(float(x) for x in report.c_prime),
            face=OrderedPartition.from_one_based(report.face or []),
            offsets=tuple(float(x) for x in report.t_offsets[1:-1]),
            lam=float(report.kkt["lambda"]),
            lambda_k=tuple(float(x) for x in report.kkt["lambda_k"]),
        )
        check = kkt_verify(c, kappa, result, config.tol_kkt)
        failures.extend(f"kkt: {v}" for v in check.violations)
        if not membership(report.scaled_values, 2.0 / (q + 1), config.membership_tol):
            failures.append("scaled values leave (2/(q+1)) P")

    h = build_diffeo(
        c, eps, config.tie_tol, config.merge_tol, config.inverse_tol
    )
    recomputed = np.asarray(h.c_prime, dtype=float)
    if q and np.abs(recomputed - np.asarray(report.c_prime)).max() > ITEM1_TOL:
        failures.append("projected values differ from a fresh projection")

    if q and np.abs(np.asarray(h(recomputed)) - c).max() > ITEM1_TOL:
        failures.append("h(c'_j) != c_j")
    lo, hi = h.domain
    if abs(h(lo) + 1.0) > ENDPOINT_TOL or abs(h(hi) - 1.0) > ENDPOINT_TOL:
        failures.append("h does not fix the endpoints -1 and 1")

    radius = eps / (3 * (q + 1))
    centres = list(recomputed) + [lo, hi]
    for centre in centres:
        a, b = max(lo, centre - radius), min(hi, centre + radius)
        ts = np.linspace(a, b, FLAT_SAMPLES)[1:-1]
        if np.any(np.asarray(h.derivative(ts)) != 1.0):
            failures.append(f"h' is not 1 near {centre:.6g}")
    ts = np.linspace(lo, hi, 10_001)
    if np.any(np.asarray(h.derivative(ts)) <= 0.0):
        failures.append("h is not strictly increasing")

    logger.info(f"Verification finished with {len(failures)} failure(s)")
    return failures
