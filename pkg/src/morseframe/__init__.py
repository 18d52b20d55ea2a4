"""
morseframe - normalization of framed Morse functions.

This package provides functionality to:
- Project saddle values onto scaled permutohedra with a Kuhn-Tucker certificate
- Build the smooth interval reparametrization sending projected values back
- Analyze framed Morse pairs on the flat torus (critical points,
  separatrices, saddle distances) and decide whether they are special
- Normalize a framed pair into a special one

Example:
    Basic usage from command line:

    $ morseframe normalize --scene two_cosines --a 3 --b 1

    Programmatic usage:

    >>> from morseframe import Config, make_pair, normalize_pair
    >>> pair = make_pair("two_cosines", {"a": 3.0, "b": 1.0})
    >>> pair_out, report, verdict = normalize_pair(pair, config=Config())
    >>> verdict.special
    True
"""

__version__ = "0.1.0"
__license__ = "MIT"

from .cli import cli
from .core.config import Config
from .core.exceptions import (
    AnalysisError,
    ConfigurationError,
    DisconnectedGraphError,
    InputError,
    MorseFrameError,
    PreconditionError,
    RefusalError,
    ReportIOError,
    SceneNotMorseError,
    TracingIncompleteError,
)
from .core.models import Report, SceneConfig
from .core.permutohedron import (
    OrderedPartition,
    PermutohedronPoint,
    membership,
    open_face_of,
    partition_from_values,
    refines,
    vertex,
)
from .core.projection import ProjectionResult, brute_force_project, kkt_verify, project
from .core.reparam import (
    IntervalDiffeo,
    NormalizationReport,
    SmoothStep,
    build_diffeo,
    compose_unit,
    epsilon,
    homotopy_values,
    invert_diffeo,
    normalize_saddle_values,
    smooth_step_eval,
)
from .surface import (
    FramedPair,
    analyze,
    find_critical_points,
    is_special,
    make_pair,
    normalize_pair,
    saddle_distances,
    trace_separatrices,
)

__all__ = [
    "__version__",
    "Config",
    "Report",
    "SceneConfig",
    "MorseFrameError",
    "InputError",
    "PreconditionError",
    "RefusalError",
    "ConfigurationError",
    "AnalysisError",
    "SceneNotMorseError",
    "TracingIncompleteError",
    "DisconnectedGraphError",
    "ReportIOError",
    "OrderedPartition",
    "PermutohedronPoint",
    "vertex",
    "partition_from_values",
    "membership",
    "open_face_of",
    "refines",
    "ProjectionResult",
    "project",
    "kkt_verify",
    "brute_force_project",
    "SmoothStep",
    "IntervalDiffeo",
    "NormalizationReport",
    "smooth_step_eval",
    "epsilon",
    "build_diffeo",
    "invert_diffeo",
    "normalize_saddle_values",
    "compose_unit",
    "homotopy_values",
    "FramedPair",
    "make_pair",
    "find_critical_points",
    "trace_separatrices",
    "saddle_distances",
    "analyze",
    "is_special",
    "normalize_pair",
    "cli",
]
