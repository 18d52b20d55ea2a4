"""
Numerical backend for framed Morse pairs on the flat torus.
"""
from .analysis import (
    AnalysisResult,
    SpecialnessVerdict,
    analyze,
    is_special,
    normalize_pair,
)
from .critical import CriticalPoint, find_critical_points
from .distances import saddle_distances
from .framed import ComposedField, FramedPair, RotatedDifferential, ScalarField
from .scenes import list_scenes, make_pair, make_scene
from .separatrix import SeparatrixEdge, SeparatrixGraph, trace_separatrices

__all__ = [
    "AnalysisResult",
    "ComposedField",
    "CriticalPoint",
    "FramedPair",
    "RotatedDifferential",
    "ScalarField",
    "SeparatrixEdge",
    "SeparatrixGraph",
    "SpecialnessVerdict",
    "analyze",
    "find_critical_points",
    "is_special",
    "list_scenes",
    "make_pair",
    "make_scene",
    "normalize_pair",
    "saddle_distances",
    "trace_separatrices",
]
