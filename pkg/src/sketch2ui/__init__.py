"""sketch2ui: compile UI-sketch detections into a UI tree and runnable code.

Pipeline: annotation CSV -> confidence filter -> overlap resolution ->
layout inference -> platform-independent UI tree -> HTML / Android XML.
"""

__version__ = "0.1.0"

from .detection_io import (
    BoundingBox,
    ClassMap,
    DetectedElement,
    DetectionSet,
    ElementClass,
    class_histogram,
    filter_by_confidence,
    parse_class_map,
    parse_detection_csv,
)
from .overlap import (
    OverlapKind,
    ResolvedScene,
    classify_overlap,
    overlap_area,
    overlap_lengths,
    overlap_ratio,
    resolve_all,
)
from .rules import RatioMode, ResolutionRules, load_rules, parse_rules

__all__ = [
    "BoundingBox",
    "ClassMap",
    "DetectedElement",
    "DetectionSet",
    "ElementClass",
    "OverlapKind",
    "RatioMode",
    "ResolutionRules",
    "ResolvedScene",
    "class_histogram",
    "classify_overlap",
    "filter_by_confidence",
    "load_rules",
    "overlap_area",
    "overlap_lengths",
    "overlap_ratio",
    "parse_class_map",
    "parse_detection_csv",
    "parse_rules",
    "resolve_all",
]
