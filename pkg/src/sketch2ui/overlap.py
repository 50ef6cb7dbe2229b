"""Overlap geometry and scene resolution.

Detector boxes overlap for two distinct reasons: genuinely adjacent
components (button next to its text-box), or one sketched component misread
as two classes (a captioned checkbox seen as checkbox + label).  The overlap
ratio splits the cases at a 50% threshold: below it the pair is *proximity*
(kept, possibly grouped into a composite), at or above it *duplicate* (one
element is filtered out).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .detection_io import BoundingBox, DetectedElement, DetectionSet
from .rules import RatioMode, ResolutionRules


class OverlapKind(enum.Enum):
    NONE = "none"
    PROXIMITY = "proximity"
    DUPLICATE = "duplicate"


def overlap_lengths(b1: BoundingBox, b2: BoundingBox) -> tuple[float, float]:
    """Lengths of the overlap along x and y: clamped interval intersections."""
    dx = min(b1.x_max, b2.x_max) - max(b1.x_min, b2.x_min)
    dy = min(b1.y_max, b2.y_max) - max(b1.y_min, b2.y_min)
    return (max(dx, 0.0), max(dy, 0.0))


def overlap_area(b1: BoundingBox, b2: BoundingBox) -> float:
    dx, dy = overlap_lengths(b1, b2)
    return dx * dy


def overlap_ratio(
    b1: BoundingBox, b2: BoundingBox, mode: RatioMode = RatioMode.MIN_AREA
) -> float:
    """Overlap area normalized to [0, 1].

    Default denominator is the smaller box area, so a small component fully
    inside a large one scores 1.0; IoU is available for experimentation.
    """
    inter = overlap_area(b1, b2)
    if mode is RatioMode.IOU:
        return inter / (b1.area + b2.area - inter)
    return inter / min(b1.area, b2.area)


def classify_overlap(
    e1: DetectedElement, e2: DetectedElement, rules: ResolutionRules
) -> OverlapKind:
    ratio = overlap_ratio(e1.box, e2.box, rules.ratio_mode)
    if ratio == 0.0:
        return OverlapKind.NONE
    if ratio >= rules.duplicate_threshold:
        return OverlapKind.DUPLICATE
    return OverlapKind.PROXIMITY


def overlap_filter(
    e1: DetectedElement, e2: DetectedElement, rules: ResolutionRules
) -> tuple[DetectedElement, DetectedElement, str]:
    """Pick the survivor of a duplicate pair; returns (kept, removed, reason).

    A conflict-table pair resolves by class priority (lower rank wins).
    Otherwise the higher confidence wins, ties broken by larger box area,
    then by input order (``e1`` is the earlier element).
    """
    if e1.cls is not e2.cls and rules.in_conflict(e1.cls, e2.cls):
        if rules.priority[e1.cls] < rules.priority[e2.cls]:
            return e1, e2, "duplicate: priority"
        return e2, e1, "duplicate: priority"
    if e1.confidence != e2.confidence:
        kept, removed = (e1, e2) if e1.confidence > e2.confidence else (e2, e1)
        return kept, removed, "duplicate: confidence"
    if e1.box.area != e2.box.area:
        kept, removed = (e1, e2) if e1.box.area > e2.box.area else (e2, e1)
        return kept, removed, "duplicate: area"
    return e1, e2, "duplicate: order"


def group_proximal(
    e1: DetectedElement, e2: DetectedElement, rules: ResolutionRules
) -> tuple[str, str] | None:
    """(parent_type, relation) for a related proximity pair, else None.

    The pair lookup is symmetric; unrelated proximity pairs stay independent
    siblings.
    """
    return rules.relation_for(e1.cls, e2.cls)


@dataclass(frozen=True)
class GroupDirective:
    """Indices (into the retained element list) to wrap in one container."""

    members: tuple[int, ...]
    parent_type: str
    relation: str

    def __post_init__(self):
        if len(set(self.members)) < 2:
            raise ValueError("a group needs at least 2 distinct members")


@dataclass(frozen=True)
class RemovedElement:
    element: DetectedElement
    reason: str


@dataclass(frozen=True)
class ResolvedScene:
    """Survivors of duplicate filtering plus grouping and removal diagnostics."""

    source_file: str
    elements: tuple[DetectedElement, ...]
    groups: tuple[GroupDirective, ...]
    removed: tuple[RemovedElement, ...]


def _boxes_array(elements) -> np.ndarray:
    return np.array([e.box.as_tuple() for e in elements], dtype=np.float64)


def resolve_all(dets: DetectionSet, rules: ResolutionRules | None = None) -> ResolvedScene:
    """Resolve every overlap in one detection set.

    Duplicate pairs are processed in descending overlap ratio (ties by pair
    enumeration order); each filtering removes one element, and removed
    elements take part in no further pairs.  Proximity pairs among the
    survivors then yield group directives, merged when they share a member
    and a parent type.  Survivors keep their input order.
    """
    if rules is None:
        rules = ResolutionRules()
    elements = dets.elements
    n = len(elements)
    if n == 0:
        return ResolvedScene(dets.source_file, (), (), ())

    ratio = kernels.pairwise_overlap_ratio(
        _boxes_array(elements), rules.ratio_mode is RatioMode.IOU
    )

    def ordered_pairs(predicate):
        pairs = [
            (i, j) for i in range(n) for j in range(i + 1, n) if predicate(ratio[i, j])
        ]
        pairs.sort(key=lambda p: -ratio[p[0], p[1]])  # stable: ties keep lex order
        return pairs

    removed: dict[int, str] = {}
    for i, j in ordered_pairs(lambda r: r >= rules.duplicate_threshold):
        if i in removed or j in removed:
            continue
        kept, _, reason = overlap_filter(elements[i], elements[j], rules)
        removed[j if kept is elements[i] else i] = reason

    survivors = [i for i in range(n) if i not in removed]
    survivor_set = set(survivors)

    # Proximity grouping on survivors, same processing order as above.
    # An element joins at most one group; a directive whose member is already
    # committed to a group of a different parent type is dropped.
    group_parent: list[str] = []
    group_relation: list[str] = []
    group_members: list[set[int]] = []
    group_of: dict[int, int] = {}

    for i, j in ordered_pairs(lambda r: 0.0 < r < rules.duplicate_threshold):
        if i not in survivor_set or j not in survivor_set:
            continue
        rel = group_proximal(elements[i], elements[j], rules)
        if rel is None:
            continue
        parent, relation = rel
        gi, gj = group_of.get(i), group_of.get(j)
        if gi is None and gj is None:
            group_parent.append(parent)
            group_relation.append(relation)
            group_members.append({i, j})
            group_of[i] = group_of[j] = len(group_parent) - 1
        elif gi is not None and gj is None:
            if group_parent[gi] == parent:
                group_members[gi].add(j)
                group_of[j] = gi
        elif gi is None and gj is not None:
            if group_parent[gj] == parent:
                group_members[gj].add(i)
                group_of[i] = gj
        elif gi != gj and group_parent[gi] == parent and group_parent[gj] == parent:
            keep, fold = min(gi, gj), max(gi, gj)
            group_members[keep] |= group_members[fold]
            for m in group_members[fold]:
                group_of[m] = keep
            group_members[fold] = set()

    retained_index = {orig: k for k, orig in enumerate(survivors)}
    directives = tuple(
        GroupDirective(
            members=tuple(sorted(retained_index[m] for m in group_members[g])),
            parent_type=group_parent[g],
            relation=group_relation[g],
        )
        for g in range(len(group_parent))
        if len(group_members[g]) >= 2
    )

    return ResolvedScene(
        source_file=dets.source_file,
        elements=tuple(elements[i] for i in survivors),
        groups=directives,
        removed=tuple(
            RemovedElement(elements[i], removed[i]) for i in sorted(removed)
        ),
    )
