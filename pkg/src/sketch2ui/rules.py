"""Resolution rules: class priorities, duplicate conflicts, proximity relations.

A rules file is a JSON document; every key is optional and falls back to the
defaults below::

    {
      "priority": ["selectbox", "textbox", ...],        # highest first, all 10
      "conflicts": [["checkbox", "label"], ...],        # unordered pairs
      "relations": [
        {"pair": ["button", "textbox"],
         "parent_type": "Form", "relation": "validation"}
      ],
      "duplicate_threshold": 0.5,
      "ratio_mode": "min-area"                          # or "iou"
    }
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Mapping

from .detection_io import ElementClass
from .errors import RulesError

#: Container types a proximity relation may introduce into the UI tree.
GROUP_PARENT_TYPES = ("Form", "LabeledControl")

# Composite/structured controls outrank plain text classes, so a duplicate
# checkbox-vs-label conflict resolves to the checkbox.
DEFAULT_PRIORITY_ORDER = (
    ElementClass.SELECTBOX,
    ElementClass.TEXTBOX,
    ElementClass.CHECKBOX,
    ElementClass.RADIO,
    ElementClass.BUTTON,
    ElementClass.IMAGE,
    ElementClass.HEADING,
    ElementClass.LINK,
    ElementClass.PARAGRAPH,
    ElementClass.LABEL,
)

DEFAULT_CONFLICTS = (
    (ElementClass.CHECKBOX, ElementClass.LABEL),
    (ElementClass.RADIO, ElementClass.LABEL),
    (ElementClass.TEXTBOX, ElementClass.LABEL),
    (ElementClass.SELECTBOX, ElementClass.TEXTBOX),
    (ElementClass.BUTTON, ElementClass.LABEL),
    (ElementClass.LINK, ElementClass.LABEL),
    (ElementClass.HEADING, ElementClass.LABEL),
    (ElementClass.HEADING, ElementClass.PARAGRAPH),
)

DEFAULT_RELATIONS = (
    ((ElementClass.BUTTON, ElementClass.TEXTBOX), ("Form", "validation")),
    ((ElementClass.CHECKBOX, ElementClass.LABEL), ("LabeledControl", "caption")),
    ((ElementClass.RADIO, ElementClass.LABEL), ("LabeledControl", "caption")),
)


class RatioMode(enum.Enum):
    MIN_AREA = "min-area"
    IOU = "iou"


def _pair_key(a: ElementClass, b: ElementClass) -> frozenset[ElementClass]:
    return frozenset((a, b))


def default_priority() -> dict[ElementClass, int]:
    return {cls: rank for rank, cls in enumerate(DEFAULT_PRIORITY_ORDER)}


def default_conflicts() -> frozenset[frozenset[ElementClass]]:
    return frozenset(_pair_key(a, b) for a, b in DEFAULT_CONFLICTS)


def default_relations() -> dict[frozenset[ElementClass], tuple[str, str]]:
    return {_pair_key(a, b): rel for (a, b), rel in DEFAULT_RELATIONS}


@dataclass(frozen=True)
class ResolutionRules:
    """Everything the overlap engine needs to resolve a scene."""

    priority: Mapping[ElementClass, int] = field(default_factory=default_priority)
    conflicts: frozenset[frozenset[ElementClass]] = field(default_factory=default_conflicts)
    relations: Mapping[frozenset[ElementClass], tuple[str, str]] = field(
        default_factory=default_relations
    )
    duplicate_threshold: float = 0.5
    ratio_mode: RatioMode = RatioMode.MIN_AREA

    def __post_init__(self):
        if not 0.0 < self.duplicate_threshold <= 1.0:
            raise ValueError(
                f"duplicate_threshold {self.duplicate_threshold} outside (0, 1]"
            )
        ranks = [self.priority.get(cls) for cls in ElementClass]
        if None in ranks or len(set(ranks)) != len(ranks):
            raise ValueError("priority must assign a distinct rank to every class")

    def in_conflict(self, a: ElementClass, b: ElementClass) -> bool:
        return _pair_key(a, b) in self.conflicts

    def relation_for(self, a: ElementClass, b: ElementClass) -> tuple[str, str] | None:
        return self.relations.get(_pair_key(a, b))


def _parse_class(name, *, path=None) -> ElementClass:
    if not isinstance(name, str):
        raise RulesError(f"class name must be a string, got {name!r}", path=path)
    try:
        return ElementClass.from_name(name)
    except ValueError as exc:
        raise RulesError(str(exc), path=path) from None


def _parse_pair(item, *, path=None) -> frozenset[ElementClass]:
    if not isinstance(item, list) or len(item) != 2:
        raise RulesError(f"expected a 2-element class pair, got {item!r}", path=path)
    a, b = (_parse_class(n, path=path) for n in item)
    if a is b:
        raise RulesError(f"pair must name two distinct classes, got {item!r}", path=path)
    return _pair_key(a, b)


def parse_rules(text: str, *, path: str | None = None) -> ResolutionRules:
    """Parse a rules JSON document; absent keys keep their defaults."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RulesError(f"malformed JSON: {exc}", path=path) from None
    if not isinstance(doc, dict):
        raise RulesError("rules document must be a JSON object", path=path)
    known = {"priority", "conflicts", "relations", "duplicate_threshold", "ratio_mode"}
    unknown = set(doc) - known
    if unknown:
        raise RulesError(f"unknown rules keys {sorted(unknown)}", path=path)

    priority = default_priority()
    if "priority" in doc:
        names = doc["priority"]
        if not isinstance(names, list):
            raise RulesError("'priority' must be an array of class names", path=path)
        order = [_parse_class(n, path=path) for n in names]
        if len(set(order)) != len(ElementClass) or len(order) != len(ElementClass):
            raise RulesError(
                "'priority' must list each of the 10 classes exactly once", path=path
            )
        priority = {cls: rank for rank, cls in enumerate(order)}

    conflicts = default_conflicts()
    if "conflicts" in doc:
        if not isinstance(doc["conflicts"], list):
            raise RulesError("'conflicts' must be an array of pairs", path=path)
        conflicts = frozenset(_parse_pair(p, path=path) for p in doc["conflicts"])

    relations = default_relations()
    if "relations" in doc:
        if not isinstance(doc["relations"], list):
            raise RulesError("'relations' must be an array of objects", path=path)
        relations = {}
        for entry in doc["relations"]:
            if not isinstance(entry, dict) or set(entry) != {"pair", "parent_type", "relation"}:
                raise RulesError(
                    "each relation needs exactly the keys pair/parent_type/relation",
                    path=path,
                )
            parent = entry["parent_type"]
            if parent not in GROUP_PARENT_TYPES:
                raise RulesError(
                    f"parent_type {parent!r} not one of {list(GROUP_PARENT_TYPES)}",
                    path=path,
                )
            relation = entry["relation"]
            if not isinstance(relation, str) or not relation:
                raise RulesError("relation must be a non-empty string", path=path)
            relations[_parse_pair(entry["pair"], path=path)] = (parent, relation)

    threshold = doc.get("duplicate_threshold", 0.5)
    if not isinstance(threshold, (int, float)) or isinstance(threshold, bool):
        raise RulesError("'duplicate_threshold' must be a number", path=path)

    mode_name = doc.get("ratio_mode", RatioMode.MIN_AREA.value)
    try:
        mode = RatioMode(mode_name)
    except ValueError:
        raise RulesError(
            f"'ratio_mode' must be 'min-area' or 'iou', got {mode_name!r}", path=path
        ) from None

    try:
        return ResolutionRules(
            priority=priority,
            conflicts=conflicts,
            relations=relations,
            duplicate_threshold=float(threshold),
            ratio_mode=mode,
        )
    except ValueError as exc:
        raise RulesError(str(exc), path=path) from None


def load_rules(path: str) -> ResolutionRules:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_rules(fh.read(), path=path)
