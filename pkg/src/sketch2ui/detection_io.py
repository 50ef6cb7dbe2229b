"""Detector-output I/O: element classes, bounding boxes, annotation CSV parsing.

The on-disk formats are deliberately plain CSV:

* annotation file, one detection per line:
  ``file-location,x-min,y-min,x-max,y-max,class[,confidence]``
* class-map file, one class per line: ``<integer-id>,<class-name>``

Both accept LF or CRLF endings, blank lines, and ``#`` comment lines.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import ClassMapError, DetectionError


class ElementClass(Enum):
    """The ten UI component categories a detector can emit."""

    HEADING = "heading"
    CHECKBOX = "checkbox"
    RADIO = "radio"
    SELECTBOX = "selectbox"
    LABEL = "label"
    LINK = "link"
    BUTTON = "button"
    IMAGE = "image"
    PARAGRAPH = "paragraph"
    TEXTBOX = "textbox"

    @property
    def canonical_name(self) -> str:
        return self.value

    @classmethod
    def from_name(cls, name: str) -> "ElementClass":
        """Resolve a class name case-insensitively against the canonical set."""
        try:
            return _CLASS_BY_NAME[name.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown element class {name!r}") from None


_CLASS_BY_NAME = {c.value: c for c in ElementClass}

#: Display names used in reports ("CheckBox" rather than "checkbox").
DISPLAY_NAMES: Mapping[ElementClass, str] = {
    ElementClass.HEADING: "Heading",
    ElementClass.CHECKBOX: "CheckBox",
    ElementClass.RADIO: "Radio",
    ElementClass.SELECTBOX: "SelectBox",
    ElementClass.LABEL: "Label",
    ElementClass.LINK: "Link",
    ElementClass.BUTTON: "Button",
    ElementClass.IMAGE: "Image",
    ElementClass.PARAGRAPH: "Paragraph",
    ElementClass.TEXTBOX: "TextBox",
}


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned rectangle in sketch pixel coordinates."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if self.x_min < 0 or self.y_min < 0:
            raise ValueError(f"negative coordinate in box {self.as_tuple()}")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(f"inverted or degenerate box {self.as_tuple()}")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)


@dataclass(frozen=True)
class DetectedElement:
    """One detector output: class, box, confidence, and owning sketch."""

    cls: ElementClass
    box: BoundingBox
    confidence: float = 1.0
    source_file: str = ""

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class DetectionSet:
    """All detections of one sketch, in original file order."""

    source_file: str
    elements: tuple[DetectedElement, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class ClassMap:
    """Bijective association between integer ids and element classes."""

    by_id: Mapping[int, ElementClass] = field(default_factory=dict)

    def __post_init__(self):
        classes = list(self.by_id.values())
        if len(set(classes)) != len(classes):
            raise ValueError("class map is not bijective")
        if any(i < 0 for i in self.by_id):
            raise ValueError("class map ids must be non-negative")

    def id_of(self, cls: ElementClass) -> int:
        for i, c in self.by_id.items():
            if c is cls:
                return i
        raise KeyError(cls)

    def class_of(self, class_id: int) -> ElementClass:
        return self.by_id[class_id]

    def __len__(self) -> int:
        return len(self.by_id)


def default_class_map() -> ClassMap:
    """Identity mapping 0..9 over the canonical class order."""
    return ClassMap({i: c for i, c in enumerate(ElementClass)})


def _iter_csv_lines(text: str) -> Iterable[tuple[int, str]]:
    """Yield (1-based line number, stripped content), skipping blanks and comments."""
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_class_map(text: str) -> ClassMap:
    """Parse ``<id>,<name>`` lines into a bijective ClassMap.

    Line order is irrelevant.  Raises ClassMapError (with line number) on
    duplicate ids, duplicate classes, unknown names, or malformed integers.
    """
    by_id: dict[int, ElementClass] = {}
    seen_classes: dict[ElementClass, int] = {}
    for lineno, line in _iter_csv_lines(text):
        fields = line.split(",")
        if len(fields) != 2:
            raise ClassMapError(
                f"expected 2 fields '<id>,<name>', got {len(fields)}", line=lineno
            )
        id_text, name = fields[0].strip(), fields[1]
        try:
            class_id = int(id_text)
        except ValueError:
            raise ClassMapError(f"malformed integer id {id_text!r}", line=lineno) from None
        if class_id < 0:
            raise ClassMapError(f"negative id {class_id}", line=lineno)
        try:
            cls = ElementClass.from_name(name)
        except ValueError:
            raise ClassMapError(f"unknown class name {name.strip()!r}", line=lineno) from None
        if class_id in by_id:
            raise ClassMapError(f"duplicate id {class_id}", line=lineno)
        if cls in seen_classes:
            raise ClassMapError(
                f"duplicate class {cls.canonical_name!r} (already mapped on line "
                f"{seen_classes[cls]})",
                line=lineno,
            )
        by_id[class_id] = cls
        seen_classes[cls] = lineno
    if not by_id:
        raise ClassMapError("empty class map")
    return ClassMap(by_id)


def _parse_number(text: str, what: str, lineno: int) -> float:
    # Locale-independent: decimal point only, no separators.
    t = text.strip()
    if "," in t or "_" in t:
        raise DetectionError(f"malformed {what} {text!r}", line=lineno)
    try:
        return float(t)
    except ValueError:
        raise DetectionError(f"malformed {what} {text!r}", line=lineno) from None


def _resolve_class(token: str, classes: ClassMap, lineno: int) -> ElementClass:
    t = token.strip()
    try:
        return ElementClass.from_name(t)
    except ValueError:
        pass
    try:
        class_id = int(t)
    except ValueError:
        raise DetectionError(f"unresolvable class {t!r}", line=lineno) from None
    try:
        return classes.class_of(class_id)
    except KeyError:
        raise DetectionError(f"class id {class_id} not in class map", line=lineno) from None


def parse_detection_csv(text: str, classes: ClassMap) -> list[DetectionSet]:
    """Parse an annotation CSV into one DetectionSet per distinct source file.

    Each line needs exactly six fields (file, x-min, y-min, x-max, y-max,
    class); a seventh ``confidence`` field in [0, 1] is optional and defaults
    to 1.0.  The class field accepts a canonical name or an integer id
    resolvable through ``classes``.  Sets come back in first-appearance order
    of their source file; elements keep file order.
    """
    per_file: dict[str, list[DetectedElement]] = {}
    for lineno, line in _iter_csv_lines(text):
        fields = line.split(",")
        if len(fields) not in (6, 7):
            raise DetectionError(
                f"expected 6 or 7 comma-separated fields, got {len(fields)}", line=lineno
            )
        source = fields[0].strip()
        if not source:
            raise DetectionError("empty file-location field", line=lineno)
        coords = [
            _parse_number(fields[i], name, lineno)
            for i, name in ((1, "x-min"), (2, "y-min"), (3, "x-max"), (4, "y-max"))
        ]
        cls = _resolve_class(fields[5], classes, lineno)
        confidence = 1.0
        if len(fields) == 7:
            confidence = _parse_number(fields[6], "confidence", lineno)
            if not 0.0 <= confidence <= 1.0:
                raise DetectionError(f"confidence {confidence} outside [0, 1]", line=lineno)
        try:
            box = BoundingBox(*coords)
        except ValueError as exc:
            raise DetectionError(str(exc), line=lineno) from None
        per_file.setdefault(source, []).append(
            DetectedElement(cls=cls, box=box, confidence=confidence, source_file=source)
        )
    if not per_file:
        raise DetectionError("no detections found (file empty or comments only)")
    return [DetectionSet(src, tuple(elems)) for src, elems in per_file.items()]


def _format_number(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(value)


def write_detection_csv(sets: Iterable[DetectionSet]) -> str:
    """Serialize DetectionSets back to annotation CSV (7-field form).

    Inverse of :func:`parse_detection_csv`: parsing the output reproduces the
    input sets exactly, which is what the fixture round-trip tests rely on.
    """
    lines = []
    for ds in sets:
        for el in ds.elements:
            b = el.box
            lines.append(
                ",".join(
                    [
                        ds.source_file,
                        _format_number(b.x_min),
                        _format_number(b.y_min),
                        _format_number(b.x_max),
                        _format_number(b.y_max),
                        el.cls.canonical_name,
                        _format_number(el.confidence),
                    ]
                )
            )
    return "\n".join(lines) + ("\n" if lines else "")


def filter_by_confidence(dets: DetectionSet, threshold: float) -> DetectionSet:
    """Keep exactly the elements with confidence >= threshold, order preserved."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside [0, 1]")
    kept = tuple(el for el in dets.elements if el.confidence >= threshold)
    return DetectionSet(dets.source_file, kept)


def class_histogram(sets: Iterable[DetectionSet]) -> dict[ElementClass, int]:
    """Occurrences per class across all sets; absent classes map to 0."""
    counts: Counter[ElementClass] = Counter()
    for ds in sets:
        counts.update(el.cls for el in ds.elements)
    return {cls: counts.get(cls, 0) for cls in ElementClass}
