"""Platform-independent UI tree: layout inference, construction, canonical JSON.

Layout turns absolute detector boxes into document order: elements whose
vertical intervals overlap by at least half the smaller height share a row
(transitively), rows run top to bottom, elements left to right.  Group
directives from overlap resolution become intermediate container nodes.

The JSON form is canonical byte-for-byte: fixed key order (type, id, props,
bbox, children), lexicographically sorted props, bbox as a 4-element array,
integral coordinates rendered as integers, 2-space indentation, trailing
newline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import kernels
from .detection_io import DISPLAY_NAMES, BoundingBox, ElementClass
from .errors import IRError
from .overlap import ResolvedScene
from .rules import GROUP_PARENT_TYPES

PAGE_TYPE = "Page"
ROW_TYPE = "Row"
CONTAINER_TYPES = (PAGE_TYPE, ROW_TYPE) + GROUP_PARENT_TYPES
ELEMENT_TYPES = tuple(DISPLAY_NAMES[cls] for cls in ElementClass)
NODE_TYPES = frozenset(CONTAINER_TYPES) | frozenset(ELEMENT_TYPES)

LOREM_SENTENCE = "Lorem ipsum dolor sit amet, consectetur adipiscing elit."

DEFAULT_PROPS: dict[str, dict[str, str]] = {
    "Heading": {"text": "Heading"},
    "CheckBox": {"checked": "false"},
    "Radio": {"checked": "false"},
    "SelectBox": {"options": "Option 1;Option 2"},
    "Label": {"text": "Label"},
    "Link": {"href": "#"},
    "Button": {"text": "Button"},
    "Image": {"alt": "Image"},
    "Paragraph": {"text": LOREM_SENTENCE},
    "TextBox": {"placeholder": "Text"},
}


@dataclass(frozen=True)
class UINode:
    """One node of the UI tree; element-typed nodes are childless leaves."""

    type: str
    id: str
    props: dict[str, str] = field(default_factory=dict)
    bbox: BoundingBox | None = None
    children: tuple["UINode", ...] = ()

    def leaves(self) -> list["UINode"]:
        if self.type in ELEMENT_TYPES:
            return [self]
        out: list[UINode] = []
        for child in self.children:
            out.extend(child.leaves())
        return out


@dataclass(frozen=True)
class LayoutLeaf:
    element_index: int  # index into the resolved scene's element list
    cls: ElementClass
    box: BoundingBox


@dataclass(frozen=True)
class LayoutGroup:
    parent_type: str
    relation: str
    children: tuple[LayoutLeaf, ...]


@dataclass(frozen=True)
class LayoutRow:
    items: tuple[Union[LayoutLeaf, LayoutGroup], ...]


@dataclass(frozen=True)
class LayoutTree:
    rows: tuple[LayoutRow, ...]

    def leaf_indices(self) -> list[int]:
        out = []
        for row in self.rows:
            for item in row.items:
                if isinstance(item, LayoutLeaf):
                    out.append(item.element_index)
                else:
                    out.extend(leaf.element_index for leaf in item.children)
        return out


def row_assignment(
    boxes: np.ndarray, overlap_threshold: float = 0.5
) -> np.ndarray:
    """Row label per box: transitive closure of the pairwise banding rule.

    Two boxes band together when their vertical overlap is at least
    ``overlap_threshold`` of the smaller box height; labels count up in
    first-occurrence order.
    """
    if boxes.shape[0] == 0:
        return np.empty(0, dtype=np.int64)
    frac = kernels.vertical_overlap_fraction(boxes)
    return kernels.band_labels(frac >= overlap_threshold)


def infer_layout(scene: ResolvedScene, overlap_threshold: float = 0.5) -> LayoutTree:
    """Band elements into rows and realize group directives as containers.

    Rows are ordered by their minimum y_min, items within a row by x_min
    (ties by scene order).  A group container sits at the position of its
    left-most member; its children keep the global (row, x_min) order.
    Rows emptied by grouping are dropped.
    """
    elements = scene.elements
    n = len(elements)
    if n == 0:
        return LayoutTree(())
    boxes = np.array([e.box.as_tuple() for e in elements], dtype=np.float64)
    labels = row_assignment(boxes, overlap_threshold)

    members: dict[int, list[int]] = {}
    for idx, label in enumerate(labels):
        members.setdefault(int(label), []).append(idx)
    row_order = sorted(
        members,
        key=lambda lb: (
            min(elements[i].box.y_min for i in members[lb]),
            min(elements[i].box.x_min for i in members[lb]),
            min(members[lb]),
        ),
    )
    row_rank = {label: rank for rank, label in enumerate(row_order)}

    def sort_key(idx: int) -> tuple:
        return (elements[idx].box.x_min, idx)

    def leaf(idx: int) -> LayoutLeaf:
        return LayoutLeaf(idx, elements[idx].cls, elements[idx].box)

    grouped: dict[int, int] = {}  # element index -> group number
    for g, directive in enumerate(scene.groups):
        for m in directive.members:
            grouped[m] = g

    # item -> (row rank, x_min, element index) placement keys
    row_items: dict[int, list[tuple[tuple, Union[LayoutLeaf, LayoutGroup]]]] = {
        rank: [] for rank in range(len(row_order))
    }
    for idx in range(n):
        if idx not in grouped:
            row_items[row_rank[int(labels[idx])]].append((sort_key(idx), leaf(idx)))
    for directive in scene.groups:
        leftmost = min(directive.members, key=sort_key)
        children = tuple(
            leaf(i)
            for i in sorted(
                directive.members,
                key=lambda i: (row_rank[int(labels[i])],) + sort_key(i),
            )
        )
        group = LayoutGroup(directive.parent_type, directive.relation, children)
        row_items[row_rank[int(labels[leftmost])]].append((sort_key(leftmost), group))

    rows = []
    for rank in range(len(row_order)):
        items = [item for _, item in sorted(row_items[rank], key=lambda t: t[0])]
        if items:
            rows.append(LayoutRow(tuple(items)))
    return LayoutTree(tuple(rows))


def build_ui_representation(tree: LayoutTree) -> UINode:
    """Materialize the layout as a UI tree with pre-order ids and default props."""
    counter = [0]

    def next_id() -> str:
        node_id = f"el-{counter[0]}"
        counter[0] += 1
        return node_id

    def build_leaf(item: LayoutLeaf) -> UINode:
        type_name = DISPLAY_NAMES[item.cls]
        return UINode(
            type=type_name,
            id=next_id(),
            props=dict(DEFAULT_PROPS[type_name]),
            bbox=item.box,
        )

    def build_item(item: Union[LayoutLeaf, LayoutGroup]) -> UINode:
        if isinstance(item, LayoutLeaf):
            return build_leaf(item)
        group_id = next_id()
        return UINode(
            type=item.parent_type,
            id=group_id,
            props={"relation": item.relation},
            children=tuple(build_leaf(c) for c in item.children),
        )

    page_id = next_id()
    row_nodes = []
    for row in tree.rows:
        row_id = next_id()
        row_nodes.append(
            UINode(
                type=ROW_TYPE,
                id=row_id,
                children=tuple(build_item(item) for item in row.items),
            )
        )
    return UINode(type=PAGE_TYPE, id=page_id, children=tuple(row_nodes))


def _coordinate(value: float):
    return int(value) if value == int(value) else value


def _node_to_object(node: UINode) -> dict:
    obj: dict = {
        "type": node.type,
        "id": node.id,
        "props": {key: node.props[key] for key in sorted(node.props)},
    }
    if node.bbox is not None:
        obj["bbox"] = [_coordinate(v) for v in node.bbox.as_tuple()]
    obj["children"] = [_node_to_object(child) for child in node.children]
    return obj


def serialize_ui(node: UINode) -> str:
    """Canonical JSON text of a validated tree (stable byte-for-byte)."""
    validate_ui(node)
    return json.dumps(_node_to_object(node), indent=2, ensure_ascii=False) + "\n"


def _expect(condition: bool, message: str, path: str):
    if not condition:
        raise IRError(f"{message} at {path}")


def _node_from_object(obj, path: str, seen_ids: set[str]) -> UINode:
    _expect(isinstance(obj, dict), "node must be a JSON object", path)
    unknown = set(obj) - {"type", "id", "props", "bbox", "children"}
    _expect(not unknown, f"unknown keys {sorted(unknown)}", path)
    for key in ("type", "id", "props", "children"):
        _expect(key in obj, f"missing key '{key}'", path)

    type_name = obj["type"]
    _expect(isinstance(type_name, str), "'type' must be a string", path)
    if type_name not in NODE_TYPES:
        raise IRError(f"unknown type {type_name!r} at {path}")

    node_id = obj["id"]
    _expect(isinstance(node_id, str) and node_id != "", "'id' must be a non-empty string", path)
    if node_id in seen_ids:
        raise IRError(f"duplicate id {node_id!r} at {path}")
    seen_ids.add(node_id)

    props = obj["props"]
    _expect(isinstance(props, dict), "'props' must be an object", path)
    for key, value in props.items():
        _expect(isinstance(key, str) and isinstance(value, str),
                f"prop {key!r} must map string to string", path)

    bbox = None
    if "bbox" in obj:
        raw = obj["bbox"]
        _expect(
            isinstance(raw, list) and len(raw) == 4
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw),
            "'bbox' must be an array of 4 numbers",
            path,
        )
        try:
            bbox = BoundingBox(*(float(v) for v in raw))
        except ValueError as exc:
            raise IRError(f"{exc} at {path}") from None

    raw_children = obj["children"]
    _expect(isinstance(raw_children, list), "'children' must be an array", path)
    children = tuple(
        _node_from_object(child, f"{path}.children[{i}]", seen_ids)
        for i, child in enumerate(raw_children)
    )

    node = UINode(type=type_name, id=node_id, props=dict(props), bbox=bbox, children=children)
    _validate_node_shape(node, path)
    return node


def _validate_node_shape(node: UINode, path: str):
    if node.type in ELEMENT_TYPES:
        _expect(not node.children, f"leaf type {node.type!r} cannot have children", path)
        _expect(node.bbox is not None, f"leaf type {node.type!r} requires a bbox", path)
    elif node.type != PAGE_TYPE:
        _expect(
            len(node.children) >= 1,
            f"container type {node.type!r} requires at least one child",
            path,
        )


def validate_ui(node: UINode, path: str = "$", _seen: set[str] | None = None) -> None:
    """Re-check every tree invariant; raises IRError with a node path."""
    seen = _seen if _seen is not None else set()
    _expect(node.type in NODE_TYPES, f"unknown type {node.type!r}", path)
    _expect(bool(node.id), "empty id", path)
    if node.id in seen:
        raise IRError(f"duplicate id {node.id!r} at {path}")
    seen.add(node.id)
    for key, value in node.props.items():
        _expect(isinstance(key, str) and isinstance(value, str),
                f"prop {key!r} must map string to string", path)
    _validate_node_shape(node, path)
    for i, child in enumerate(node.children):
        validate_ui(child, f"{path}.children[{i}]", seen)


def parse_ui(text: str) -> UINode:
    """Parse and validate canonical-JSON UI text; inverse of serialize_ui."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IRError(f"malformed JSON: {exc}") from None
    return _node_from_object(obj, "$", set())
