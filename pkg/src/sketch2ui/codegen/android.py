"""Android layout XML emitter.

A vertical LinearLayout holds one horizontal LinearLayout per row.  Radios
inside a form collapse into one RadioGroup placed at the first radio's
position.  Android resource names cannot contain hyphens, so node id
``el-3`` becomes ``@+id/el_3``; the mapping is documented in docs/targets.md.
"""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

from ..errors import IRError
from ..ir import ELEMENT_TYPES, PAGE_TYPE, UINode, validate_ui
from .base import EmitOptions, GeneratedDocument, Target

ANDROID_NS = "http://schemas.android.com/apk/res/android"


def android_id(node_id: str) -> str:
    return "@+id/" + node_id.replace("-", "_")


def _attrs(node_id: str | None, extra: list[tuple[str, str]]) -> str:
    pairs = []
    if node_id is not None:
        pairs.append(("android:id", android_id(node_id)))
    pairs.extend(extra)
    pairs.extend(
        [("android:layout_width", "wrap_content"), ("android:layout_height", "wrap_content")]
    )
    return " ".join(f"{k}={quoteattr(v)}" for k, v in pairs)


def _text_of(node: UINode) -> str:
    return node.props.get("text", node.type)


def _widget_line(node: UINode) -> str:
    t = node.type
    if t == "Heading":
        extra = [("android:text", _text_of(node)), ("android:textSize", "24sp"),
                 ("android:textStyle", "bold")]
        return f"<TextView {_attrs(node.id, extra)} />"
    if t in ("Label", "Paragraph"):
        return f"<TextView {_attrs(node.id, [('android:text', _text_of(node))])} />"
    if t == "Link":
        extra = [("android:text", _text_of(node)), ("android:autoLink", "web")]
        return f"<TextView {_attrs(node.id, extra)} />"
    if t == "TextBox":
        hint = node.props.get("placeholder", "Text")
        return f"<EditText {_attrs(node.id, [('android:hint', hint)])} />"
    if t == "CheckBox":
        checked = node.props.get("checked", "false")
        return f"<CheckBox {_attrs(node.id, [('android:checked', checked)])} />"
    if t == "Radio":
        checked = node.props.get("checked", "false")
        return f"<RadioButton {_attrs(node.id, [('android:checked', checked)])} />"
    if t == "Button":
        return f"<Button {_attrs(node.id, [('android:text', _text_of(node))])} />"
    if t == "Image":
        alt = node.props.get("alt", "Image")
        return f"<ImageView {_attrs(node.id, [('android:contentDescription', alt)])} />"
    if t == "SelectBox":
        return f"<Spinner {_attrs(node.id, [])} />"
    raise IRError(f"no Android mapping for node type {t!r}")


def _emit_container(node: UINode, indent: int, out: list[str]):
    pad = "  " * indent
    if node.type in ELEMENT_TYPES:
        out.append(pad + _widget_line(node))
        return

    orientation = "vertical" if node.type == PAGE_TYPE else "horizontal"
    extra = [("android:orientation", orientation)]
    out.append(pad + f"<LinearLayout {_attrs(node.id, extra)}>")

    # One RadioGroup per form, at the first radio's position.
    radios = [c for c in node.children if c.type == "Radio"] if node.type == "Form" else []
    emitted_radiogroup = False
    for child in node.children:
        if child.type == "Radio" and radios:
            if not emitted_radiogroup:
                out.append(pad + "  <RadioGroup " + _attrs(None, []) + ">")
                for radio in radios:
                    out.append(pad + "    " + _widget_line(radio))
                out.append(pad + "  </RadioGroup>")
                emitted_radiogroup = True
            continue
        _emit_container(child, indent + 1, out)
    out.append(pad + "</LinearLayout>")


def generate_android_xml(root: UINode, opts: EmitOptions = EmitOptions()) -> GeneratedDocument:
    """Emit one Android layout XML document for a Page tree."""
    validate_ui(root)
    if root.type != PAGE_TYPE:
        raise IRError(f"Android generation requires a {PAGE_TYPE!r} root, got {root.type!r}")
    attrs = " ".join(
        [
            f'xmlns:android="{ANDROID_NS}"',
            f"android:id={quoteattr(android_id(root.id))}",
            'android:orientation="vertical"',
            'android:layout_width="match_parent"',
            'android:layout_height="wrap_content"',
        ]
    )
    lines = ['<?xml version="1.0" encoding="utf-8"?>', f"<LinearLayout {attrs}>"]
    for child in root.children:
        _emit_container(child, 1, lines)
    lines.append("</LinearLayout>")
    return GeneratedDocument(Target.ANDROID_XML, "\n".join(lines) + "\n", "layout.xml")
