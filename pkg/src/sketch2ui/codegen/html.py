"""HTML5 emitter.

Output is a complete document, one element per line, 2-space indentation,
LF endings, trailing newline.  Void elements are self-closed so the markup
also parses as XML, which is what the structural well-formedness tests use.

Form semantics are declarative: every button inside a form carries
``data-validates`` listing the form's text-input ids, and radios inside one
form share a ``name`` derived from the form id.  See docs/targets.md.
"""

from __future__ import annotations

import html as html_escape
import json

from ..errors import IRError
from ..ir import ELEMENT_TYPES, PAGE_TYPE, UINode, validate_ui
from .base import EmitOptions, GeneratedDocument, Target

#: Inline grey rectangle, URL-encoded so it stays a plain XML attribute.
PLACEHOLDER_IMAGE_SRC = (
    "data:image/svg+xml,%3Csvg xmlns='http://www.w3.org/2000/svg' "
    "width='120' height='80'%3E%3Crect width='100%25' height='100%25' "
    "fill='%23cccccc'/%3E%3C/svg%3E"
)

STYLE_BLOCK = "[data-row] { display: flex; align-items: center; gap: 8px; margin: 8px; }"


def _esc(text: str) -> str:
    return html_escape.escape(text, quote=True)


def _text_of(node: UINode) -> str:
    return node.props.get("text", node.type)


def _checked_attr(node: UINode) -> str:
    return ' checked="checked"' if node.props.get("checked") == "true" else ""


class _FormContext:
    """Ids a form contributes to its descendants."""

    def __init__(self, form_id: str, textbox_ids: list[str]):
        self.radio_name = f"{form_id}-radios"
        self.validates = " ".join(textbox_ids)


def _collect_ids(node: UINode, type_name: str) -> list[str]:
    return [leaf.id for leaf in node.leaves() if leaf.type == type_name]


def _emit_leaf(node: UINode, form: _FormContext | None) -> str:
    nid = _esc(node.id)
    t = node.type
    if t == "Heading":
        return f'<h1 id="{nid}">{_esc(_text_of(node))}</h1>'
    if t == "Paragraph":
        return f'<p id="{nid}">{_esc(_text_of(node))}</p>'
    if t == "Label":
        return f'<label id="{nid}">{_esc(_text_of(node))}</label>'
    if t == "Link":
        href = _esc(node.props.get("href", "#"))
        return f'<a id="{nid}" href="{href}">{_esc(_text_of(node))}</a>'
    if t == "Image":
        alt = _esc(node.props.get("alt", "Image"))
        return f'<img id="{nid}" src="{PLACEHOLDER_IMAGE_SRC}" alt="{alt}" />'
    if t == "Button":
        marker = ""
        if form is not None and form.validates:
            marker = f' data-validates="{_esc(form.validates)}"'
        return f'<button id="{nid}"{marker}>{_esc(_text_of(node))}</button>'
    if t == "TextBox":
        placeholder = _esc(node.props.get("placeholder", "Text"))
        return f'<input type="text" id="{nid}" placeholder="{placeholder}" />'
    if t == "CheckBox":
        return f'<input type="checkbox" id="{nid}"{_checked_attr(node)} />'
    if t == "Radio":
        name = f' name="{_esc(form.radio_name)}"' if form is not None else ""
        return f'<input type="radio" id="{nid}"{name}{_checked_attr(node)} />'
    if t == "SelectBox":
        options = node.props.get("options", "")
        items = [o for o in options.split(";") if o != ""]
        inner = "".join(f"<option>{_esc(o)}</option>" for o in items)
        return f'<select id="{nid}">{inner}</select>'
    raise IRError(f"no HTML mapping for node type {t!r}")


def _emit_node(node: UINode, indent: int, form: _FormContext | None, out: list[str]):
    pad = "  " * indent
    if node.type in ELEMENT_TYPES:
        out.append(pad + _emit_leaf(node, form))
        return
    relation = node.props.get("relation")
    rel_attr = f' data-relation="{_esc(relation)}"' if relation else ""
    nid = _esc(node.id)
    if node.type == "Row":
        open_tag, close_tag = f'<div id="{nid}" data-row="true">', "</div>"
    elif node.type == "Form":
        open_tag, close_tag = f'<form id="{nid}"{rel_attr}>', "</form>"
        form = _FormContext(node.id, _collect_ids(node, "TextBox"))
    elif node.type == "LabeledControl":
        open_tag, close_tag = f'<label id="{nid}"{rel_attr}>', "</label>"
    else:
        raise IRError(f"no HTML mapping for container type {node.type!r}")
    out.append(pad + open_tag)
    for child in node.children:
        _emit_node(child, indent + 1, form, out)
    out.append(pad + close_tag)


def _reload_script(endpoint: str) -> list[str]:
    url_expr = f'"ws://" + location.host + {json.dumps(endpoint)}'
    return [
        "    <script>",
        "      (function () {",
        f"        var ws = new WebSocket({url_expr});",
        "        ws.onmessage = function () { location.reload(); };",
        "      })();",
        "    </script>",
    ]


def generate_html(root: UINode, opts: EmitOptions = EmitOptions()) -> GeneratedDocument:
    """Emit one complete HTML document for a Page tree."""
    validate_ui(root)
    if root.type != PAGE_TYPE:
        raise IRError(f"HTML generation requires a {PAGE_TYPE!r} root, got {root.type!r}")
    lines = [
        "<!DOCTYPE html>",
        "<html>",
        "  <head>",
        '    <meta charset="utf-8" />',
        f"    <title>{_esc(opts.title)}</title>",
        f"    <style>{STYLE_BLOCK}</style>",
        "  </head>",
        f'  <body id="{_esc(root.id)}">',
    ]
    for child in root.children:
        _emit_node(child, 2, None, lines)
    if opts.live_reload:
        lines.extend(_reload_script(opts.reload_endpoint))
    lines.extend(["  </body>", "</html>"])
    return GeneratedDocument(Target.HTML, "\n".join(lines) + "\n", "index.html")
