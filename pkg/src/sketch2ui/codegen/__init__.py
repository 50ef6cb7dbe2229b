"""Target registry: dispatch a UI tree to the emitter for a platform."""

from __future__ import annotations

from typing import Callable

from ..ir import UINode
from .android import generate_android_xml
from .base import EmitOptions, GeneratedDocument, Target
from .html import generate_html

Emitter = Callable[[UINode, EmitOptions], GeneratedDocument]

EMITTERS: dict[Target, Emitter] = {
    Target.HTML: generate_html,
    Target.ANDROID_XML: generate_android_xml,
}


def emit(root: UINode, target: Target, opts: EmitOptions = EmitOptions()) -> GeneratedDocument:
    """Render the tree with the emitter registered for ``target``."""
    return EMITTERS[target](root, opts)


__all__ = [
    "EMITTERS",
    "EmitOptions",
    "Emitter",
    "GeneratedDocument",
    "Target",
    "emit",
    "generate_android_xml",
    "generate_html",
]
