"""Shared emitter types: targets, options, and the generated-document record."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Target(enum.Enum):
    HTML = "html"
    ANDROID_XML = "android"

    @classmethod
    def from_text(cls, text: str) -> "Target":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"target must be 'html' or 'android', got {text!r}") from None


@dataclass(frozen=True)
class EmitOptions:
    title: str = "Sketch2Code Output"
    live_reload: bool = False
    reload_endpoint: str = "/reload"

    def __post_init__(self):
        if not self.reload_endpoint.startswith("/"):
            raise ValueError(f"reload_endpoint must begin with '/', got {self.reload_endpoint!r}")


@dataclass(frozen=True)
class GeneratedDocument:
    target: Target
    content: str
    suggested_filename: str
