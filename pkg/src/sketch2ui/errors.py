"""Exception types shared across the pipeline."""

from __future__ import annotations


class Sketch2UIError(Exception):
    """Base class for all errors raised by this package."""


class InputError(Sketch2UIError, ValueError):
    """Invalid input content (files, CLI arguments, rule tables).

    Carries an optional 1-based ``line`` number and source ``path`` so CLI
    diagnostics can point at the offending location.
    """

    def __init__(self, message: str, *, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        prefix = ""
        if path is not None:
            prefix += f"{path}:"
        if line is not None:
            prefix += f"line {line}: "
        elif path is not None:
            prefix += " "
        super().__init__(prefix + message)


class ClassMapError(InputError):
    """Problem in a class-map CSV."""


class DetectionError(InputError):
    """Problem in an annotation/detection CSV."""


class RulesError(InputError):
    """Problem in a resolution-rules JSON document."""


class IRError(InputError):
    """Problem in a UI-representation JSON document or tree."""
