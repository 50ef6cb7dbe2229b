"""Bundled fixture data: a 50-sketch corpus and small regression cases."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture file."""
    return Path(str(resources.files(__package__) / name))


def corpus_paths() -> tuple[Path, Path]:
    """(annotations, classes) paths of the 50-sketch corpus."""
    return fixture_path("annotations.csv"), fixture_path("classes.csv")
