"""Shared test helpers: random scene generation and brute-force oracles."""

from __future__ import annotations

import random
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from sketch2ui import kernels
from sketch2ui.detection_io import BoundingBox, DetectedElement, DetectionSet, ElementClass

CONFIDENCE_CHOICES = (0.3, 0.4, 0.5, 0.6, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    kernels.warmup()


def random_box(rng: random.Random, span: int = 64) -> BoundingBox:
    x1 = rng.randint(0, span - 1)
    x2 = rng.randint(x1 + 1, span)
    y1 = rng.randint(0, span - 1)
    y2 = rng.randint(y1 + 1, span)
    return BoundingBox(float(x1), float(y1), float(x2), float(y2))


def random_detection_set(
    rng: random.Random, n: int, span: int = 64, source: str = "rand.png"
) -> DetectionSet:
    elements = tuple(
        DetectedElement(
            cls=rng.choice(list(ElementClass)),
            box=random_box(rng, span),
            confidence=rng.choice(CONFIDENCE_CHOICES),
            source_file=source,
        )
        for _ in range(n)
    )
    return DetectionSet(source, elements)


def raster_overlap_cells(b1: BoundingBox, b2: BoundingBox, span: int = 64) -> int:
    """Count unit cells covered by both integer-coordinate boxes (brute force)."""
    grid1 = np.zeros((span, span), dtype=bool)
    grid2 = np.zeros((span, span), dtype=bool)
    grid1[int(b1.x_min) : int(b1.x_max), int(b1.y_min) : int(b1.y_max)] = True
    grid2[int(b2.x_min) : int(b2.x_max), int(b2.y_min) : int(b2.y_max)] = True
    return int((grid1 & grid2).sum())


def brute_force_rows(boxes: list[BoundingBox], threshold: float = 0.5) -> list[set[int]]:
    """Transitive closure of the pairwise row rule, by repeated merging."""

    def same_row(a: BoundingBox, b: BoundingBox) -> bool:
        dy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
        return max(dy, 0.0) / min(a.height, b.height) >= threshold

    clusters = [{i} for i in range(len(boxes))]
    changed = True
    while changed:
        changed = False
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                if any(same_row(boxes[a], boxes[b]) for a in clusters[i] for b in clusters[j]):
                    clusters[i] |= clusters[j]
                    del clusters[j]
                    changed = True
                    break
            if changed:
                break
    return clusters


def parse_html_as_xml(content: str) -> ET.Element:
    """Strict structural parse of an emitted HTML document (doctype stripped)."""
    assert content.startswith("<!DOCTYPE html>\n")
    return ET.fromstring(content.split("\n", 1)[1])


def markup_ids(root: ET.Element) -> list[str]:
    ids = []
    for el in root.iter():
        if "id" in el.attrib:
            ids.append(el.attrib["id"])
        android_id = el.attrib.get("{http://schemas.android.com/apk/res/android}id")
        if android_id is not None:
            ids.append(android_id)
    return ids
