#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus (deterministic, seeded).

Produces src/sketch2ui/fixtures/annotations.csv: 50 sketches, 220 elements
with the reference per-class counts below, laid out on a non-overlapping
grid so the corpus passes resolution unchanged.
"""

from __future__ import annotations

import random
from pathlib import Path

COUNTS = {
    "heading": 17,
    "checkbox": 34,
    "radio": 28,
    "selectbox": 12,
    "label": 29,
    "link": 20,
    "button": 19,
    "image": 22,
    "paragraph": 10,
    "textbox": 29,
}

SEED = 20240517
OUT = Path(__file__).resolve().parents[1] / "src" / "sketch2ui" / "fixtures"


def main() -> None:
    rng = random.Random(SEED)
    labels = [name for name, count in COUNTS.items() for _ in range(count)]
    assert len(labels) == 220
    rng.shuffle(labels)

    sizes = [5] * 20 + [4] * 30  # 20*5 + 30*4 = 220
    rng.shuffle(sizes)

    lines = ["# fixture corpus: 50 sketches, 220 elements"]
    cursor = 0
    for sketch_no, size in enumerate(sizes, start=1):
        source = f"sketch{sketch_no:02d}.png"
        for k in range(size):
            cls = labels[cursor]
            cursor += 1
            col, row = k % 2, k // 2
            x0 = 20 + col * 200 + rng.randint(0, 20)
            y0 = 20 + row * 60 + rng.randint(0, 8)
            width = rng.randint(100, 160)
            height = rng.randint(30, 40)
            lines.append(f"{source},{x0},{y0},{x0 + width},{y0 + height},{cls}")
    assert cursor == 220

    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "annotations.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    class_map = "\n".join(f"{i},{name}" for i, name in enumerate(COUNTS)) + "\n"
    (OUT / "classes.csv").write_text(class_map, encoding="utf-8")
    print(f"wrote {OUT / 'annotations.csv'} and {OUT / 'classes.csv'}")


if __name__ == "__main__":
    main()
