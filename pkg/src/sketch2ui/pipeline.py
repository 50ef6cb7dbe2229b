"""Pipeline orchestration: parse -> filter -> resolve -> layout -> emit -> write.

Stage timings are measured per sketch with ``time.perf_counter_ns`` and
reported in milliseconds.  Input parsing happens once per corpus, so
``parse_ms`` appears in the corpus stage summary rather than per sketch.
JIT warmup of the numeric kernels runs before any timed region.

All file writes are atomic (temp file + rename in the target directory), so
an interrupted run never leaves truncated output.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import kernels
from .codegen import EmitOptions, Target, emit
from .detection_io import (
    DetectionSet,
    ElementClass,
    class_histogram,
    filter_by_confidence,
    parse_class_map,
    parse_detection_csv,
)
from .ir import build_ui_representation, infer_layout, serialize_ui
from .overlap import resolve_all
from .rules import ResolutionRules, load_rules


@dataclass(frozen=True)
class PipelineConfig:
    detections_path: str
    classes_path: str
    rules_path: str | None = None
    confidence_threshold: float = 0.5
    target: Target = Target.HTML
    out_dir: str = "out"
    serve_port: int = 8080

    def __post_init__(self):
        if not self.detections_path or not self.classes_path:
            raise ValueError("detections and classes paths are required")
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError(
                f"confidence threshold {self.confidence_threshold} outside [0, 1]"
            )
        if not 1 <= self.serve_port <= 65535:
            raise ValueError(f"port {self.serve_port} outside [1, 65535]")


@dataclass
class RemovedLogEntry:
    source_file: str
    element_class: str
    box: tuple[float, float, float, float]
    reason: str


@dataclass
class SketchReport:
    source_file: str
    elements_in: int
    after_filter: int
    retained: int
    removed: int
    groups: int
    resolve_ms: float = 0.0
    layout_ms: float = 0.0
    emit_ms: float = 0.0

    @property
    def total_ms(self) -> float:
        return self.resolve_ms + self.layout_ms + self.emit_ms


@dataclass
class RunReport:
    detections_path: str
    classes_path: str
    parse_ms: float = 0.0
    histogram: dict[ElementClass, int] = field(default_factory=dict)
    sketches: list[SketchReport] = field(default_factory=list)
    removed_log: list[RemovedLogEntry] = field(default_factory=list)
    files_written: list[str] = field(default_factory=list)

    @property
    def elements_in(self) -> int:
        return sum(s.elements_in for s in self.sketches)

    @property
    def retained(self) -> int:
        return sum(s.retained for s in self.sketches)

    @property
    def removed(self) -> int:
        return sum(s.removed for s in self.sketches)

    def stage_totals_ms(self) -> dict[str, float]:
        resolve = sum(s.resolve_ms for s in self.sketches)
        layout = sum(s.layout_ms for s in self.sketches)
        emit_ms = sum(s.emit_ms for s in self.sketches)
        return {
            "parse": self.parse_ms,
            "resolve": resolve,
            "layout": layout,
            "emit": emit_ms,
            "total": self.parse_ms + resolve + layout + emit_ms,
        }

    def to_lines(self) -> list[str]:
        def ms(value: float) -> str:
            return f"{value:.3f}"

        lines = [
            f"detections={self.detections_path}",
            f"classes={self.classes_path}",
            f"sketches={len(self.sketches)}",
            f"elements_in={self.elements_in}",
            f"retained={self.retained}",
            f"removed={self.removed}",
            "histogram "
            + " ".join(
                f"{cls.canonical_name}={self.histogram.get(cls, 0)}" for cls in ElementClass
            ),
            "stage_ms "
            + " ".join(f"{k}={ms(v)}" for k, v in self.stage_totals_ms().items()),
        ]
        for s in self.sketches:
            lines.append(
                f"sketch={s.source_file} elements_in={s.elements_in}"
                f" after_filter={s.after_filter} retained={s.retained}"
                f" removed={s.removed} groups={s.groups}"
                f" resolve_ms={ms(s.resolve_ms)} layout_ms={ms(s.layout_ms)}"
                f" emit_ms={ms(s.emit_ms)} total_ms={ms(s.total_ms)}"
            )
        for entry in self.removed_log:
            box = ",".join(str(v) for v in entry.box)
            lines.append(
                f"removed sketch={entry.source_file} class={entry.element_class}"
                f' box={box} reason="{entry.reason}"'
            )
        return lines

    def to_json_dict(self) -> dict:
        return {
            "detections": self.detections_path,
            "classes": self.classes_path,
            "sketches": len(self.sketches),
            "elements_in": self.elements_in,
            "retained": self.retained,
            "removed": self.removed,
            "histogram": {
                cls.canonical_name: self.histogram.get(cls, 0) for cls in ElementClass
            },
            "stage_ms": self.stage_totals_ms(),
            "per_sketch": [
                {
                    "sketch": s.source_file,
                    "elements_in": s.elements_in,
                    "after_filter": s.after_filter,
                    "retained": s.retained,
                    "removed": s.removed,
                    "groups": s.groups,
                    "resolve_ms": s.resolve_ms,
                    "layout_ms": s.layout_ms,
                    "emit_ms": s.emit_ms,
                    "total_ms": s.total_ms,
                }
                for s in self.sketches
            ],
            "removed_log": [
                {
                    "sketch": e.source_file,
                    "class": e.element_class,
                    "box": list(e.box),
                    "reason": e.reason,
                }
                for e in self.removed_log
            ],
            "files_written": list(self.files_written),
        }


def write_text_atomic(path: Path, text: str) -> None:
    """Write UTF-8 text via a temp file + rename; never leaves partial files."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def sketch_stem(source_file: str) -> str:
    stem = Path(source_file.replace("\\", "/")).stem
    cleaned = "".join(ch if ch.isalnum() or ch in "._-" else "_" for ch in stem)
    return cleaned or "sketch"


def _now_ms() -> float:
    return time.perf_counter_ns() / 1e6


def run_pipeline(
    config: PipelineConfig,
    *,
    write_target: bool = True,
    emit_options: EmitOptions = EmitOptions(),
) -> RunReport:
    """Run the full pipeline over every sketch in the detections file.

    With ``write_target`` false only the ``<stem>.ir.json`` files are written
    (the resolve-only command).  Raises InputError subclasses on bad content
    and OSError on I/O problems.
    """
    kernels.warmup()
    report = RunReport(config.detections_path, config.classes_path)

    t0 = _now_ms()
    classes_text = Path(config.classes_path).read_text(encoding="utf-8")
    detections_text = Path(config.detections_path).read_text(encoding="utf-8")
    rules = ResolutionRules() if config.rules_path is None else load_rules(config.rules_path)
    classes = parse_class_map(classes_text)
    sets = parse_detection_csv(detections_text, classes)
    report.parse_ms = _now_ms() - t0
    report.histogram = class_histogram(sets)

    out_dir = Path(config.out_dir)
    opts = emit_options
    for ds in sets:
        report.sketches.append(
            _process_sketch(ds, rules, config, opts, out_dir, report, write_target)
        )
    return report


def _process_sketch(
    ds: DetectionSet,
    rules: ResolutionRules,
    config: PipelineConfig,
    opts: EmitOptions,
    out_dir: Path,
    report: RunReport,
    write_target: bool,
) -> SketchReport:
    sketch = SketchReport(
        source_file=ds.source_file,
        elements_in=len(ds),
        after_filter=0,
        retained=0,
        removed=0,
        groups=0,
    )
    filtered = filter_by_confidence(ds, config.confidence_threshold)
    sketch.after_filter = len(filtered)

    t0 = _now_ms()
    scene = resolve_all(filtered, rules)
    sketch.resolve_ms = _now_ms() - t0
    sketch.retained = len(scene.elements)
    sketch.removed = len(scene.removed)
    sketch.groups = len(scene.groups)
    for removed in scene.removed:
        report.removed_log.append(
            RemovedLogEntry(
                source_file=ds.source_file,
                element_class=removed.element.cls.canonical_name,
                box=removed.element.box.as_tuple(),
                reason=removed.reason,
            )
        )

    t0 = _now_ms()
    tree = infer_layout(scene)
    sketch.layout_ms = _now_ms() - t0

    t0 = _now_ms()
    root = build_ui_representation(tree)
    ir_text = serialize_ui(root)
    document = emit(root, config.target, opts) if write_target else None
    sketch.emit_ms = _now_ms() - t0

    stem = sketch_stem(ds.source_file)
    ir_path = out_dir / f"{stem}.ir.json"
    write_text_atomic(ir_path, ir_text)
    report.files_written.append(str(ir_path))
    if document is not None:
        suffix = Path(document.suggested_filename).suffix
        doc_path = out_dir / f"{stem}{suffix}"
        write_text_atomic(doc_path, document.content)
        report.files_written.append(str(doc_path))
    return sketch
