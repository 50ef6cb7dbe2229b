"""Command-line interface: compile, resolve, loss, serve.

Exit codes: 0 success, 1 input/validation error, 2 environment or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__, kernels, loss
from .codegen import Target
from .errors import InputError
from .pipeline import PipelineConfig, run_pipeline
from .serve import LiveServer


def _add_pipeline_flags(sub: argparse.ArgumentParser, with_target: bool) -> None:
    sub.add_argument("--detections", required=True, help="annotation CSV path")
    sub.add_argument("--classes", required=True, help="class-map CSV path")
    sub.add_argument("--rules", default=None, help="resolution-rules JSON path")
    sub.add_argument(
        "--confidence", type=float, default=0.5, help="confidence threshold (default 0.5)"
    )
    if with_target:
        sub.add_argument(
            "--target", choices=["html", "android"], default="html", help="output platform"
        )
    sub.add_argument("--out", default="out", help="output directory (default ./out)")
    sub.add_argument(
        "--json-report", action="store_true", help="print the run report as JSON"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sketch2ui",
        description="Compile UI-sketch detections into a UI tree and runnable UI code.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_compile = sub.add_parser("compile", help="full pipeline: detections to UI code")
    _add_pipeline_flags(p_compile, with_target=True)
    p_compile.set_defaults(func=cmd_compile)

    p_resolve = sub.add_parser("resolve", help="stop after overlap resolution; write IR only")
    _add_pipeline_flags(p_resolve, with_target=False)
    p_resolve.set_defaults(func=cmd_resolve)

    p_loss = sub.add_parser("loss", help="evaluate the detection loss functions at a point")
    p_loss.add_argument("--x", type=float, help="model probability of the positive class")
    p_loss.add_argument("--z", default="+1", help="ground truth: +1/-1/pos/neg")
    p_loss.add_argument("--alpha", type=float, default=0.25, help="class weight in [0,1]")
    p_loss.add_argument("--gamma", type=float, default=2.0, help="focusing exponent >= 0")
    p_loss.add_argument(
        "--gradcheck",
        action="store_true",
        help="sweep analytic gradients against finite differences",
    )
    p_loss.set_defaults(func=cmd_loss)

    p_serve = sub.add_parser("serve", help="compile, serve the output, live-reload on change")
    _add_pipeline_flags(p_serve, with_target=True)
    p_serve.add_argument("--port", type=int, default=8080, help="HTTP/WebSocket port")
    p_serve.add_argument("--host", default="127.0.0.1", help="bind address")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    try:
        return PipelineConfig(
            detections_path=args.detections,
            classes_path=args.classes,
            rules_path=args.rules,
            confidence_threshold=args.confidence,
            target=Target.from_text(getattr(args, "target", "html")),
            out_dir=args.out,
            serve_port=getattr(args, "port", 8080),
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _print_report(report, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report.to_json_dict(), indent=2))
    else:
        for line in report.to_lines():
            print(line)


def cmd_compile(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    report = run_pipeline(config, write_target=True)
    _print_report(report, args.json_report)
    return 0


def cmd_resolve(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    report = run_pipeline(config, write_target=False)
    _print_report(report, args.json_report)
    return 0


def cmd_loss(args: argparse.Namespace) -> int:
    try:
        if args.gradcheck:
            kernels.warmup()
            result = loss.gradient_check()
            print(
                f"gradcheck points={result.points_checked} h=1e-06"
                f" max_rel_error={result.max_relative_error:.4e}"
                f" worst_x={result.worst_x}"
                f" worst_z={result.worst_truth.value:+d}"
                f" worst_alpha={result.worst_params.alpha}"
                f" worst_gamma={result.worst_params.gamma}"
            )
            return 0
        if args.x is None:
            raise InputError("--x is required unless --gradcheck is given")
        truth = loss.GroundTruth.from_text(args.z)
        params = loss.FocalLossParams(alpha=args.alpha, gamma=args.gamma)
        ce = loss.cross_entropy(args.x, truth)
        bce = loss.balanced_cross_entropy(args.x, truth, args.alpha)
        fl = loss.focal_loss(args.x, truth, params)
        grad = loss.focal_loss_grad(args.x, truth, params)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(f"x={args.x} z={truth.value:+d} alpha={args.alpha} gamma={args.gamma}")
    print(f"cross_entropy={ce:.4e}")
    print(f"balanced_ce={bce:.4e}")
    print(f"focal_loss={fl:.4e}")
    print(f"grad={grad:.4e}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )
    config = _config_from_args(args)
    server = LiveServer(config, host=args.host)
    server.start()
    print(f"serving {config.out_dir} on http://{args.host}:{server.port}/", flush=True)
    server.run_forever()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
