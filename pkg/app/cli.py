"""
Command line interface.

Usage:
    pconvex analyze --poly P.json --domain D.json [--config C.json] [--svg out.svg] [--report out.json]
    pconvex characteristics --poly P.json
    pconvex localize --poly P.json --dir 1,1 [--drift 0,1/2] [--sub 1/2 0,1]
    pconvex sigma --poly P.json --y 0,0,1 [--mode sup|deriv]
    pconvex convexity --poly P.json --domain D.json [--mode supports|singular]
    pconvex cones {dual,proper,hyperplanes|prop3,avoid,recession} ...
    pconvex minprinciple --domain D.json --segment A B [--line N ALPHA]
    pconvex schema
    pconvex serve [--host H] [--port P]

JSON goes to stdout and logs to stderr.  Exit codes: 0 surjective (or
pass), 1 not surjective (or fail), 2 inconclusive, 3 input error,
4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from app.core.config import load_analysis_config, settings
from app.core.errors import InternalInconsistency, IoError, PConvexError
from app.models.domain import LineSpec, PlanarDomain
from app.models.enums import ConvexityMode, NormMode
from app.models.report import EXIT_INPUT_ERROR, EXIT_INTERNAL, EXIT_NOT_SURJECTIVE, EXIT_SURJECTIVE
from app.schemas import (
    AnalysisReportOut,
    RecessionRequest,
    load_cone,
    load_geometry,
    load_polynomial,
    parse_rational,
    parse_vector,
    read_json_file,
    validate_payload,
)
from app.services import command_service
from app.services.analysis_service import analyze
from app.services.report_serializer import report_to_dict, to_json
from app.services.svg_service import render_svg

logger = logging.getLogger("pconvex")

_MODES = {"supports": ConvexityMode.SUPPORTS, "singular": ConvexityMode.SINGULAR_SUPPORTS}


def _emit(data: Any, path: str | None = None) -> None:
    text = to_json(data)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    logger.info("wrote %s", path)


# ── Subcommands ──────────────────────────────────────────────────────
def _cmd_analyze(args: argparse.Namespace) -> int:
    P = load_polynomial(args.poly)
    geometry = load_geometry(args.domain)
    config = load_analysis_config(args.config)
    report = analyze(P, geometry, config)
    data = AnalysisReportOut.model_validate(report_to_dict(report)).model_dump(mode="json")
    _emit(data, args.report)
    if args.svg:
        if not isinstance(geometry, PlanarDomain):
            logger.warning("--svg ignored: only planar domains are drawn")
        else:
            render_svg(geometry, report, args.svg)
    return report.exit_code


def _cmd_characteristics(args: argparse.Namespace) -> int:
    _emit(command_service.characteristics(load_polynomial(args.poly)))
    return EXIT_SURJECTIVE


def _cmd_localize(args: argparse.Namespace) -> int:
    direction = parse_vector(args.dir)
    exponent, vector = (parse_rational(args.sub[0]), parse_vector(args.sub[1])) if args.sub else (None, ())
    data = command_service.localize(
        load_polynomial(args.poly),
        direction,
        parse_vector(args.drift) if args.drift else (),
        exponent,
        vector,
    )
    _emit(data)
    return EXIT_SURJECTIVE


def _cmd_sigma(args: argparse.Namespace) -> int:
    mode = NormMode(args.mode) if args.mode else None
    data = command_service.sigma(load_polynomial(args.poly), parse_vector(args.y), load_analysis_config(args.config), mode)
    _emit(data)
    return EXIT_SURJECTIVE


def _cmd_convexity(args: argparse.Namespace) -> int:
    data = command_service.convexity(
        load_polynomial(args.poly),
        load_geometry(args.domain),
        _MODES[args.mode],
        load_analysis_config(args.config),
    )
    _emit(data)
    return EXIT_SURJECTIVE if data["status"] != "fail" else EXIT_NOT_SURJECTIVE


def _cmd_cones(args: argparse.Namespace) -> int:
    if args.verb == "dual":
        data = command_service.dual(load_cone(args.cone))
    elif args.verb == "proper":
        data = command_service.proper(load_cone(args.cone))
    elif args.verb in ("hyperplanes", "prop3"):
        data = command_service.hyperplanes(
            load_cone(args.cone), parse_vector(args.normal), parse_rational(args.c), parse_vector(args.x)
        )
    elif args.verb == "avoid":
        data = command_service.avoid(load_cone(args.cone), load_polynomial(args.poly))
    else:
        spec = validate_payload(RecessionRequest, read_json_file(args.spec), args.spec)
        data = command_service.recession(
            parse_vector(spec.x),
            normals=[parse_vector(a) for a in spec.normals],
            offsets=[parse_rational(b) for b in spec.offsets],
            apex=parse_vector(spec.apex) if spec.apex is not None else None,
            cone=spec.cone.to_cone() if spec.cone is not None else None,
        )
    _emit(data)
    return EXIT_SURJECTIVE


def _cmd_minprinciple(args: argparse.Namespace) -> int:
    segment = (parse_vector(args.segment[0]), parse_vector(args.segment[1]))
    line = LineSpec(parse_vector(args.line[0]), parse_rational(args.line[1])) if args.line else None
    data = command_service.min_principle(load_geometry(args.domain), segment, line, args.tol)
    _emit(data)
    return EXIT_SURJECTIVE if data["holds"] else EXIT_NOT_SURJECTIVE


def _cmd_schema(args: argparse.Namespace) -> int:
    sys.stdout.write(json.dumps(AnalysisReportOut.model_json_schema(), indent=2, sort_keys=True) + "\n")
    return EXIT_SURJECTIVE


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port)
    return EXIT_SURJECTIVE


# ── Parser ───────────────────────────────────────────────────────────
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pconvex", description="P-convexity and surjectivity verdicts.")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help=f"default: {settings.LOG_LEVEL}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full verdict for a symbol on a domain")
    p.add_argument("--poly", required=True)
    p.add_argument("--domain", required=True)
    p.add_argument("--config", help="analysis config JSON (default: $PCONVEX_CONFIG)")
    p.add_argument("--svg", help="write an SVG rendering here")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("characteristics", help="exact characteristic directions")
    p.add_argument("--poly", required=True)
    p.set_defaults(handler=_cmd_characteristics)

    p = sub.add_parser("localize", help="localization at infinity along one path")
    p.add_argument("--poly", required=True)
    p.add_argument("--dir", required=True, help="integer direction, e.g. 1,1,0")
    p.add_argument("--drift", help="rational drift vector")
    p.add_argument("--sub", nargs=2, metavar=("P/Q", "VECTOR"), help="sublinear term r^(p/q)·v")
    p.set_defaults(handler=_cmd_localize)

    p = sub.add_parser("sigma", help="σ estimate at a direction")
    p.add_argument("--poly", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--mode", choices=[m.value for m in NormMode])
    p.add_argument("--config")
    p.set_defaults(handler=_cmd_sigma)

    p = sub.add_parser("convexity", help="direction-convexity sweep")
    p.add_argument("--poly", required=True)
    p.add_argument("--domain", required=True)
    p.add_argument("--mode", choices=sorted(_MODES), default="supports")
    p.add_argument("--config")
    p.set_defaults(handler=_cmd_convexity)

    p = sub.add_parser("cones", help="cone operations")
    verbs = p.add_subparsers(dest="verb", required=True)
    for verb in ("dual", "proper"):
        v = verbs.add_parser(verb)
        v.add_argument("--cone", required=True)
    v = verbs.add_parser("hyperplanes", aliases=["prop3"])
    v.add_argument("--cone", required=True, help="the closed cone Γ°")
    v.add_argument("--normal", required=True)
    v.add_argument("--c", default="0")
    v.add_argument("--x", required=True)
    v = verbs.add_parser("avoid")
    v.add_argument("--cone", required=True)
    v.add_argument("--poly", required=True)
    v = verbs.add_parser("recession")
    v.add_argument("--spec", required=True, help="polyhedron or shifted cone JSON")
    p.set_defaults(handler=_cmd_cones)

    p = sub.add_parser("minprinciple", help="minimum principle of the boundary distance on a segment")
    p.add_argument("--domain", required=True)
    p.add_argument("--segment", nargs=2, required=True, metavar=("A", "B"))
    p.add_argument("--line", nargs=2, metavar=("NORMAL", "OFFSET"))
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=_cmd_minprinciple)

    p = sub.add_parser("schema", help="print the report JSON schema")
    p.set_defaults(handler=_cmd_schema)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=_cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except InternalInconsistency as exc:
        logger.error("internal inconsistency (please report): %s", exc.detail)
        return EXIT_INTERNAL
    except PConvexError as exc:
        sys.stderr.write(f"error: {exc.detail}\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
