"""
SVG rendering of a planar analysis.

Layers, bottom to top: the domain (even-odd fill, so holes show), the
characteristic direction rose, sweep witnesses (full line plus the
highlighted chords) and the avoidance sectors at boundary points whose
exterior-cone diagnostic failed.  Coordinates are printed with a fixed
precision, so identical reports give identical bytes.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from xml.sax.saxutils import escape

from app.core.errors import InvalidInput, IoError
from app.models.cones import Sector2
from app.models.domain import PlanarDomain, SweepWitness
from app.models.enums import SectorKind
from app.models.report import AnalysisReport

logger = logging.getLogger(__name__)

CANVAS = 480.0
MARGIN = 40.0
ROSE_RADIUS = 28.0
WEDGE_RADIUS = 18.0


def _num(value: float) -> str:
    text = f"{value:.4f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


class _Frame:
    """Maps domain coordinates onto the canvas (y axis pointing up)."""

    def __init__(self, domain: PlanarDomain) -> None:
        x0, y0, x1, y1 = (float(v) for v in domain.bounding_box())
        span = max(x1 - x0, y1 - y0) or 1.0
        self.scale = (CANVAS - 2 * MARGIN) / span
        self.x0, self.y0 = x0, y0
        self.bounds = (x0, y0, x1, y1)

    def point(self, x: float, y: float) -> tuple[str, str]:
        sx = MARGIN + (float(x) - self.x0) * self.scale
        sy = CANVAS - MARGIN - (float(y) - self.y0) * self.scale
        return _num(sx), _num(sy)


def _ring_path(frame: _Frame, ring) -> str:
    coords = [" ".join(frame.point(x, y)) for x, y in ring]
    return "M " + " L ".join(coords) + " Z"


def _domain_layer(frame: _Frame, domain: PlanarDomain) -> list[str]:
    paths = " ".join(_ring_path(frame, ring) for ring in domain.rings)
    return [
        '<g id="domain">',
        f'<path d="{paths}" fill="#dfe8f3" fill-rule="evenodd" stroke="#33475b" stroke-width="1.5"/>',
        "</g>",
    ]


def _rose_layer(report: AnalysisReport) -> list[str]:
    chars = report.characteristic_set
    if chars is None or chars.is_empty:
        return []
    cx, cy = CANVAS - MARGIN / 2 - ROSE_RADIUS, MARGIN / 2 + ROSE_RADIUS
    lines = [
        '<g id="direction-rose">',
        f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="{_num(ROSE_RADIUS)}" fill="none" stroke="#999"/>',
    ]
    for N in chars:
        ux, uy = N.unit
        lines.append(
            f'<line class="characteristic" x1="{_num(cx)}" y1="{_num(cy)}" '
            f'x2="{_num(cx + ROSE_RADIUS * ux)}" y2="{_num(cy - ROSE_RADIUS * uy)}" stroke="#b5651d"/>'
        )
    lines.append("</g>")
    return lines


def _clip_line(frame: _Frame, witness: SweepWitness) -> tuple[tuple[float, float], tuple[float, float]]:
    """The witness line clipped to the padded bounding box."""
    nx, ny = witness.direction.unit
    tx, ty = -ny, nx
    px, py = (float(c) for c in witness.sample_point)
    x0, y0, x1, y1 = frame.bounds
    pad = 0.05 * max(x1 - x0, y1 - y0)
    lo, hi = -math.inf, math.inf
    for origin, step, low, high in ((px, tx, x0 - pad, x1 + pad), (py, ty, y0 - pad, y1 + pad)):
        if abs(step) < 1e-15:
            continue
        a, b = (low - origin) / step, (high - origin) / step
        lo, hi = max(lo, min(a, b)), min(hi, max(a, b))
    return (px + lo * tx, py + lo * ty), (px + hi * tx, py + hi * ty)


def _distinct_witnesses(report: AnalysisReport) -> tuple[SweepWitness, ...]:
    """Supports and singular sweeps often share a witness; draw it once."""
    seen: dict[tuple, SweepWitness] = {}
    for witness in report.supports.witnesses + report.singular.witnesses:
        seen.setdefault((str(witness.direction), witness.sample_point), witness)
    return tuple(seen.values())


def _witness_layer(frame: _Frame, witnesses: tuple[SweepWitness, ...]) -> list[str]:
    if not witnesses:
        return []
    lines = ['<g id="witnesses">']
    for witness in witnesses:
        (ax, ay), (bx, by) = _clip_line(frame, witness)
        x1, y1 = frame.point(ax, ay)
        x2, y2 = frame.point(bx, by)
        lines.append(
            f'<line class="witness-line" data-offset="{witness.offset:.12f}" '
            f'x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#c0392b" stroke-dasharray="6 4"/>'
        )
        for chord in witness.chords:
            c1 = frame.point(*chord.start)
            c2 = frame.point(*chord.end)
            lines.append(
                f'<line class="witness-chord" x1="{c1[0]}" y1="{c1[1]}" x2="{c2[0]}" y2="{c2[1]}" '
                'stroke="#c0392b" stroke-width="4"/>'
            )
        label = escape(f"N = {witness.direction}, offset {witness.offset:.6f}")
        lines.append(f'<title>{label}</title>')
    lines.append("</g>")
    return lines


def _wedge(cx: float, cy: float, sector: Sector2) -> str:
    if sector.kind is SectorKind.FULL:
        return f'<circle class="avoidance" cx="{_num(cx)}" cy="{_num(cy)}" r="{_num(WEDGE_RADIUS)}"/>'
    a = math.atan2(sector.start[1], sector.start[0])
    b = math.atan2(sector.end[1], sector.end[0])
    span = (b - a) % (2 * math.pi)
    sx, sy = cx + WEDGE_RADIUS * math.cos(a), cy - WEDGE_RADIUS * math.sin(a)
    if sector.kind is SectorKind.RAY or span == 0:
        return f'<line class="avoidance" x1="{_num(cx)}" y1="{_num(cy)}" x2="{_num(sx)}" y2="{_num(sy)}"/>'
    ex, ey = cx + WEDGE_RADIUS * math.cos(b), cy - WEDGE_RADIUS * math.sin(b)
    large = 1 if span > math.pi else 0
    # counterclockwise in the plane is clockwise on screen
    return (
        f'<path class="avoidance" d="M {_num(cx)} {_num(cy)} L {_num(sx)} {_num(sy)} '
        f'A {_num(WEDGE_RADIUS)} {_num(WEDGE_RADIUS)} 0 {large} 0 {_num(ex)} {_num(ey)} Z"/>'
    )


def _diagnostic_layer(frame: _Frame, report: AnalysisReport) -> list[str]:
    failing = [d for d in report.diagnostics if not d.passed]
    if not failing:
        return []
    lines = ['<g id="exterior-cones" fill="#f5b041" fill-opacity="0.5" stroke="#b9770e">']
    for diagnostic in failing:
        sx, sy = frame.point(*diagnostic.point)
        cx, cy = float(sx), float(sy)
        lines.append(f'<circle class="failing-point" cx="{sx}" cy="{sy}" r="3"/>')
        lines.extend(_wedge(cx, cy, sector) for sector in diagnostic.avoidance)
    lines.append("</g>")
    return lines


def svg_document(domain: PlanarDomain, report: AnalysisReport) -> str:
    if not isinstance(report.geometry, PlanarDomain):
        raise InvalidInput("only planar analyses can be drawn")
    frame = _Frame(domain)
    title = escape(
        f"{report.symbol}: C∞ {report.c_infinity.value}, D′ {report.d_prime.value}"
    )
    size = _num(CANVAS)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<title>{title}</title>",
        *_domain_layer(frame, domain),
        *_rose_layer(report),
        *_witness_layer(frame, _distinct_witnesses(report)),
        *_diagnostic_layer(frame, report),
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def render_svg(domain: PlanarDomain, report: AnalysisReport, path: str | Path | None = None) -> str:
    """Build the SVG text and write it to ``path`` when given."""
    document = svg_document(domain, report)
    if path is not None:
        target = Path(path)
        try:
            target.write_text(document, encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write SVG to {target}: {exc}") from exc
        logger.info("SVG written to %s", target)
    return document
