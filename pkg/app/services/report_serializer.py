"""
Report serialization helper.

Converts analysis reports and the values inside them into plain dicts
suitable for JSON output.

Rules:
- Fraction → "p/q" string, ComplexRational → [re, im] strings.
- Enum → its value; tuples → lists.
- Objects with ``describe()`` are rendered through it; other dataclasses
  field by field.
- Output must be deterministic: identical inputs give identical bytes.
"""

from __future__ import annotations

import dataclasses
import json
from enum import Enum
from fractions import Fraction
from typing import Any

from app.models.localization import HypoellipticityVerdict
from app.models.polynomial import ComplexRational, Polynomial
from app.models.report import AnalysisReport, SigmaRecord

REPORT_SCHEMA_VERSION = "1"


def serialise_value(value: Any) -> Any:
    """Convert a single Python value to a JSON-safe representation."""
    if isinstance(value, Enum):
        return value.value
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, ComplexRational):
        return [str(value.re), str(value.im)]
    if isinstance(value, Polynomial):
        return polynomial_to_dict(value)
    if isinstance(value, dict):
        return {str(k): serialise_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [serialise_value(v) for v in value]
    if hasattr(value, "describe"):
        return serialise_value(value.describe())
    if dataclasses.is_dataclass(value):
        return {f.name: serialise_value(getattr(value, f.name)) for f in dataclasses.fields(value)}
    raise TypeError(f"cannot serialise {type(value).__name__}")


def polynomial_to_dict(P: Polynomial) -> dict[str, Any]:
    """The polynomial file format plus a readable rendering."""
    terms = [
        [list(alpha), [c.re.numerator, c.re.denominator, c.im.numerator, c.im.denominator]]
        for alpha, c in sorted(P.items())
    ]
    return {"dimension": P.dimension, "terms": terms, "text": str(P)}


def _sigma_record(record: SigmaRecord) -> dict[str, Any]:
    estimate = record.estimate
    direction = record.direction
    return {
        "direction": serialise_value(direction),
        "unit": list(estimate.direction),
        "value": estimate.value,
        "certificate": serialise_value(estimate.certificate),
        "effective_norm_mode": estimate.config.get("effective_norm_mode"),
    }


def _hypoellipticity(verdict: HypoellipticityVerdict | None) -> dict[str, Any] | None:
    if verdict is None:
        return None
    return {
        "status": verdict.status.value,
        "certified": verdict.certified,
        "witness": serialise_value(verdict.witness),
        "evidence": [
            {"unit": list(e.direction), "value": e.value, "kind": e.kind.value}
            for e in verdict.evidence
        ],
    }


def report_to_dict(report: AnalysisReport) -> dict[str, Any]:
    chars = report.characteristic_set
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "symbol": polynomial_to_dict(report.symbol),
        "geometry": serialise_value(report.geometry),
        "config": serialise_value(report.config),
        "classification": {
            "elliptic": report.elliptic,
            "hypoellipticity": _hypoellipticity(report.hypoellipticity),
        },
        "characteristic_set": None if chars is None else [serialise_value(N) for N in chars],
        "sigma": [_sigma_record(r) for r in report.sigma],
        "sigma_zero_directions": [serialise_value(r.direction) for r in report.sigma_zero],
        "supports_verdict": serialise_value(report.supports),
        "singular_supports_verdict": serialise_value(report.singular),
        "conclusions": {
            "c_infinity": report.c_infinity.value,
            "d_prime": report.d_prime.value,
        },
        "consistency": serialise_value(report.consistency),
        "caveats": list(report.caveats),
        "diagnostics": serialise_value(report.diagnostics),
        "avoidance": serialise_value(report.avoidance),
        "min_principle": serialise_value(report.min_principle),
        "exit_code": report.exit_code,
    }


def to_json(data: Any) -> str:
    """Sorted-key JSON with a trailing newline; the same input always gives the same text."""
    return json.dumps(serialise_value(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def dump_report(report: AnalysisReport) -> str:
    return to_json(report_to_dict(report))
