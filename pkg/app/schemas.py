"""
Pydantic schemas for file formats, API requests and the report.

Kept in a single file: the CLI and the API read the same polynomial,
domain and cone formats.  Schemas are deliberately decoupled from the
immutable models so the wire formats can evolve independently.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from app.core.config import AnalysisConfig
from app.core.errors import InvalidDomain, InvalidInput, IoError
from app.models.cones import Cone, LorentzCone, PolyhedralCone, Sector2
from app.models.domain import Geometry, LineSpec, LorentzComplement, PlanarDomain
from app.models.enums import ConvexityMode, NormMode, SectorKind
from app.models.polynomial import ComplexRational, Polynomial

RationalText = str | int


def parse_rational(value: RationalText | float) -> Fraction:
    """``3``, ``"-2/5"`` or ``"0.125"`` as an exact Fraction."""
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"{value!r} is not a rational number") from exc


def parse_vector(value: str | list[RationalText]) -> tuple[Fraction, ...]:
    """A vector from ``"1,-1/2"`` or a JSON list."""
    items = value.split(",") if isinstance(value, str) else value
    vector = tuple(parse_rational(item) for item in items)
    if not vector:
        raise InvalidInput("empty vector")
    return vector


def _quadruple(q: list[int]) -> Fraction:
    """Two rationals packed as [num, den, num, den]; used for points and coefficients."""
    if q[1] == 0:
        raise InvalidInput(f"zero denominator in {q}")
    return Fraction(q[0], q[1])


# ── Polynomials ──────────────────────────────────────────────────────
class PolynomialIn(BaseModel):
    """``{"dimension": d, "terms": [[[e1, …, ed], [re_num, re_den, im_num, im_den]], …]}``."""

    dimension: int | None = Field(None, ge=1)
    terms: list[tuple[list[int], list[int]]]

    @model_validator(mode="before")
    @classmethod
    def _bare_term_list(cls, data: Any) -> Any:
        if isinstance(data, list):
            return {"terms": data}
        return data

    @field_validator("terms")
    @classmethod
    def _check_terms(cls, terms: list[tuple[list[int], list[int]]]) -> list[tuple[list[int], list[int]]]:
        seen: set[tuple[int, ...]] = set()
        for exponents, coefficient in terms:
            if any(e < 0 for e in exponents):
                raise ValueError(f"negative exponent in {exponents}")
            if len(coefficient) != 4:
                raise ValueError(f"coefficient {coefficient} must be [re_num, re_den, im_num, im_den]")
            if coefficient[1] == 0 or coefficient[3] == 0:
                raise ValueError(f"zero denominator in {coefficient}")
            key = tuple(exponents)
            if key in seen:
                raise ValueError(f"duplicate exponent {exponents}")
            seen.add(key)
        if len({len(e) for e, _ in terms}) > 1:
            raise ValueError("terms have exponent vectors of different lengths")
        return terms

    def to_polynomial(self) -> Polynomial:
        dimension = self.dimension or (len(self.terms[0][0]) if self.terms else None)
        if dimension is None:
            raise InvalidInput("cannot infer the dimension of an empty term list")
        if self.terms and len(self.terms[0][0]) != dimension:
            raise InvalidInput(f"exponent vectors do not have {dimension} entries")
        return Polynomial.from_terms(
            dimension,
            [
                (tuple(e), ComplexRational(_quadruple(c[:2]), _quadruple(c[2:])))
                for e, c in self.terms
            ],
        )


# ── Domains ──────────────────────────────────────────────────────────
class RegionIn(BaseModel):
    outer: list[list[int]]
    holes: list[list[list[int]]] = []

    @staticmethod
    def _points(ring: list[list[int]]) -> list[tuple[Fraction, Fraction]]:
        points = []
        for q in ring:
            if len(q) != 4:
                raise InvalidDomain(f"vertex {q} must be [x_num, x_den, y_num, y_den]")
            points.append((_quadruple(q[:2]), _quadruple(q[2:])))
        return points


class DomainIn(BaseModel):
    """``{"regions": [...]}`` for polygons or ``{"kind": "lorentz_complement", "dimension": d}``."""

    kind: Literal["polygons", "lorentz_complement"] = "polygons"
    regions: list[RegionIn] = []
    dimension: int | None = None

    def to_geometry(self) -> Geometry:
        if self.kind == "lorentz_complement":
            if self.dimension is None:
                raise InvalidDomain("the Lorentz complement needs a dimension")
            return LorentzComplement(self.dimension)
        return PlanarDomain.from_rings(
            [
                (RegionIn._points(region.outer), [RegionIn._points(h) for h in region.holes])
                for region in self.regions
            ]
        )


# ── Cones ────────────────────────────────────────────────────────────
class ConeIn(BaseModel):
    """Sectors by kind and integer boundary vectors, polyhedral cones by generators."""

    kind: Literal["zero", "ray", "sector", "half_plane", "full", "polyhedral", "lorentz"]
    start: list[int] | None = None
    end: list[int] | None = None
    start_open: bool = False
    end_open: bool = False
    dimension: int | None = Field(None, ge=2)
    generators: list[list[RationalText]] = []

    def to_cone(self) -> Cone:
        if self.kind == "lorentz":
            return LorentzCone(self.dimension or 3)
        if self.kind == "polyhedral":
            gens = tuple(parse_vector(g) for g in self.generators)
            dimension = self.dimension or (len(gens[0]) if gens else None)
            if dimension is None:
                raise InvalidInput("a polyhedral cone without generators needs a dimension")
            return PolyhedralCone(dimension, gens)
        kind = SectorKind(self.kind)
        if kind is SectorKind.ZERO:
            return Sector2.zero()
        if kind is SectorKind.FULL:
            return Sector2.full()
        if self.start is None:
            raise InvalidInput(f"a {self.kind} needs a start vector")
        if kind is SectorKind.RAY:
            return Sector2.ray(self.start)
        if kind is SectorKind.HALF_PLANE:
            return Sector2.half_plane(self.start, is_open=self.start_open and self.end_open)
        if self.end is None:
            raise InvalidInput("a sector needs an end vector")
        return Sector2.between(self.start, self.end, self.start_open, self.end_open)


# ── API requests ─────────────────────────────────────────────────────
class LineIn(BaseModel):
    normal: list[RationalText]
    offset: RationalText

    def to_line(self) -> LineSpec:
        return LineSpec(parse_vector(self.normal), parse_rational(self.offset))


class AnalyzeRequest(BaseModel):
    polynomial: PolynomialIn
    domain: DomainIn
    config: AnalysisConfig | None = None


class CharacteristicsRequest(BaseModel):
    polynomial: PolynomialIn


class LocalizeRequest(BaseModel):
    polynomial: PolynomialIn
    direction: list[int]
    drift: list[RationalText] = []
    sublinear_exponent: RationalText | None = None
    sublinear_vector: list[RationalText] = []


class SigmaRequest(BaseModel):
    polynomial: PolynomialIn
    y: list[RationalText]
    mode: NormMode | None = None
    config: AnalysisConfig | None = None


class ConvexityRequest(BaseModel):
    polynomial: PolynomialIn
    domain: DomainIn
    mode: ConvexityMode = ConvexityMode.SUPPORTS
    config: AnalysisConfig | None = None


class ConeRequest(BaseModel):
    cone: ConeIn


class HyperplaneRequest(BaseModel):
    gamma_dual: ConeIn
    normal: list[RationalText]
    c: RationalText = 0
    x: list[RationalText]


class AvoidRequest(BaseModel):
    cone: ConeIn
    polynomial: PolynomialIn


class RecessionRequest(BaseModel):
    """A polyhedron {⟨a_i, x⟩ ≤ b_i} or a shifted cone apex + cone."""

    normals: list[list[RationalText]] = []
    offsets: list[RationalText] = []
    apex: list[RationalText] | None = None
    cone: ConeIn | None = None
    x: list[RationalText]


class MinPrincipleRequest(BaseModel):
    domain: DomainIn
    segment: tuple[list[RationalText], list[RationalText]]
    line: LineIn | None = None
    tol: float = Field(1e-9, ge=0)


# ── Report ───────────────────────────────────────────────────────────
class VerdictOut(BaseModel):
    status: Literal["pass", "pass_with_caveat", "fail"]
    mode: Literal["supports", "singular_supports"]
    witnesses: list[dict[str, Any]]
    checked_directions: list[dict[str, Any]]
    caveats: list[str]
    violations: list[dict[str, Any]]


class ConclusionsOut(BaseModel):
    c_infinity: Literal["surjective", "not_surjective", "inconclusive"]
    d_prime: Literal["surjective", "not_surjective", "inconclusive"]


class ClassificationOut(BaseModel):
    elliptic: bool
    hypoellipticity: dict[str, Any] | None


class AnalysisReportOut(BaseModel):
    """The published report schema; ``pconvex schema`` prints it."""

    schema_version: str
    symbol: dict[str, Any]
    geometry: dict[str, Any]
    config: dict[str, Any]
    classification: ClassificationOut
    characteristic_set: list[dict[str, Any]] | None
    sigma: list[dict[str, Any]]
    sigma_zero_directions: list[Any]
    supports_verdict: VerdictOut
    singular_supports_verdict: VerdictOut
    conclusions: ConclusionsOut
    consistency: dict[str, str]
    caveats: list[str]
    diagnostics: list[dict[str, Any]]
    avoidance: dict[str, Any] | None
    min_principle: dict[str, Any] | None
    exit_code: int = Field(ge=0, le=2)

    model_config = {"extra": "forbid"}


# ── Files ────────────────────────────────────────────────────────────
def read_json_file(path: str | Path) -> Any:
    """Parse a JSON input file; unreadable or empty files are IoErrors naming the path."""
    source = Path(path)
    try:
        raw = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {source}: {exc}") from exc
    if not raw.strip():
        raise IoError(f"{source} is empty")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{source} is not valid JSON: {exc}") from exc


def validate_payload(model: type[BaseModel], data: Any, source: str | Path) -> BaseModel:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise InvalidInput(f"{source}: {exc}") from exc


def load_polynomial(path: str | Path) -> Polynomial:
    return validate_payload(PolynomialIn, read_json_file(path), path).to_polynomial()


def load_geometry(path: str | Path) -> Geometry:
    return validate_payload(DomainIn, read_json_file(path), path).to_geometry()


def load_cone(path: str | Path) -> Cone:
    return validate_payload(ConeIn, read_json_file(path), path).to_cone()
