"""
Command service — the single-purpose operations behind the CLI
subcommands and the API endpoints.

Each function takes parsed values, runs one service call and returns a
JSON-ready dict, so both surfaces print exactly the same payload.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from app.core.config import AnalysisConfig
from app.core.errors import InvalidInput, UnsupportedDimension
from app.models.cones import Cone, LorentzCone, PolyhedralCone, Polyhedron, ShiftedCone
from app.models.direction import AlgebraicDirection
from app.models.domain import Geometry, LineSpec, PlanarDomain
from app.models.enums import ConvexityMode, NormMode
from app.models.localization import PathSpec, SublinearTerm
from app.models.polynomial import Polynomial
from app.services import cone_service, domain_service
from app.services.characteristic_service import characteristic_set, is_elliptic
from app.services.localization_service import lineality_space, ray_localization
from app.services.report_serializer import serialise_value
from app.services.sigma_service import sigma_estimate


# ── Symbols ──────────────────────────────────────────────────────────
def characteristics(P: Polynomial) -> dict[str, Any]:
    chars = characteristic_set(P)
    return {
        "symbol": serialise_value(P),
        "elliptic": is_elliptic(P),
        "principal_degree": chars.source_degree,
        "directions": [N.describe() for N in chars],
    }


def localize(
    P: Polynomial,
    direction: Sequence[Fraction | int],
    drift: Sequence[Fraction] = (),
    sublinear_exponent: Fraction | None = None,
    sublinear_vector: Sequence[Fraction] = (),
) -> dict[str, Any]:
    sublinear = None
    if sublinear_exponent is not None:
        if not sublinear_vector:
            raise InvalidInput("a sublinear term needs a vector")
        sublinear = SublinearTerm(sublinear_exponent, tuple(sublinear_vector))
    path = PathSpec(tuple(direction), tuple(drift), sublinear)
    profile = ray_localization(P, path)
    data = profile.describe()
    data["lineality"] = None if profile.constant else lineality_space(profile.profile).describe()
    return data


def sigma(
    P: Polynomial,
    y: Sequence[Fraction],
    config: AnalysisConfig,
    mode: NormMode | None = None,
) -> dict[str, Any]:
    if mode is not None:
        config = config.model_copy(update={"norm_mode": mode.value})
    estimate = sigma_estimate(P, tuple(y), config)
    return {
        "direction": [str(v) for v in y],
        "unit": list(estimate.direction),
        "value": estimate.value,
        "certificate": serialise_value(estimate.certificate),
        "config": estimate.config,
    }


# ── Domains ──────────────────────────────────────────────────────────
def _planar(geometry: Geometry) -> PlanarDomain:
    if not isinstance(geometry, PlanarDomain):
        raise UnsupportedDimension("sweeps run on planar polygonal domains")
    return geometry


def zero_directions(P: Polynomial, mode: ConvexityMode, config: AnalysisConfig) -> list[AlgebraicDirection]:
    """Characteristic directions for supports, certified σ-zero ones for singular supports."""
    chars = characteristic_set(P)
    if mode is ConvexityMode.SUPPORTS:
        return list(chars)
    return [N for N in chars.representatives() if sigma_estimate(P, N, config).is_zero]


def convexity(P: Polynomial, geometry: Geometry, mode: ConvexityMode, config: AnalysisConfig) -> dict[str, Any]:
    domain = _planar(geometry)
    verdict = domain_service.convexity_verdict(domain, zero_directions(P, mode, config), mode)
    return serialise_value(verdict)


def min_principle(
    geometry: Geometry,
    segment: tuple[Sequence[Fraction], Sequence[Fraction]],
    line: LineSpec | None,
    tol: float,
) -> dict[str, Any]:
    return domain_service.min_principle_check(geometry, segment, line, tol).describe()


# ── Cones ────────────────────────────────────────────────────────────
def dual(cone: Cone) -> dict[str, Any]:
    return {"cone": cone.describe(), "dual": cone_service.dual_cone(cone).describe()}


def proper(cone: Cone) -> dict[str, Any]:
    return {
        "cone": cone.describe(),
        "proper": cone_service.is_proper(cone),
        "degenerate": cone_service.is_degenerate(cone),
    }


def hyperplanes(
    gamma_dual: Cone,
    normal: Sequence[Fraction],
    c: Fraction,
    x: Sequence[Fraction],
) -> dict[str, Any]:
    if isinstance(gamma_dual, LorentzCone):
        raise InvalidInput("the hyperplane predicates take a sector or a polyhedral cone")
    result = cone_service.hyperplane_predicates(gamma_dual, tuple(normal), c, tuple(x))
    return {"gamma_dual": gamma_dual.describe(), **result.describe()}


def avoid(cone: Cone, P: Polynomial) -> dict[str, Any]:
    if isinstance(cone, PolyhedralCone):
        raise InvalidInput("zero-set avoidance takes an open sector or the Lorentz cone")
    return {"cone": cone.describe(), **cone_service.cone_avoids_zeroset(cone, P).describe()}


def recession(
    x: Sequence[Fraction],
    normals: Sequence[Sequence[Fraction]] = (),
    offsets: Sequence[Fraction] = (),
    apex: Sequence[Fraction] | None = None,
    cone: Cone | None = None,
) -> dict[str, Any]:
    if apex is not None:
        if not isinstance(cone, PolyhedralCone):
            raise InvalidInput("a shifted cone needs a polyhedral cone")
        target: Polyhedron | ShiftedCone = ShiftedCone(tuple(apex), cone)
    else:
        if not normals:
            raise InvalidInput("a polyhedron needs at least one inequality")
        target = Polyhedron(len(normals[0]), tuple(tuple(a) for a in normals), tuple(offsets))
    omega = cone_service.recession_direction(target, x)
    return {"recession_direction": None if omega is None else [str(v) for v in omega]}

