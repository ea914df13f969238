"""
Domain values: polygonal regions with holes, the Lorentz-cone complement,
and the verdict records produced by the sweeps and diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from app.core.errors import InvalidDomain
from app.core.predicates import (
    Point,
    Ring,
    edges,
    on_ring,
    ring_is_simple,
    segments_intersect,
    signed_area2,
    strictly_inside,
)
from app.models.cones import Sector2
from app.models.direction import AlgebraicDirection
from app.models.enums import ConvexityMode, VerdictStatus


def _as_ring(vertices: Sequence[Sequence[Fraction | int]]) -> Ring:
    return tuple((Fraction(x), Fraction(y)) for x, y in vertices)


def _oriented(ring: Ring, counterclockwise: bool) -> Ring:
    if (signed_area2(ring) > 0) != counterclockwise:
        return tuple(reversed(ring))
    return ring


def _rings_touch(first: Ring, second: Ring) -> bool:
    return any(
        segments_intersect(a, b, c, d)
        for a, b in edges(first)
        for c, d in edges(second)
    )


@dataclass(frozen=True)
class Region:
    """One connected piece: the interior of ``outer`` minus the closed holes."""

    outer: Ring
    holes: tuple[Ring, ...] = ()

    def contains(self, p: Point) -> bool:
        if not strictly_inside(p, self.outer):
            return False
        return not any(strictly_inside(p, hole) or on_ring(p, hole) for hole in self.holes)

    @property
    def rings(self) -> tuple[Ring, ...]:
        return (self.outer, *self.holes)

    def on_boundary(self, p: Point) -> bool:
        return any(on_ring(p, ring) for ring in self.rings)


@dataclass(frozen=True)
class PlanarDomain:
    """
    A bounded open set in the plane: a disjoint union of regions.

    Outer rings are stored counterclockwise and holes clockwise whatever
    the input orientation was.  Each region is connected, so the regions
    are the connected components.
    """

    regions: tuple[Region, ...]

    @classmethod
    def from_rings(
        cls,
        regions: Sequence[tuple[Sequence[Sequence[Fraction | int]], Sequence[Sequence[Sequence[Fraction | int]]]]],
    ) -> PlanarDomain:
        built = []
        for index, (outer, holes) in enumerate(regions):
            outer_ring = _as_ring(outer)
            if not ring_is_simple(outer_ring):
                raise InvalidDomain(f"outer ring of region {index} is not a simple polygon")
            hole_rings = []
            for h, hole in enumerate(holes):
                ring = _as_ring(hole)
                if not ring_is_simple(ring):
                    raise InvalidDomain(f"hole {h} of region {index} is not a simple polygon")
                hole_rings.append(_oriented(ring, counterclockwise=False))
            built.append(Region(_oriented(outer_ring, counterclockwise=True), tuple(hole_rings)))
        domain = cls(tuple(built))
        domain.validate()
        return domain

    @classmethod
    def polygon(cls, vertices: Sequence[Sequence[Fraction | int]], holes: Sequence = ()) -> PlanarDomain:
        return cls.from_rings([(vertices, holes)])

    def validate(self) -> None:
        if not self.regions:
            raise InvalidDomain("a domain needs at least one region")
        for index, region in enumerate(self.regions):
            for h, hole in enumerate(region.holes):
                if _rings_touch(hole, region.outer) or not all(strictly_inside(v, region.outer) for v in hole):
                    raise InvalidDomain(f"hole {h} of region {index} is not strictly inside its outer ring")
                for k in range(h):
                    other = region.holes[k]
                    if _rings_touch(hole, other) or strictly_inside(hole[0], other) or strictly_inside(other[0], hole):
                        raise InvalidDomain(f"holes {k} and {h} of region {index} overlap")
        for i, first in enumerate(self.regions):
            for j in range(i):
                second = self.regions[j]
                if any(_rings_touch(a, b) for a in first.rings for b in second.rings):
                    raise InvalidDomain(f"regions {j} and {i} touch or overlap")
                if second.contains(first.outer[0]) or first.contains(second.outer[0]):
                    raise InvalidDomain(f"regions {j} and {i} overlap")

    # ── Queries ──────────────────────────────────────────────────────
    @property
    def components(self) -> tuple[PlanarDomain, ...]:
        return tuple(PlanarDomain((region,)) for region in self.regions)

    @property
    def rings(self) -> tuple[Ring, ...]:
        return tuple(ring for region in self.regions for ring in region.rings)

    @property
    def vertices(self) -> tuple[Point, ...]:
        return tuple(v for ring in self.rings for v in ring)

    def edges(self) -> list[tuple[Point, Point]]:
        return [edge for ring in self.rings for edge in edges(ring)]

    def contains(self, p: Point) -> bool:
        """Exact membership in the open set."""
        return any(region.contains(p) for region in self.regions)

    def on_boundary(self, p: Point) -> bool:
        return any(region.on_boundary(p) for region in self.regions)

    def bounding_box(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def describe(self) -> dict:
        return {
            "regions": [
                {
                    "outer": [[str(x), str(y)] for x, y in region.outer],
                    "holes": [[[str(x), str(y)] for x, y in hole] for hole in region.holes],
                }
                for region in self.regions
            ]
        }


@dataclass(frozen=True)
class LorentzComplement:
    """ℝ^d minus the closed Lorentz cone {x_d ≥ |(x_1, …, x_{d−1})|}."""

    dimension: int

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise InvalidDomain("the Lorentz complement needs d >= 2")

    def describe(self) -> dict:
        return {"kind": "lorentz_complement", "dimension": self.dimension}


Geometry = Union[PlanarDomain, LorentzComplement]


@dataclass(frozen=True)
class LineSpec:
    """The hyperplane ⟨x, normal⟩ = offset (the normal is used as given)."""

    normal: tuple[Fraction | float, ...]
    offset: Fraction | float

    def describe(self) -> dict:
        return {"normal": [str(v) for v in self.normal], "offset": str(self.offset)}


# ── Sweep records ────────────────────────────────────────────────────
@dataclass(frozen=True)
class Chord:
    """An open interval of a sweep line inside the domain, bounded by two edges."""

    start: tuple[float, float]
    end: tuple[float, float]
    start_edge: tuple[Point, Point]
    end_edge: tuple[Point, Point]
    exact_start: Point | None = None
    exact_end: Point | None = None

    def describe(self) -> dict:
        data: dict = {
            "start": list(self.start),
            "end": list(self.end),
            "start_edge": [[str(c) for c in p] for p in self.start_edge],
            "end_edge": [[str(c) for c in p] for p in self.end_edge],
        }
        if self.exact_start is not None and self.exact_end is not None:
            data["exact_start"] = [str(c) for c in self.exact_start]
            data["exact_end"] = [str(c) for c in self.exact_end]
        return data


@dataclass(frozen=True)
class SweepWitness:
    """
    The line {x : ⟨x − sample_point, N⟩ = 0} meets the domain in ≥ 2 chords.

    ``offset`` is ⟨sample_point, N⟩ for the unit N; for rational directions
    ``exact_offset`` is ⟨sample_point, w⟩ with w the primitive integer
    vector of N.
    """

    direction: AlgebraicDirection
    sample_point: Point
    offset: float
    chords: tuple[Chord, ...]
    exact_offset: Fraction | None = None

    def describe(self) -> dict:
        data: dict = {
            "direction": self.direction.describe(),
            "sample_point": [str(c) for c in self.sample_point],
            "offset": self.offset,
            "chords": [chord.describe() for chord in self.chords],
        }
        if self.exact_offset is not None:
            data["exact_offset"] = str(self.exact_offset)
        return data


@dataclass(frozen=True)
class Verdict:
    status: VerdictStatus
    mode: ConvexityMode
    witnesses: tuple[SweepWitness, ...] = ()
    checked_directions: tuple[AlgebraicDirection, ...] = ()
    caveats: tuple[str, ...] = ()
    violations: tuple[MinPrincipleResult, ...] = ()

    def __post_init__(self) -> None:
        if (self.status is VerdictStatus.FAIL) != bool(self.witnesses or self.violations):
            raise ValueError("a verdict fails exactly when it carries witnesses")

    @property
    def passed(self) -> bool:
        return self.status is not VerdictStatus.FAIL


# ── Exterior-cone diagnostics ────────────────────────────────────────
@dataclass(frozen=True)
class DiagnosticResult:
    point: Point
    passed: bool
    avoidance: tuple[Sector2, ...]
    tried: tuple[Sector2, ...]
    gamma_dual: Sector2 | None = None
    gamma: Sector2 | None = None
    margin: float | None = None

    def describe(self) -> dict:
        data: dict = {
            "point": [str(c) for c in self.point],
            "status": "pass" if self.passed else "fail",
            "avoidance_set": [s.describe() for s in self.avoidance],
            "sectors_tried": [s.describe() for s in self.tried],
        }
        if self.gamma_dual is not None:
            data["gamma_dual"] = self.gamma_dual.describe()
            data["gamma"] = self.gamma.describe()
            data["margin"] = self.margin
        return data


# ── Minimum principle ────────────────────────────────────────────────
@dataclass(frozen=True)
class MinPrincipleResult:
    holds: bool
    m_interior: float
    m_boundary: float
    argmin: tuple[float, ...]
    tolerance: float
    exact_m_interior_squared: Fraction | None = field(default=None, compare=False)

    def describe(self) -> dict:
        data: dict = {
            "holds": self.holds,
            "m_interior": self.m_interior,
            "m_boundary": self.m_boundary,
            "argmin": list(self.argmin),
            "tolerance": self.tolerance,
        }
        if self.exact_m_interior_squared is not None:
            data["exact_m_interior_squared"] = str(self.exact_m_interior_squared)
        return data
