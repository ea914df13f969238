"""
Cone values: planar sectors, finitely generated cones, the Lorentz cone,
and H-represented polyhedra.

Sector boundaries are integer direction vectors; angular questions are
answered with determinant and dot-product signs, never with radians.
A sector runs counterclockwise from ``start`` to ``end``.  Openness is
tracked per boundary ray; the apex belongs to the sector iff both
boundary rays are closed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence, Union

from app.core.errors import InvalidInput
from app.models.direction import AlgebraicDirection
from app.models.enums import SectorKind

IntVector = tuple[int, int]
RationalVector = tuple[Fraction, ...]


def _sign(value: Fraction | int) -> int:
    return (value > 0) - (value < 0)


def primitive(vector: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Primitive integer vector with the same direction."""
    values = [Fraction(v) for v in vector]
    if not any(values):
        raise InvalidInput("the zero vector has no direction")
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (v.denominator for v in values), 1)
    ints = [int(v * lcm) for v in values]
    g = reduce(math.gcd, (abs(i) for i in ints))
    return tuple(i // g for i in ints)


def rot_ccw(v: IntVector) -> IntVector:
    return (-v[1], v[0])


def rot_cw(v: IntVector) -> IntVector:
    return (v[1], -v[0])


def det(u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> Fraction:
    return Fraction(u[0]) * v[1] - Fraction(u[1]) * v[0]


def dot(u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def _as_direction(value: AlgebraicDirection | Sequence[Fraction | int]) -> AlgebraicDirection:
    if isinstance(value, AlgebraicDirection):
        return value
    return AlgebraicDirection.from_vector(value)


def _half(reference: IntVector, u: AlgebraicDirection) -> int:
    """0 if the ccw angle from ``reference`` to u lies in [0, π), else 1."""
    cross = u.cross_sign(reference)
    if cross > 0 or (cross == 0 and u.dot_sign(reference) > 0):
        return 0
    return 1


def ccw_compare(reference: IntVector, u: AlgebraicDirection, v: AlgebraicDirection) -> int:
    """Compare the counterclockwise angles in [0, 2π) from ``reference`` to u and to v."""
    hu, hv = _half(reference, u), _half(reference, v)
    if hu != hv:
        return -1 if hu < hv else 1
    # inside one half turn, v counterclockwise of u means u comes first
    return -u.det_sign(v)


@dataclass(frozen=True)
class Sector2:
    kind: SectorKind
    start: IntVector | None = None
    end: IntVector | None = None
    start_open: bool = False
    end_open: bool = False

    def __post_init__(self) -> None:
        if self.kind in (SectorKind.ZERO, SectorKind.FULL):
            return
        if self.start is None or self.end is None:
            raise InvalidInput(f"{self.kind.value} sectors need boundary directions")
        object.__setattr__(self, "start", primitive(self.start))
        object.__setattr__(self, "end", primitive(self.end))
        if self.kind is SectorKind.RAY and self.start != self.end:
            raise InvalidInput("a ray has a single boundary direction")
        if self.kind is SectorKind.HALF_PLANE and self.end != (-self.start[0], -self.start[1]):
            raise InvalidInput("a half-plane is bounded by opposite directions")
        if self.kind is SectorKind.SECTOR:
            if self.start == self.end:
                raise InvalidInput("a sector needs distinct boundary directions")
            if det(self.start, self.end) == 0:
                raise InvalidInput("opposite boundary directions describe a half-plane")

    # ── Constructors ─────────────────────────────────────────────────
    @classmethod
    def zero(cls) -> Sector2:
        return cls(SectorKind.ZERO)

    @classmethod
    def full(cls) -> Sector2:
        return cls(SectorKind.FULL)

    @classmethod
    def ray(cls, direction: Sequence[Fraction | int]) -> Sector2:
        d = primitive(direction)
        return cls(SectorKind.RAY, d, d)

    @classmethod
    def half_plane(cls, start: Sequence[Fraction | int], is_open: bool = False) -> Sector2:
        s = primitive(start)
        return cls(SectorKind.HALF_PLANE, s, (-s[0], -s[1]), is_open, is_open)

    @classmethod
    def between(
        cls,
        start: Sequence[Fraction | int],
        end: Sequence[Fraction | int],
        start_open: bool = False,
        end_open: bool = False,
    ) -> Sector2:
        """Counterclockwise sector from ``start`` to ``end`` (any opening except 0, π, 2π)."""
        s, e = primitive(start), primitive(end)
        if s == e:
            return cls.ray(s)
        if det(s, e) == 0:
            return cls(SectorKind.HALF_PLANE, s, e, start_open, end_open)
        return cls(SectorKind.SECTOR, s, e, start_open, end_open)

    # ── Shape ────────────────────────────────────────────────────────
    @property
    def opening_below_pi(self) -> bool:
        """Opening angle < π (only meaningful for SECTOR)."""
        return self.kind is SectorKind.SECTOR and det(self.start, self.end) > 0

    @property
    def is_closed(self) -> bool:
        return not (self.start_open or self.end_open)

    @property
    def is_open(self) -> bool:
        return self.kind is SectorKind.FULL or (
            self.kind in (SectorKind.SECTOR, SectorKind.HALF_PLANE) and self.start_open and self.end_open
        )

    def closure(self) -> Sector2:
        return Sector2(self.kind, self.start, self.end, False, False)

    def interior(self) -> Sector2:
        if self.kind in (SectorKind.ZERO, SectorKind.RAY):
            raise InvalidInput("a ray or the apex has empty interior")
        return Sector2(self.kind, self.start, self.end, True, True)

    # ── Membership ───────────────────────────────────────────────────
    def contains_direction(self, value: AlgebraicDirection | Sequence[Fraction | int]) -> bool:
        """Whether the (non-zero) direction lies in the sector, boundary flags respected."""
        u = _as_direction(value)
        if self.kind is SectorKind.ZERO:
            return False
        if self.kind is SectorKind.FULL:
            return True
        start = AlgebraicDirection.from_vector(self.start)
        if u.same_as(start):
            return not self.start_open
        if self.kind is SectorKind.RAY:
            return False
        end = AlgebraicDirection.from_vector(self.end)
        if u.same_as(end):
            return not self.end_open
        return ccw_compare(self.start, u, end) < 0

    @property
    def contains_origin(self) -> bool:
        return self.kind in (SectorKind.ZERO, SectorKind.RAY, SectorKind.FULL) or self.is_closed

    def contains_vector(self, vector: Sequence[Fraction | int]) -> bool:
        if not any(Fraction(v) for v in vector):
            return self.contains_origin
        return self.contains_direction(vector)

    def contains_sector(self, other: Sector2) -> bool:
        """Set inclusion other ⊆ self (exact)."""
        if other.kind is SectorKind.ZERO:
            return self.contains_origin
        if self.kind is SectorKind.FULL:
            return True
        if other.kind is SectorKind.FULL or self.kind is SectorKind.ZERO:
            return False
        if other.contains_origin and not self.contains_origin:
            return False
        if other.kind is SectorKind.RAY:
            return self.contains_direction(other.start)
        if self.kind is SectorKind.RAY:
            return False
        if not (self._admits_boundary(other.start, other.start_open)
                and self._admits_boundary(other.end, other.end_open)):
            return False
        # other must run from its start to its end without leaving self
        first = AlgebraicDirection.from_vector(other.start)
        last = AlgebraicDirection.from_vector(other.end)
        return ccw_compare(self.start, first, last) < 0

    def _admits_boundary(self, ray: IntVector, ray_open: bool) -> bool:
        if self.contains_direction(ray):
            return True
        # an open boundary ray only needs to be a limit of self
        return ray_open and self.closure().contains_direction(ray)

    def describe(self) -> dict:
        data: dict = {"kind": self.kind.value}
        if self.start is not None:
            data.update(
                start=list(self.start),
                end=list(self.end),
                start_open=self.start_open,
                end_open=self.end_open,
            )
        return data


@dataclass(frozen=True)
class PolyhedralCone:
    dimension: int
    generators: tuple[RationalVector, ...]

    def __post_init__(self) -> None:
        gens = tuple(tuple(Fraction(x) for x in g) for g in self.generators)
        for g in gens:
            if len(g) != self.dimension:
                raise InvalidInput(f"generator {g} does not have {self.dimension} coordinates")
            if not any(g):
                raise InvalidInput("cone generators must be non-zero")
        object.__setattr__(self, "generators", gens)

    def describe(self) -> dict:
        return {
            "kind": "polyhedral",
            "dimension": self.dimension,
            "generators": [[str(x) for x in g] for g in self.generators],
        }


@dataclass(frozen=True)
class LorentzCone:
    """{x : x_d ≥ |(x_1, …, x_{d−1})|}, closed; its interior is Γ of the light cone."""

    dimension: int

    def contains(self, x: Sequence[Fraction | int]) -> bool:
        head = [Fraction(v) for v in x[:-1]]
        last = Fraction(x[-1])
        return last >= 0 and last * last >= sum(v * v for v in head)

    def describe(self) -> dict:
        return {"kind": "lorentz", "dimension": self.dimension}


@dataclass(frozen=True)
class Polyhedron:
    """{x : ⟨a_i, x⟩ ≤ b_i for all i}."""

    dimension: int
    normals: tuple[RationalVector, ...]
    offsets: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        normals = tuple(tuple(Fraction(x) for x in a) for a in self.normals)
        offsets = tuple(Fraction(b) for b in self.offsets)
        if len(normals) != len(offsets):
            raise InvalidInput("each inequality needs one normal and one offset")
        for a in normals:
            if len(a) != self.dimension:
                raise InvalidInput(f"normal {a} does not have {self.dimension} coordinates")
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)

    @classmethod
    def box(cls, lower: Sequence[Fraction | int], upper: Sequence[Fraction | int | None]) -> Polyhedron:
        """Axis-aligned box; ``None`` in ``upper`` leaves that side unbounded."""
        d = len(lower)
        normals, offsets = [], []
        for i in range(d):
            e = tuple(Fraction(1 if j == i else 0) for j in range(d))
            normals.append(tuple(-x for x in e))
            offsets.append(-Fraction(lower[i]))
            if upper[i] is not None:
                normals.append(e)
                offsets.append(Fraction(upper[i]))
        return cls(d, tuple(normals), tuple(offsets))

    def contains(self, x: Sequence[Fraction | int]) -> bool:
        return all(dot(a, x) <= b for a, b in zip(self.normals, self.offsets))


@dataclass(frozen=True)
class ShiftedCone:
    """apex + cone."""

    apex: RationalVector
    cone: PolyhedralCone

    def __post_init__(self) -> None:
        object.__setattr__(self, "apex", tuple(Fraction(x) for x in self.apex))


Cone = Union[Sector2, PolyhedralCone, LorentzCone]
