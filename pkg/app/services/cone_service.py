"""
Cone service — duality, properness, recession, the hyperplane/cone
predicates and zero-set avoidance.

Planar cones are ``Sector2`` values and every planar answer is exact.
Finitely generated cones up to dimension 4 are dualized by enumerating
candidate extreme rays from (d−1)-subsets of the generators with exact
rational nullspaces; scipy's ``linprog`` is used only to decide whether
hyperplane slices of such cones are bounded.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np
import sympy
from scipy.optimize import linprog

from app.core.errors import (
    DegenerateCone,
    ImproperCone,
    InternalInconsistency,
    PointNotInSet,
    UnsupportedDimension,
    UnsupportedZeroSet,
)
from app.models.cones import (
    Cone,
    LorentzCone,
    PolyhedralCone,
    Polyhedron,
    Sector2,
    ShiftedCone,
    dot,
    primitive,
    rot_ccw,
    rot_cw,
)
from app.models.direction import AlgebraicDirection
from app.models.enums import SectorKind
from app.models.polynomial import Polynomial
from app.services.characteristic_service import characteristic_set
from app.services.polynomial_service import principal_part

logger = logging.getLogger(__name__)

RationalVector = tuple[Fraction, ...]
PlanarDirection = Union[AlgebraicDirection, Sequence[Fraction | int]]

_MAX_POLYHEDRAL_DIMENSION = 4
LORENTZ_WAVE_TAG = "lorentz-wave-closed-form"
SECTOR_MEMBERSHIP_TAG = "exact-sector-membership"


# ── Duality ──────────────────────────────────────────────────────────
def _sector_dual(c: Sector2) -> Sector2:
    if c.kind is SectorKind.ZERO:
        return Sector2.full()
    if c.kind is SectorKind.FULL:
        raise ImproperCone("the whole plane has no dual in the proper-cone sense")
    if c.kind is SectorKind.RAY:
        return Sector2.between(rot_cw(c.start), rot_ccw(c.start))
    if c.kind is SectorKind.HALF_PLANE:
        return Sector2.ray(rot_ccw(c.start))
    if c.opening_below_pi:
        return Sector2.between(rot_cw(c.end), rot_ccw(c.start))
    # an opening beyond π contains a line through the apex
    return Sector2.zero()


def _as_sympy_rows(vectors: Iterable[Sequence[Fraction]]) -> list[list[sympy.Rational]]:
    return [[sympy.Rational(x.numerator, x.denominator) for x in vec] for vec in vectors]


def _to_fractions(vector: sympy.Matrix) -> RationalVector:
    return tuple(Fraction(str(x)) for x in vector)


def _polyhedral_dual(c: PolyhedralCone) -> PolyhedralCone:
    d = c.dimension
    if d > _MAX_POLYHEDRAL_DIMENSION:
        raise UnsupportedDimension(f"polyhedral duality is implemented for d <= {_MAX_POLYHEDRAL_DIMENSION}")
    identity = [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    if not c.generators:
        return PolyhedralCone(d, tuple(identity) + tuple(tuple(-x for x in e) for e in identity))

    G = sympy.Matrix(_as_sympy_rows(c.generators))
    lineality = [_to_fractions(v) for v in G.nullspace()]
    rays: list[tuple[int, ...]] = []
    size = d - 1 - len(lineality)
    for subset in itertools.combinations(range(len(c.generators)), max(size, 0)):
        rows = [c.generators[i] for i in subset] + lineality
        kernel = sympy.Matrix(_as_sympy_rows(rows)).nullspace() if rows else [
            sympy.Matrix([int(i == j) for j in range(d)]) for i in range(d)
        ]
        if len(kernel) != 1:
            continue
        v = _to_fractions(kernel[0])
        for candidate in (v, tuple(-x for x in v)):
            if all(dot(g, candidate) >= 0 for g in c.generators):
                ray = primitive(candidate)
                if ray not in rays:
                    rays.append(ray)
    generators = [tuple(Fraction(x) for x in r) for r in rays]
    for vec in lineality:
        generators.extend([vec, tuple(-x for x in vec)])
    return PolyhedralCone(d, tuple(generators))


def dual_cone(c: Cone) -> Cone:
    """Γ° = {ξ : ⟨y, ξ⟩ ≥ 0 for every y ∈ Γ}, always closed."""
    if isinstance(c, Sector2):
        return _sector_dual(c)
    if isinstance(c, LorentzCone):
        return c
    return _polyhedral_dual(c)


def _rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    if not vectors:
        return 0
    return sympy.Matrix(_as_sympy_rows(vectors)).rank()


def is_proper(c: Cone) -> bool:
    """No one-dimensional subspace inside the cone."""
    if isinstance(c, Sector2):
        if c.kind in (SectorKind.ZERO, SectorKind.RAY):
            return True
        return c.opening_below_pi
    if isinstance(c, LorentzCone):
        return True
    # pointed iff the dual is full-dimensional
    return _rank(_polyhedral_dual(c).generators) == c.dimension


def is_degenerate(c: Cone) -> bool:
    """The cone is {0}."""
    if isinstance(c, Sector2):
        return c.kind is SectorKind.ZERO
    if isinstance(c, LorentzCone):
        return False
    return not c.generators


# ── Recession ────────────────────────────────────────────────────────
def recession_direction(C: Polyhedron | ShiftedCone, x: Sequence[Fraction | int]) -> RationalVector | None:
    """
    A direction ω with x + tω ∈ C for every t ≥ 0, or None when C is bounded.

    The returned vector is primitive integer (exact); normalize it for a
    unit direction.
    """
    point = tuple(Fraction(v) for v in x)
    if isinstance(C, ShiftedCone):
        offset = tuple(p - a for p, a in zip(point, C.apex))
        if not _in_polyhedral_cone(C.cone, offset):
            raise PointNotInSet(f"{[str(v) for v in point]} is not in the shifted cone")
        if not C.cone.generators:
            return None
        return tuple(Fraction(v) for v in primitive(C.cone.generators[0]))

    if not C.contains(point):
        raise PointNotInSet(f"{[str(v) for v in point]} violates an inequality of the polyhedron")
    negated = PolyhedralCone(C.dimension, tuple(tuple(-v for v in a) for a in C.normals if any(a)))
    recession = _polyhedral_dual(negated)
    if not recession.generators:
        return None
    return tuple(Fraction(v) for v in primitive(recession.generators[0]))


def _in_polyhedral_cone(cone: PolyhedralCone, v: RationalVector) -> bool:
    """Exact membership through the dual's generators (the cone is closed)."""
    return all(dot(f, v) >= 0 for f in _polyhedral_dual(cone).generators)


# ── Hyperplanes against cones ────────────────────────────────────────
@dataclass(frozen=True)
class ConePredicates:
    """Four equivalent conditions relating the hyperplanes H_c = {⟨y, N⟩ = c} to Γ°."""

    i: bool
    ii: bool
    iii: bool
    iv: bool
    x_on_hyperplane: bool

    @property
    def agree(self) -> bool:
        return self.i == self.ii == self.iii == self.iv

    def describe(self) -> dict:
        return {"i": self.i, "ii": self.ii, "iii": self.iii, "iv": self.iv, "x_on_hyperplane": self.x_on_hyperplane}


def _require_valid(gamma_dual: Sector2 | PolyhedralCone) -> None:
    if is_degenerate(gamma_dual):
        raise DegenerateCone("Γ° = {0} is excluded")
    if not is_proper(gamma_dual):
        raise DegenerateCone("Γ° must be proper")
    if isinstance(gamma_dual, Sector2) and not gamma_dual.is_closed:
        raise DegenerateCone("Γ° must be closed")


def _sector_slice_bounded(su: int, sv: int, delta: int) -> bool:
    """Whether {g ∈ [u, v] : ⟨g, N⟩ = δ} is bounded, from the boundary dot signs."""
    if delta > 0:
        return (su > 0 and sv > 0) or (su <= 0 and sv <= 0)
    if delta < 0:
        return (su < 0 and sv < 0) or (su >= 0 and sv >= 0)
    return (su > 0 and sv > 0) or (su < 0 and sv < 0)


def _sector_predicates(gamma_dual: Sector2, N: AlgebraicDirection) -> tuple[bool, bool, bool, bool]:
    perp = N.rotated()
    pred_i = not (gamma_dual.contains_direction(perp) or gamma_dual.contains_direction(perp.negated()))

    gamma = dual_cone(gamma_dual).interior()
    pred_ii = gamma.contains_direction(N) or gamma.contains_direction(N.negated())

    su, sv = N.dot_sign(gamma_dual.start), N.dot_sign(gamma_dual.end)
    pred_iii = all(_sector_slice_bounded(su, sv, delta) for delta in (-1, 0, 1))
    pred_iv = _sector_slice_bounded(su, sv, 0)
    return pred_i, pred_ii, pred_iii, pred_iv


def _slice_bounded_lp(generators: Sequence[RationalVector], normal: Sequence[float], delta: int) -> bool:
    """max Σλ subject to λ ≥ 0, Σλ_i⟨g_i, N⟩ = δ; finite (or infeasible) iff the slice is bounded."""
    k = len(generators)
    pairing = np.array([[sum(float(g_j) * n_j for g_j, n_j in zip(g, normal)) for g in generators]])
    result = linprog(
        c=-np.ones(k),
        A_eq=pairing,
        b_eq=np.array([float(delta)]),
        bounds=[(0, None)] * k,
        method="highs",
    )
    return result.status != 3


def _polyhedral_predicates(gamma_dual: PolyhedralCone, N: Sequence[Fraction | int | float]) -> tuple[bool, bool, bool, bool]:
    exact = tuple(Fraction(v) for v in N)
    signs = [dot(g, exact) for g in gamma_dual.generators]
    pred_i = all(s > 0 for s in signs) or all(s < 0 for s in signs)

    # N ∈ int Γ iff ⟨g, N⟩ > 0 on the generators of Γ°, since Γ°° = Γ°
    gamma_closure = dual_cone(gamma_dual)
    in_interior = _rank(gamma_closure.generators) == gamma_dual.dimension and all(
        dot(g, exact) > 0 for g in gamma_dual.generators
    )
    opposite = all(dot(g, exact) < 0 for g in gamma_dual.generators)
    pred_ii = in_interior or opposite

    normal = [float(v) for v in exact]
    pred_iii = all(_slice_bounded_lp(gamma_dual.generators, normal, delta) for delta in (-1, 0, 1))
    pred_iv = _slice_bounded_lp(gamma_dual.generators, normal, 0)
    return pred_i, pred_ii, pred_iii, pred_iv


def hyperplane_predicates(
    gamma_dual: Sector2 | PolyhedralCone,
    N: PlanarDirection | Sequence[Fraction | int | float],
    c: Fraction | int,
    x: Sequence[Fraction | int],
) -> ConePredicates:
    """
    Evaluate, for the closed proper cone Γ° and the normal N:

    i   H_0 ∩ Γ° = {0}
    ii  N ∈ Γ or −N ∈ Γ, with Γ the interior of the dual of Γ°
    iii H_c ∩ (x + Γ°) is bounded for every offset
    iv  H_c ∩ (x + Γ°) = {x} whenever x ∈ H_c

    The four hold or fail together.  H_c is taken with the normal exactly as
    given (a rational vector, or the primitive vector of a rational
    direction); ``x_on_hyperplane`` only reports whether the sample point
    lies on it.
    """
    _require_valid(gamma_dual)
    if isinstance(gamma_dual, Sector2):
        direction = N if isinstance(N, AlgebraicDirection) else AlgebraicDirection.from_vector(N)
        values = _sector_predicates(gamma_dual, direction)
        if isinstance(N, AlgebraicDirection):
            if N.is_rational:
                on_plane = dot(x, N.rational_vector()) == Fraction(c)
            else:
                on_plane = c == 0 and N.dot_sign(x) == 0
        else:
            on_plane = dot(x, N) == Fraction(c)
    else:
        values = _polyhedral_predicates(gamma_dual, N)
        on_plane = dot(x, [Fraction(v) for v in N]) == Fraction(c)

    result = ConePredicates(*values, x_on_hyperplane=bool(on_plane))
    if not result.agree:
        raise InternalInconsistency(f"cone predicates disagree: {result.describe()}")
    return result


# ── Zero-set avoidance ───────────────────────────────────────────────
@dataclass(frozen=True)
class AvoidanceResult:
    avoids: bool
    justification: str
    witness: AlgebraicDirection | None = None

    def describe(self) -> dict:
        data: dict = {"avoids": self.avoids, "justification": self.justification}
        if self.witness is not None:
            data["witness"] = self.witness.describe()
        return data


@dataclass(frozen=True)
class WaveForm:
    """A diagonal real principal part Σ a_i x_i² with a_d < 0 dominating every positive a_i."""

    coefficients: tuple[Fraction, ...]


def wave_zero_set(P: Polynomial) -> WaveForm | None:
    """Recognize principal parts whose zero set misses the open Lorentz cone by the closed-form argument."""
    principal = principal_part(P)
    d = P.dimension
    if principal.degree != 2 or d < 2:
        return None
    coefficients = [Fraction(0)] * d
    for alpha, coeff in principal.items():
        if not coeff.is_real or max(alpha) != 2:
            return None
        coefficients[alpha.index(2)] = coeff.re
    if coefficients[-1] == 0:
        return None
    if coefficients[-1] > 0:
        coefficients = [-a for a in coefficients]
    positive = max([a for a in coefficients[:-1] if a > 0], default=Fraction(0))
    if positive > -coefficients[-1]:
        return None
    return WaveForm(tuple(coefficients))


def cone_avoids_zeroset(
    gamma: Sector2 | LorentzCone,
    zero_set: Polynomial | Iterable[AlgebraicDirection],
) -> AvoidanceResult:
    """
    Whether the open cone Γ contains no zero direction.

    In the plane ``zero_set`` is a list of directions (or a symbol, whose
    characteristic set is used).  For the Lorentz cone only the
    closed-form wave argument is available: for x in the open cone
    x_d > |x′|, so Σ a_i x_i² < (max(a_i, 0) + a_d)·x_d² ≤ 0.
    """
    if isinstance(gamma, LorentzCone):
        if not isinstance(zero_set, Polynomial) or zero_set.dimension != gamma.dimension:
            raise UnsupportedZeroSet("the Lorentz cone is checked against a symbol of the same dimension")
        form = wave_zero_set(zero_set)
        if form is None:
            raise UnsupportedZeroSet(f"no closed-form avoidance argument for {zero_set}")
        logger.info("principal part of %s avoids the open Lorentz cone (closed form)", zero_set)
        return AvoidanceResult(True, LORENTZ_WAVE_TAG)

    if not isinstance(gamma, Sector2):
        raise UnsupportedZeroSet("zero-set avoidance is decided for planar sectors and the Lorentz cone")
    if isinstance(zero_set, Polynomial):
        if zero_set.dimension != 2:
            raise UnsupportedZeroSet("planar sectors are tested against planar symbols")
        directions: Iterable[AlgebraicDirection] = characteristic_set(zero_set)
    else:
        directions = zero_set
    for direction in directions:
        if gamma.contains_direction(direction):
            return AvoidanceResult(False, SECTOR_MEMBERSHIP_TAG, witness=direction)
    return AvoidanceResult(True, SECTOR_MEMBERSHIP_TAG)


# ── Lorentz distance ─────────────────────────────────────────────────
def distance_to_lorentz(x: Sequence[Fraction | int | float]) -> float:
    """Euclidean distance from x to {y : y_d ≥ |(y_1, …, y_{d−1})|}."""
    head = [float(v) for v in x[:-1]]
    last = float(x[-1])
    radius = math.hypot(*head) if head else 0.0
    if last >= radius:
        return 0.0
    if radius <= -last:
        return math.hypot(radius, last)
    return (radius - last) / math.sqrt(2)
