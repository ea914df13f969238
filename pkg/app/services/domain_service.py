"""
Domain service — direction-convexity sweeps, exterior-cone diagnostics,
boundary distance and the minimum-principle check.

Sweeps are exact: vertices are ordered by their projection onto N with
exact sign tests (N may have an irrational slope), and the number of
chords is counted once per gap between consecutive projection values on
a sample line through the midpoint of two vertices, so no vertex lies on
it.  Chord endpoints are exact for rational N and float otherwise.
"""

from __future__ import annotations

import functools
import logging
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from app.core.errors import NotOnBoundary, OutsideDomain, SegmentNotInDomain
from app.core.predicates import (
    Point,
    edges,
    point_segment_distance2,
    segment_segment_distance2,
)
from app.models.cones import Sector2, ccw_compare, primitive, rot_ccw
from app.models.direction import AlgebraicDirection
from app.models.domain import (
    Chord,
    DiagnosticResult,
    Geometry,
    LineSpec,
    LorentzComplement,
    MinPrincipleResult,
    PlanarDomain,
    SweepWitness,
    Verdict,
)
from app.models.enums import ConvexityMode, SectorKind, VerdictStatus
from app.services.cone_service import distance_to_lorentz, dual_cone

logger = logging.getLogger(__name__)

_SLOPE_PRECISION = Fraction(1, 2**96)
_AXES = ((1, 0), (0, 1), (-1, 0), (0, -1))


# ── Sweeps ───────────────────────────────────────────────────────────
def _sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def _approx_vector(N: AlgebraicDirection) -> tuple[Fraction, Fraction]:
    """An integer-or-rational vector along N: exact when N is rational."""
    if N.is_rational:
        w = N.rational_vector()
        return (Fraction(w[0]), Fraction(w[1]))
    s = N.refined_to(_SLOPE_PRECISION)
    mid = (s.lower + s.upper) / 2
    return (Fraction(N.sign), N.sign * mid)


def _projection_groups(vertices: Iterable[Point], N: AlgebraicDirection) -> list[Point]:
    """One vertex per distinct value of ⟨v, N⟩, in increasing order."""
    def compare(u: Point, v: Point) -> int:
        return N.dot_sign(_sub(u, v))

    ordered = sorted(sorted(set(vertices)), key=functools.cmp_to_key(compare))
    groups: list[Point] = []
    for v in ordered:
        if not groups or compare(groups[-1], v) != 0:
            groups.append(v)
    return groups


def _line_crossings(
    domain: PlanarDomain,
    N: AlgebraicDirection,
    sample: Point,
) -> list[tuple[Fraction, Point, tuple[Point, Point]]]:
    """Crossings of the line through ``sample`` orthogonal to N, sorted along N⊥."""
    nx, ny = _approx_vector(N)
    perp = (-ny, nx)
    crossings = []
    for a, b in domain.edges():
        side_a = N.dot_sign(_sub(a, sample))
        side_b = N.dot_sign(_sub(b, sample))
        if side_a * side_b >= 0:
            continue
        # a + t(b − a) on ⟨x − sample, n⟩ = 0 with the rational n ≈ N
        da = (a[0] - sample[0]) * nx + (a[1] - sample[1]) * ny
        db = (b[0] - sample[0]) * nx + (b[1] - sample[1]) * ny
        t = da / (da - db)
        x = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
        position = (x[0] - sample[0]) * perp[0] + (x[1] - sample[1]) * perp[1]
        crossings.append((position, x, (a, b)))
    crossings.sort(key=lambda item: item[0])
    return crossings


def _chords(domain: PlanarDomain, N: AlgebraicDirection, sample: Point) -> list[Chord]:
    crossings = _line_crossings(domain, N, sample)
    chords = []
    for (_, start, start_edge), (_, end, end_edge) in zip(crossings[::2], crossings[1::2]):
        exact = N.is_rational
        chords.append(
            Chord(
                start=(float(start[0]), float(start[1])),
                end=(float(end[0]), float(end[1])),
                start_edge=start_edge,
                end_edge=end_edge,
                exact_start=start if exact else None,
                exact_end=end if exact else None,
            )
        )
    return chords


def count_chords(domain: PlanarDomain, N: AlgebraicDirection, sample: Point) -> int:
    """Exact number of maximal open intervals in which the line through ``sample`` ⟂ N meets the domain."""
    crossing_edges = sum(
        1 for a, b in domain.edges()
        if N.dot_sign(_sub(a, sample)) * N.dot_sign(_sub(b, sample)) < 0
    )
    return crossing_edges // 2


def _offset(N: AlgebraicDirection, p: Point) -> tuple[float, Fraction | None]:
    unit = N.unit
    value = float(p[0]) * unit[0] + float(p[1]) * unit[1]
    if N.is_rational:
        w = N.rational_vector()
        return value, p[0] * w[0] + p[1] * w[1]
    return value, None


def direction_convexity(domain: PlanarDomain, N: AlgebraicDirection) -> SweepWitness | None:
    """None if every line ⟨x, N⟩ = α meets the domain in at most one interval, else a witness."""
    groups = _projection_groups(domain.vertices, N)
    for lower, upper in zip(groups, groups[1:]):
        sample = ((lower[0] + upper[0]) / 2, (lower[1] + upper[1]) / 2)
        if count_chords(domain, N, sample) >= 2:
            offset, exact_offset = _offset(N, sample)
            witness = SweepWitness(
                direction=N,
                sample_point=sample,
                offset=offset,
                chords=tuple(_chords(domain, N, sample)),
                exact_offset=exact_offset,
            )
            logger.debug("sweep along %s fails at offset %.12g", N, offset)
            return witness
    return None


def replay_witness(domain: PlanarDomain, witness: SweepWitness) -> int:
    return count_chords(domain, witness.direction, witness.sample_point)


def _dedupe_antipodes(directions: Iterable[AlgebraicDirection]) -> list[AlgebraicDirection]:
    kept: list[AlgebraicDirection] = []
    for N in directions:
        if not any(N.parallel_to(other) for other in kept):
            kept.append(N if N.sign > 0 else N.negated())
    return kept


def convexity_verdict(
    domain: PlanarDomain,
    zero_directions: Iterable[AlgebraicDirection],
    mode: ConvexityMode = ConvexityMode.SUPPORTS,
) -> Verdict:
    """Sweep every zero direction over every connected component."""
    directions = _dedupe_antipodes(zero_directions)
    witnesses = []
    for component in domain.components:
        for N in directions:
            witness = direction_convexity(component, N)
            if witness is not None:
                witnesses.append(witness)
    status = VerdictStatus.FAIL if witnesses else VerdictStatus.PASS
    logger.info(
        "%s sweep over %d direction(s), %d component(s): %s",
        mode.value, len(directions), len(domain.regions), status.value,
    )
    return Verdict(status, mode, tuple(witnesses), tuple(directions))


# ── Exterior cones ───────────────────────────────────────────────────
def _ray_hits_domain(domain: PlanarDomain, x0: Point, v: tuple[int, int]) -> bool:
    """Whether {x0 + t·v : t > 0} meets the open set (exact)."""
    params: set[Fraction] = set()
    for a, b in domain.edges():
        e = _sub(b, a)
        denom = v[0] * e[1] - v[1] * e[0]
        w = _sub(a, x0)
        if denom == 0:
            # parallel: collinear edges contribute their endpoints
            if w[0] * v[1] - w[1] * v[0] == 0:
                for p in (a, b):
                    d = _sub(p, x0)
                    t = (d[0] * v[0] + d[1] * v[1]) / (v[0] ** 2 + v[1] ** 2)
                    if t > 0:
                        params.add(t)
            continue
        t = (w[0] * e[1] - w[1] * e[0]) / denom
        s = (w[0] * v[1] - w[1] * v[0]) / denom
        if t > 0 and 0 <= s <= 1:
            params.add(t)
    ordered = sorted(params)
    samples = [ordered[0] / 2] if ordered else [Fraction(1)]
    samples += [(p + q) / 2 for p, q in zip(ordered, ordered[1:])]
    if ordered:
        samples.append(ordered[-1] + 1)
    return any(domain.contains((x0[0] + t * v[0], x0[1] + t * v[1])) for t in samples)


def _critical_directions(domain: PlanarDomain, x0: Point) -> list[tuple[int, int]]:
    found: list[tuple[int, int]] = []
    for vertex in domain.vertices:
        if vertex != x0:
            d = primitive(_sub(vertex, x0))
            if d not in found:
                found.append(d)
    for axis in _AXES:
        if axis not in found:
            found.append(axis)
    reference = (1, 0)
    return sorted(
        found,
        key=functools.cmp_to_key(
            lambda u, v: ccw_compare(reference, AlgebraicDirection.from_vector(u), AlgebraicDirection.from_vector(v))
        ),
    )


def avoidance_set(domain: PlanarDomain, x0: Point) -> list[Sector2]:
    """Maximal closed arcs of directions v whose ray x0 + ℝ₊v misses the domain."""
    critical = _critical_directions(domain, x0)
    n = len(critical)
    ring: list[tuple[tuple[int, int], bool, bool]] = []  # (direction, is_critical, avoids)
    for i, u in enumerate(critical):
        v = critical[(i + 1) % n]
        gap = primitive((u[0] + v[0], u[1] + v[1]))
        ring.append((u, True, not _ray_hits_domain(domain, x0, u)))
        ring.append((gap, False, not _ray_hits_domain(domain, x0, gap)))

    if all(avoids for _, _, avoids in ring):
        return [Sector2.full()]
    # rotate so the cyclic list starts right after an element that hits
    start = next(i for i, (_, _, avoids) in enumerate(ring) if not avoids) + 1
    ring = ring[start:] + ring[:start]
    arcs: list[Sector2] = []
    run: list[tuple[int, int]] = []
    for direction, is_critical, avoids in ring + [((0, 0), True, False)]:
        if avoids and is_critical:
            run.append(direction)
            continue
        if avoids:
            continue
        if run:
            arcs.append(Sector2.between(run[0], run[-1]))
            run = []
    return arcs


def _angle_gap(u: tuple[float, float], v: tuple[float, float]) -> float:
    return abs(math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1]))


def _margin(gamma: Sector2, zero_directions: Sequence[AlgebraicDirection]) -> float:
    """Smallest angle between the closure of Γ and a zero direction (π if none)."""
    if not zero_directions:
        return math.pi
    units = []
    for a, b in (gamma.start, gamma.end):
        length = math.hypot(a, b)
        units.append((a / length, b / length))
    return min(_angle_gap(unit, N.unit) for N in zero_directions for unit in units)


def _candidates(arc: Sector2, zero_directions: Sequence[AlgebraicDirection]) -> list[Sector2]:
    """Proper closed Γ° inside the arc worth trying: the arc itself, or a nearly-π window."""
    if arc.kind is SectorKind.RAY or arc.opening_below_pi:
        return [arc]
    a = arc.start
    g2 = rot_ccw(a)
    g1 = (a[0] + g2[0], a[1] + g2[1])
    candidates = []
    for k in range(64):
        trial = primitive((g1[0] + (2**k - 1) * g2[0], g1[1] + (2**k - 1) * g2[1]))
        gamma_dual = Sector2.between(a, rot_ccw(trial))
        candidates.append(gamma_dual)
        gamma = dual_cone(gamma_dual).interior()
        if not any(gamma.contains_direction(N) for N in zero_directions):
            break
    return candidates


def exterior_cone_diagnostic(
    domain: PlanarDomain,
    x0: Sequence[Fraction | int],
    zero_directions: Iterable[AlgebraicDirection],
) -> DiagnosticResult:
    """
    Look for an open cone Γ ≠ ℝ² with (x0 + Γ°) ∩ Ω = ∅ and no zero direction in Γ.

    Γ° ranges over proper closed subsectors of the avoidance set at x0;
    passing candidates are ranked by their angular margin to the zero set.
    """
    point = (Fraction(x0[0]), Fraction(x0[1]))
    if not domain.on_boundary(point):
        raise NotOnBoundary(f"({point[0]}, {point[1]}) is not on the domain boundary")
    zeros = list(zero_directions)
    arcs = avoidance_set(domain, point)

    tried: list[Sector2] = []
    best: tuple[float, Sector2, Sector2] | None = None
    for arc in arcs:
        if arc.kind is SectorKind.FULL:
            continue
        for gamma_dual in _candidates(arc, zeros):
            tried.append(gamma_dual)
            gamma = dual_cone(gamma_dual).interior()
            if any(gamma.contains_direction(N) for N in zeros):
                continue
            margin = _margin(gamma, zeros)
            if best is None or margin > best[0]:
                best = (margin, gamma_dual, gamma)

    if best is None:
        return DiagnosticResult(point, False, tuple(arcs), tuple(tried))
    margin, gamma_dual, gamma = best
    return DiagnosticResult(point, True, tuple(arcs), tuple(tried), gamma_dual, gamma, margin)


# ── Distances ────────────────────────────────────────────────────────
def _as_point(x: Sequence[Fraction | int]) -> Point:
    return (Fraction(x[0]), Fraction(x[1]))


def boundary_distance_squared(domain: PlanarDomain, x: Sequence[Fraction | int]) -> Fraction:
    """Exact squared distance from an interior point to the complement."""
    p = _as_point(x)
    if not domain.contains(p):
        raise OutsideDomain(f"({p[0]}, {p[1]}) is not in the open domain")
    return min(point_segment_distance2(p, a, b)[0] for a, b in domain.edges())


def boundary_distance(domain: PlanarDomain, x: Sequence[Fraction | int]) -> float:
    return math.sqrt(boundary_distance_squared(domain, x))


def _check_on_line(segment: Sequence[Sequence], line: LineSpec | None, exact: bool) -> None:
    if line is None:
        return
    for p in segment:
        value = sum(Fraction(a) * Fraction(b) if exact else float(a) * float(b) for a, b in zip(p, line.normal))
        target = Fraction(line.offset) if exact else float(line.offset)
        mismatch = value != target if exact else abs(value - target) > 1e-9
        if mismatch:
            raise SegmentNotInDomain("segment endpoints do not lie on the given line")


def min_principle_check(
    geometry: Geometry,
    segment: tuple[Sequence, Sequence],
    line: LineSpec | None = None,
    tol: float = 1e-9,
) -> MinPrincipleResult:
    """
    Compare min d_Ω over the segment K with its minimum at the two endpoints.

    For polygons the interior minimum is exact: the distance from K to the
    complement is the smallest segment–segment distance from K to an edge.
    For the Lorentz complement d_Ω is convex along K, so a bounded scalar
    minimization is reliable.
    """
    if isinstance(geometry, LorentzComplement):
        return _lorentz_min_principle(geometry, segment, line, tol)

    a, b = _as_point(segment[0]), _as_point(segment[1])
    _check_on_line((a, b), line, exact=True)
    if not (geometry.contains(a) and geometry.contains(b)):
        raise SegmentNotInDomain("segment endpoints must lie in the open domain")
    best: tuple[Fraction, Point] | None = None
    for c, d in geometry.edges():
        dist2, nearest = segment_segment_distance2(a, b, c, d)
        if dist2 == 0:
            raise SegmentNotInDomain("segment meets the domain boundary")
        if best is None or dist2 < best[0]:
            best = (dist2, nearest)
    m_boundary = min(boundary_distance(geometry, a), boundary_distance(geometry, b))
    m_interior = math.sqrt(best[0])
    holds = not m_interior < m_boundary - tol
    return MinPrincipleResult(
        holds=holds,
        m_interior=m_interior,
        m_boundary=m_boundary,
        argmin=(float(best[1][0]), float(best[1][1])),
        tolerance=tol,
        exact_m_interior_squared=best[0],
    )


def _lorentz_min_principle(
    geometry: LorentzComplement,
    segment: tuple[Sequence, Sequence],
    line: LineSpec | None,
    tol: float,
) -> MinPrincipleResult:
    a = np.array([float(v) for v in segment[0]])
    b = np.array([float(v) for v in segment[1]])
    if len(a) != geometry.dimension or len(b) != geometry.dimension:
        raise SegmentNotInDomain(f"segment endpoints need {geometry.dimension} coordinates")
    _check_on_line((a, b), line, exact=False)

    def along(s: float) -> float:
        return distance_to_lorentz(a + s * (b - a))

    result = minimize_scalar(along, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-12})
    s_min = float(result.x)
    m_interior = min(float(result.fun), along(0.0), along(1.0))
    if m_interior <= 0:
        raise SegmentNotInDomain("segment meets the Lorentz cone")
    m_boundary = min(along(0.0), along(1.0))
    holds = not m_interior < m_boundary - tol
    logger.info("Lorentz complement: min over K %.12g, at the ends %.12g", m_interior, m_boundary)
    return MinPrincipleResult(
        holds=holds,
        m_interior=m_interior,
        m_boundary=m_boundary,
        argmin=tuple(float(v) for v in a + s_min * (b - a)),
        tolerance=tol,
    )
