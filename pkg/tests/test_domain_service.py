from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from app.core.errors import InvalidDomain, NotOnBoundary, OutsideDomain, SegmentNotInDomain
from app.core.predicates import Point
from app.models.cones import Sector2
from app.models.direction import AlgebraicDirection
from app.models.domain import LineSpec, LorentzComplement, PlanarDomain
from app.models.enums import ConvexityMode, VerdictStatus
from app.models.polynomial import Polynomial
from app.services.characteristic_service import characteristic_set
from app.services.domain_service import (
    avoidance_set,
    boundary_distance,
    boundary_distance_squared,
    convexity_verdict,
    count_chords,
    direction_convexity,
    exterior_cone_diagnostic,
    min_principle_check,
    replay_witness,
)

PYTHAGOREAN_TRIPLES = [(3, 4, 5), (5, 12, 13), (8, 15, 17)]


def _direction(v: tuple[int, int]) -> AlgebraicDirection:
    return AlgebraicDirection.from_vector(v)


def _chords_on_line(domain: PlanarDomain, w: tuple[int, int], alpha: Fraction) -> int:
    """Count the intervals of {⟨x, w⟩ = α} inside the domain by testing midpoints between crossings."""
    norm2 = w[0] * w[0] + w[1] * w[1]
    base = (alpha * w[0] / norm2, alpha * w[1] / norm2)
    along = (-w[1], w[0])

    def at(s: Fraction) -> Point:
        return (base[0] + s * along[0], base[1] + s * along[1])

    params = set()
    for a, b in domain.edges():
        e = (b[0] - a[0], b[1] - a[1])
        denom = along[0] * e[1] - along[1] * e[0]
        if denom == 0:
            continue
        r = (a[0] - base[0], a[1] - base[1])
        s = (r[0] * e[1] - r[1] * e[0]) / denom
        u = (r[0] * along[1] - r[1] * along[0]) / denom
        if 0 <= u <= 1:
            params.add(s)
    ordered = sorted(params)
    inside = [domain.contains(at((p + q) / 2)) for p, q in zip(ordered, ordered[1:])]
    return sum(1 for k, flag in enumerate(inside) if flag and (k == 0 or not inside[k - 1]))


def _random_directions(rng: np.random.Generator, count: int) -> list[tuple[int, int]]:
    found: list[tuple[int, int]] = []
    while len(found) < count:
        v = tuple(int(c) for c in rng.integers(-3, 4, size=2))
        if any(v) and math.gcd(*v) == 1:
            found.append(v)
    return found


def _random_real_symbol(rng: np.random.Generator) -> Polynomial:
    """Random real symbol of degree 3 with a non-zero principal part."""
    terms = {(k, 3 - k): int(rng.integers(-3, 4)) for k in range(4)}
    if not any(terms.values()):
        terms[(3, 0)] = 1
    for _ in range(int(rng.integers(0, 3))):
        alpha = tuple(int(a) for a in rng.integers(0, 3, size=2))
        if sum(alpha) < 3:
            terms[alpha] = int(rng.integers(-4, 5))
    return Polynomial(2, terms)


def _edge_samples(domain: PlanarDomain) -> list[Point]:
    points = list(domain.vertices)
    for a, b in domain.edges():
        for s in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            points.append((a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])))
    return points


def _rotate(p: Point, triple: tuple[int, int, int]) -> Point:
    a, b, c = triple
    return (Fraction(a * p[0] - b * p[1], c), Fraction(b * p[0] + a * p[1], c))


def _convex_by_scanning(domain: PlanarDomain, w: tuple[int, int]) -> bool:
    projections = [v[0] * w[0] + v[1] * w[1] for v in domain.vertices]
    low, high = math.floor(min(projections) * 4), math.ceil(max(projections) * 4)
    return all(
        _chords_on_line(domain, w, Fraction(k, 4)) <= 1
        for k in range(low, high + 1)
        if k % 2
    )


# ── Domains ──────────────────────────────────────────────────────────
def test_orientation_is_normalized():
    clockwise = PlanarDomain.polygon([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert clockwise.contains((Fraction(1, 2), Fraction(1, 2)))
    assert clockwise.on_boundary((Fraction(1), Fraction(1, 2)))
    assert not clockwise.contains((Fraction(1), Fraction(1, 2)))


def test_holes_are_excluded(holed_square):
    assert not holed_square.contains((Fraction(2), Fraction(2)))
    assert not holed_square.contains((Fraction(1), Fraction(2)))
    assert holed_square.contains((Fraction(1, 2), Fraction(2)))


@pytest.mark.parametrize(
    "rings",
    [
        [([(0, 0), (2, 2), (2, 0), (0, 2)], [])],
        [([(0, 0), (1, 0)], [])],
        [([(0, 0), (4, 0), (4, 4), (0, 4)], [[(3, 1), (5, 1), (5, 3), (3, 3)]])],
        [([(0, 0), (2, 0), (2, 2), (0, 2)], []), ([(1, 1), (3, 1), (3, 3), (1, 3)], [])],
        [([(0, 0), (1, 0), (1, 1), (0, 1)], []), ([(1, 0), (2, 0), (2, 1), (1, 1)], [])],
    ],
    ids=["bowtie", "degenerate", "hole-crosses-outer", "overlap", "shared-edge"],
)
def test_invalid_domains(rings):
    with pytest.raises(InvalidDomain):
        PlanarDomain.from_rings(rings)


# ── Sweeps ───────────────────────────────────────────────────────────
def test_l_shape_fails_along_the_diagonal(l_shape):
    witness = direction_convexity(l_shape, _direction((1, 1)))
    assert witness is not None
    assert witness.exact_offset == Fraction(5, 2)
    assert witness.offset == pytest.approx(2.5 / math.sqrt(2))
    assert len(witness.chords) == 2
    xs = sorted((chord.start[0], chord.end[0]) for chord in witness.chords)
    assert [sorted(pair) for pair in xs] == [[0.5, 1.0], [1.5, 2.0]]
    assert replay_witness(l_shape, witness) == 2


@pytest.mark.parametrize("v", [(1, 0), (0, 1), (1, -1)])
def test_l_shape_is_convex_along(l_shape, v):
    assert direction_convexity(l_shape, _direction(v)) is None


def test_antipodal_directions_agree(l_shape):
    assert direction_convexity(l_shape, _direction((-1, -1))) is not None


def test_holed_square_fails_along_both_axes(holed_square):
    for v in ((1, 0), (0, 1)):
        witness = direction_convexity(holed_square, _direction(v))
        assert witness is not None
        assert replay_witness(holed_square, witness) == 2


def test_irrational_direction_sweep(u_shape):
    N = characteristic_set(Polynomial(2, {(2, 0): 1, (0, 2): -2})).representatives()[0]
    witness = direction_convexity(u_shape, N)
    assert witness is not None
    assert witness.exact_offset is None
    assert all(chord.exact_start is None for chord in witness.chords)


def test_count_chords_on_the_u_shape(u_shape):
    # lines y = const above the notch bottom cut both arms
    assert count_chords(u_shape, _direction((0, 1)), (Fraction(3, 2), Fraction(2))) == 2
    assert count_chords(u_shape, _direction((0, 1)), (Fraction(3, 2), Fraction(1, 4))) == 1


def test_sweep_matches_a_line_scan_on_random_polygons(notched_polygon):
    rng = np.random.default_rng(41)
    for _ in range(200):
        domain = notched_polygon(rng)
        for v in _random_directions(rng, 8):
            witness = direction_convexity(domain, _direction(v))
            assert (witness is None) == _convex_by_scanning(domain, v), (domain, v)
            if witness is not None:
                assert replay_witness(domain, witness) == len(witness.chords) >= 2


def test_sweep_commutes_with_rational_rotations(notched_polygon):
    rng = np.random.default_rng(47)
    for triple in PYTHAGOREAN_TRIPLES:
        a, b, _ = triple
        for _ in range(30):
            domain = notched_polygon(rng)
            rotated = PlanarDomain.polygon([_rotate(v, triple) for v in domain.vertices])
            for v in _random_directions(rng, 4):
                turned = (a * v[0] - b * v[1], b * v[0] + a * v[1])
                witness = direction_convexity(domain, _direction(v))
                rotated_witness = direction_convexity(rotated, _direction(turned))
                assert (witness is None) == (rotated_witness is None), (domain, v, triple)
                if rotated_witness is not None:
                    assert replay_witness(rotated, rotated_witness) >= 2


def test_verdict_is_taken_per_component():
    two_squares = PlanarDomain.from_rings(
        [
            ([(0, 0), (1, 0), (1, 1), (0, 1)], []),
            ([(2, 0), (3, 0), (3, 1), (2, 1)], []),
        ]
    )
    verdict = convexity_verdict(two_squares, [_direction((0, 1)), _direction((1, 0))])
    assert verdict.status is VerdictStatus.PASS
    assert len(verdict.checked_directions) == 2


def test_verdict_dedupes_antipodes(wave, l_shape):
    verdict = convexity_verdict(l_shape, characteristic_set(wave), ConvexityMode.SINGULAR_SUPPORTS)
    assert verdict.status is VerdictStatus.FAIL
    assert verdict.mode is ConvexityMode.SINGULAR_SUPPORTS
    assert len(verdict.checked_directions) == 2
    assert len(verdict.witnesses) == 1


def test_empty_direction_list_passes(l_shape):
    assert convexity_verdict(l_shape, []).status is VerdictStatus.PASS


# ── Exterior cones ───────────────────────────────────────────────────
def test_avoidance_at_the_reflex_corner(l_shape):
    assert avoidance_set(l_shape, (Fraction(1), Fraction(1))) == [Sector2.between((1, 0), (0, 1))]


def test_avoidance_at_a_convex_corner(l_shape):
    [arc] = avoidance_set(l_shape, (Fraction(0), Fraction(0)))
    assert arc.start == (0, 1)
    assert arc.end == (1, 0)
    assert not arc.opening_below_pi


def test_diagnostic_passes_at_a_convex_corner(l_shape, x1x2):
    result = exterior_cone_diagnostic(l_shape, (0, 0), characteristic_set(x1x2))
    assert result.passed
    assert result.margin >= 0
    for N in characteristic_set(x1x2):
        assert not result.gamma.contains_direction(N)


def test_diagnostic_fails_at_the_reflex_corner(l_shape, wave):
    result = exterior_cone_diagnostic(l_shape, (1, 1), characteristic_set(wave))
    assert not result.passed
    assert result.gamma is None
    assert result.tried


def test_diagnostic_at_a_square_corner_with_light_lines(wave):
    square = PlanarDomain.polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    zeros = characteristic_set(wave)
    result = exterior_cone_diagnostic(square, (1, 1), zeros)
    assert result.passed
    assert 0 <= result.margin <= math.pi
    assert not any(result.gamma.contains_direction(N) for N in zeros)
    assert result.describe()["status"] == "pass"


def test_diagnostic_at_the_reflex_corner_after_a_passing_sweep(l_shape, x1x2):
    result = exterior_cone_diagnostic(l_shape, (1, 1), characteristic_set(x1x2))
    assert result.passed
    assert result.gamma_dual == Sector2.between((1, 0), (0, 1))
    assert result.margin == pytest.approx(0.0)


def test_passing_sweep_gives_exterior_cones_along_the_boundary(notched_polygon):
    rng = np.random.default_rng(59)
    passing = 0
    for _ in range(100):
        domain = notched_polygon(rng)
        zeros = list(characteristic_set(_random_real_symbol(rng)))
        swept = convexity_verdict(domain, zeros).status is VerdictStatus.PASS
        diagnosed = all(exterior_cone_diagnostic(domain, p, zeros).passed for p in _edge_samples(domain))
        if swept:
            passing += 1
            assert diagnosed, (domain, zeros)
    assert passing > 0


def test_diagnostic_needs_a_boundary_point(l_shape, wave):
    with pytest.raises(NotOnBoundary):
        exterior_cone_diagnostic(l_shape, (Fraction(1, 2), Fraction(1, 2)), characteristic_set(wave))


# ── Distances ────────────────────────────────────────────────────────
def test_boundary_distance_in_the_u_shape(u_shape):
    assert boundary_distance_squared(u_shape, (Fraction(1, 2), Fraction(1, 2))) == Fraction(1, 4)
    assert boundary_distance(u_shape, (Fraction(3, 2), Fraction(1, 2))) == pytest.approx(0.1)


@pytest.mark.parametrize("x", [(5, 5), (Fraction(3, 2), 2), (0, 1)])
def test_boundary_distance_outside(u_shape, x):
    with pytest.raises(OutsideDomain):
        boundary_distance_squared(u_shape, x)


# ── Minimum principle ────────────────────────────────────────────────
def test_min_principle_fails_under_the_notch(u_shape):
    segment = ((Fraction(1, 2), Fraction(1, 2)), (Fraction(5, 2), Fraction(1, 2)))
    result = min_principle_check(u_shape, segment, LineSpec((0, 1), Fraction(1, 2)))
    assert not result.holds
    assert result.exact_m_interior_squared == Fraction(1, 100)
    assert result.m_interior == pytest.approx(0.1)
    assert result.m_boundary == pytest.approx(0.5)


def test_min_principle_holds_in_a_square():
    square = PlanarDomain.polygon([(0, 0), (4, 0), (4, 4), (0, 4)])
    result = min_principle_check(square, ((1, 2), (3, 2)))
    assert result.holds
    assert result.m_interior == pytest.approx(1.0)


def test_min_principle_holds_on_random_convex_polygons():
    rng = np.random.default_rng(61)
    checked = 0
    while checked < 100:
        cloud = rng.integers(-6, 7, size=(8, 2))
        hull = ConvexHull(cloud)
        vertices = [tuple(int(c) for c in cloud[i]) for i in hull.vertices]
        domain = PlanarDomain.polygon(vertices)

        def interior_point() -> Point:
            weights = [int(w) for w in rng.integers(1, 6, size=len(vertices))]
            total = sum(weights)
            return tuple(
                sum(Fraction(w * v[k], total) for w, v in zip(weights, vertices)) for k in range(2)
            )

        p, q = interior_point(), interior_point()
        if p == q:
            continue
        assert min_principle_check(domain, (p, q)).holds, (vertices, p, q)
        checked += 1


def test_min_principle_tolerance(u_shape):
    segment = ((Fraction(1, 2), Fraction(1, 2)), (Fraction(5, 2), Fraction(1, 2)))
    assert min_principle_check(u_shape, segment, tol=1.0).holds


def test_segment_through_the_notch(u_shape):
    with pytest.raises(SegmentNotInDomain):
        min_principle_check(u_shape, ((Fraction(1, 2), 2), (Fraction(5, 2), 2)))


def test_segment_off_the_line(u_shape):
    segment = ((Fraction(1, 2), Fraction(1, 2)), (Fraction(5, 2), Fraction(1, 2)))
    with pytest.raises(SegmentNotInDomain):
        min_principle_check(u_shape, segment, LineSpec((0, 1), 1))


def test_min_principle_on_the_lorentz_complement():
    root3 = math.sqrt(3)
    result = min_principle_check(
        LorentzComplement(3),
        ((-root3, 0.0, -1.0), (root3, 0.0, -1.0)),
        LineSpec((0, 0, 1), -1),
    )
    assert not result.holds
    assert result.m_interior == pytest.approx(1.0, abs=1e-9)
    assert result.m_boundary == pytest.approx((root3 + 1) / math.sqrt(2))
    assert result.argmin[0] == pytest.approx(0.0, abs=1e-5)


def test_lorentz_segment_must_avoid_the_cone():
    with pytest.raises(SegmentNotInDomain):
        min_principle_check(LorentzComplement(3), ((-1.0, 0.0, 2.0), (1.0, 0.0, 2.0)))
    with pytest.raises(SegmentNotInDomain):
        min_principle_check(LorentzComplement(3), ((1.0, 0.0), (2.0, 0.0)))
