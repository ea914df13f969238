from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from app.core.errors import (
    DegenerateCone,
    ImproperCone,
    InvalidInput,
    PointNotInSet,
    UnsupportedDimension,
    UnsupportedZeroSet,
)
from app.models.cones import LorentzCone, PolyhedralCone, Polyhedron, Sector2, ShiftedCone, dot
from app.models.direction import AlgebraicDirection
from app.models.polynomial import Polynomial
from app.services.characteristic_service import characteristic_set
from app.services.cone_service import (
    LORENTZ_WAVE_TAG,
    cone_avoids_zeroset,
    distance_to_lorentz,
    dual_cone,
    is_degenerate,
    is_proper,
    hyperplane_predicates,
    recession_direction,
    wave_zero_set,
)


def _random_sector(rng: np.random.Generator) -> Sector2:
    while True:
        u = tuple(int(v) for v in rng.integers(-5, 6, size=2))
        v = tuple(int(x) for x in rng.integers(-5, 6, size=2))
        if any(u) and any(v) and u[0] * v[1] - u[1] * v[0] > 0:
            return Sector2.between(u, v)


def _random_vector(rng: np.random.Generator) -> tuple[int, int]:
    while True:
        w = tuple(int(v) for v in rng.integers(-4, 5, size=2))
        if any(w):
            return w


# ── Sector construction ──────────────────────────────────────────────
def test_sector_shapes():
    assert Sector2.between((1, 0), (2, 0)) == Sector2.ray((1, 0))
    assert Sector2.between((1, 0), (-3, 0)) == Sector2.half_plane((1, 0))
    assert Sector2.between((0, 1), (1, 0)).opening_below_pi is False
    with pytest.raises(InvalidInput):
        Sector2.ray((0, 0))


def test_sector_membership_respects_open_boundaries():
    closed = Sector2.between((1, 0), (0, 1))
    half_open = Sector2.between((1, 0), (0, 1), start_open=True)
    assert closed.contains_direction((1, 0))
    assert not half_open.contains_direction((1, 0))
    assert half_open.contains_direction((0, 1))
    assert closed.contains_direction((3, 1))
    assert not closed.contains_direction((-1, 1))
    assert closed.contains_vector((0, 0))
    assert not half_open.contains_vector((0, 0))


def test_sector_inclusion():
    quadrant = Sector2.between((1, 0), (0, 1))
    assert quadrant.contains_sector(Sector2.between((2, 1), (1, 2)))
    assert quadrant.contains_sector(Sector2.ray((1, 1)))
    assert not quadrant.contains_sector(Sector2.between((1, -1), (1, 1)))
    assert quadrant.contains_sector(quadrant.interior())
    assert not quadrant.interior().contains_sector(quadrant)


# ── Duality ──────────────────────────────────────────────────────────
def test_dual_of_a_sector():
    assert dual_cone(Sector2.between((1, 0), (1, 1))) == Sector2.between((1, -1), (0, 1))


def test_dual_of_ray_and_half_plane():
    ray = Sector2.ray((1, 2))
    assert dual_cone(ray) == Sector2.half_plane((2, -1))
    assert dual_cone(dual_cone(ray)) == ray


def test_dual_of_the_extremes():
    assert dual_cone(Sector2.zero()) == Sector2.full()
    assert dual_cone(Sector2.between((0, 1), (1, 0))) == Sector2.zero()
    with pytest.raises(ImproperCone):
        dual_cone(Sector2.full())


def test_dual_involution_and_pairing_on_random_sectors():
    rng = np.random.default_rng(31)
    for _ in range(1000):
        sector = _random_sector(rng)
        dual = dual_cone(sector)
        assert dual_cone(dual) == sector
        assert is_proper(sector) and is_proper(dual)
        for _ in range(5):
            g, h = _random_vector(rng), _random_vector(rng)
            if sector.contains_vector(g) and dual.contains_vector(h):
                assert dot(g, h) >= 0


def test_polyhedral_dual_of_the_orthant():
    orthant = PolyhedralCone(2, ((1, 0), (0, 1)))
    assert set(dual_cone(orthant).generators) == {(0, 1), (1, 0)}
    octant = PolyhedralCone(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert set(dual_cone(octant).generators) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_polyhedral_dual_of_a_skew_cone():
    cone = PolyhedralCone(2, ((1, 0), (1, 1)))
    assert set(dual_cone(cone).generators) == {(0, 1), (1, -1)}


def test_polyhedral_half_plane_is_not_proper():
    half_plane = PolyhedralCone(2, ((1, 0), (-1, 0), (0, 1)))
    assert set(dual_cone(half_plane).generators) == {(0, 1)}
    assert not is_proper(half_plane)
    assert is_proper(PolyhedralCone(2, ((1, 0), (0, 1))))


def test_polyhedral_dimension_limit():
    e = [tuple(int(i == j) for j in range(5)) for i in range(5)]
    with pytest.raises(UnsupportedDimension):
        dual_cone(PolyhedralCone(5, tuple(e)))


def test_lorentz_is_self_dual_and_proper():
    cone = LorentzCone(3)
    assert dual_cone(cone) == cone
    assert is_proper(cone)
    assert not is_degenerate(cone)


def _separating_member(y: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """A point x of the Lorentz cone with ⟨x, y⟩ < 0, for y outside it."""
    head2, last = y[0] ** 2 + y[1] ** 2, y[2]
    if head2 == 0:
        return (Fraction(0), Fraction(0), Fraction(1))
    if last <= 0:
        return (-y[0], -y[1], abs(y[0]) + abs(y[1]))
    bound, k = head2 / last, 1
    while (bound * k / (k + 1)) ** 2 < head2:
        k *= 2
    return (-y[0], -y[1], bound * k / (k + 1))


def test_lorentz_self_duality_on_samples():
    rng = np.random.default_rng(37)
    cone = LorentzCone(3)
    dual = dual_cone(cone)
    members = []
    for _ in range(64):
        a, b = (int(v) for v in rng.integers(-5, 6, size=2))
        members.append((Fraction(a), Fraction(b), Fraction(abs(a) + abs(b) + int(rng.integers(0, 3)))))
    inside = 0
    for _ in range(1000):
        y = tuple(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 4))) for _ in range(3))
        if dual.contains(y):
            inside += 1
            assert cone.contains(y)
            assert all(dot(x, y) >= 0 for x in members)
        else:
            assert not cone.contains(y)
            x = _separating_member(y)
            assert cone.contains(x)
            assert dot(x, y) < 0
    assert 0 < inside < 1000


def test_degenerate_cones():
    assert is_degenerate(Sector2.zero())
    assert is_degenerate(PolyhedralCone(2, ()))
    assert not is_degenerate(Sector2.ray((1, 0)))


# ── Recession ────────────────────────────────────────────────────────
def test_recession_of_a_half_strip():
    strip = Polyhedron.box((0, 0), (1, None))
    assert recession_direction(strip, (0, 0)) == (0, 1)
    assert recession_direction(Polyhedron.box((0, 0), (1, 1)), (0, 0)) is None


def test_recession_point_must_belong():
    with pytest.raises(PointNotInSet):
        recession_direction(Polyhedron.box((0, 0), (1, 1)), (2, 0))


def test_recession_of_a_shifted_cone():
    shifted = ShiftedCone((1, 1), PolyhedralCone(2, ((1, 2),)))
    assert recession_direction(shifted, (2, 3)) == (1, 2)
    with pytest.raises(PointNotInSet):
        recession_direction(shifted, (0, 0))


def test_recession_ray_stays_inside():
    polyhedron = Polyhedron(2, ((-1, 0), (0, -1), (1, -1)), (0, 0, 2))
    omega = recession_direction(polyhedron, (1, 0))
    assert omega is not None
    for t in (1, 10, 1000):
        assert polyhedron.contains(tuple(Fraction(x) + t * w for x, w in zip((1, 0), omega)))


# ── Hyperplanes against cones ────────────────────────────────────────
def test_predicates_on_the_quadrant():
    quadrant = Sector2.between((1, 0), (0, 1))
    inside = hyperplane_predicates(quadrant, (1, 1), 2, (1, 1))
    assert inside.agree and inside.i
    assert inside.x_on_hyperplane
    boundary = hyperplane_predicates(quadrant, (1, 0), 0, (1, 1))
    assert boundary.agree and not boundary.i
    assert not boundary.x_on_hyperplane


def test_predicates_agree_on_random_sectors_and_rays():
    rng = np.random.default_rng(32)
    for k in range(1000):
        gamma_dual = Sector2.ray(_random_vector(rng)) if k % 10 == 0 else _random_sector(rng)
        normal = _random_vector(rng)
        c = Fraction(int(rng.integers(-3, 4)))
        x = tuple(Fraction(int(v)) for v in rng.integers(-3, 4, size=2))
        assert hyperplane_predicates(gamma_dual, normal, c, x).agree


def test_predicates_accept_algebraic_normals():
    quadrant = Sector2.between((1, 0), (0, 1))
    N = characteristic_set(Polynomial(2, {(2, 0): 1, (0, 2): -2})).representatives()[0]
    result = hyperplane_predicates(quadrant, N, 0, (0, 0))
    assert result.agree
    assert result.x_on_hyperplane


def test_predicates_on_polyhedral_cones():
    orthant = PolyhedralCone(2, ((1, 0), (0, 1)))
    assert hyperplane_predicates(orthant, (1, 1), 0, (0, 0)).i
    assert not hyperplane_predicates(orthant, (1, 0), 0, (0, 0)).i
    octant = PolyhedralCone(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert hyperplane_predicates(octant, (1, 2, 3), 1, (0, 0, 0)).iv
    assert not hyperplane_predicates(octant, (1, -1, 0), 1, (0, 0, 0)).iv


@pytest.mark.parametrize(
    "cone",
    [
        Sector2.zero(),
        Sector2.half_plane((1, 0)),
        Sector2.between((1, 0), (0, 1), start_open=True),
        PolyhedralCone(2, ((1, 0), (-1, 0))),
    ],
)
def test_predicates_reject_invalid_cones(cone):
    with pytest.raises(DegenerateCone):
        hyperplane_predicates(cone, (1, 1), 0, (0, 0))


# ── Zero-set avoidance ───────────────────────────────────────────────
def test_open_quadrant_meets_the_light_lines(wave):
    result = cone_avoids_zeroset(Sector2.between((1, 0), (0, 1)).interior(), wave)
    assert not result.avoids
    assert result.witness.rational_vector() == (1, 1)


def test_narrow_sector_avoids_the_light_lines(wave):
    narrow = Sector2.between((1, 0), (2, 1)).interior()
    assert cone_avoids_zeroset(narrow, wave).avoids
    assert cone_avoids_zeroset(narrow, characteristic_set(wave)).avoids


def test_open_boundary_direction_is_not_a_hit(x1x2):
    quadrant = Sector2.between((1, 0), (0, 1)).interior()
    assert cone_avoids_zeroset(quadrant, x1x2).avoids
    closed = Sector2.between((1, 0), (0, 1))
    assert not cone_avoids_zeroset(closed, [AlgebraicDirection.from_vector((0, 1))]).avoids


def test_lorentz_cone_and_the_wave_symbol(wave3):
    result = cone_avoids_zeroset(LorentzCone(3), wave3)
    assert result.avoids
    assert result.justification == LORENTZ_WAVE_TAG


def test_lorentz_cone_needs_a_closed_form(wave):
    with pytest.raises(UnsupportedZeroSet):
        cone_avoids_zeroset(LorentzCone(3), Polynomial(3, {(1, 1, 0): 1}))
    with pytest.raises(UnsupportedZeroSet):
        cone_avoids_zeroset(LorentzCone(3), wave)


def test_wave_zero_set_recognition(wave3):
    assert wave_zero_set(wave3).coefficients == (1, -1, -1)
    light_cone = Polynomial(3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): -1})
    assert wave_zero_set(light_cone) is not None
    steep = Polynomial(3, {(2, 0, 0): 2, (0, 0, 2): -1})
    assert wave_zero_set(steep) is None
    assert wave_zero_set(Polynomial(3, {(1, 1, 0): 1})) is None


# ── Lorentz distance ─────────────────────────────────────────────────
@pytest.mark.parametrize(
    ("x", "expected"),
    [((0, 0, -1), 1.0), ((1, 0, 0), 1 / math.sqrt(2)), ((0, 0, 5), 0.0), ((3, 4, 5), 0.0), ((3, 4, -5), math.sqrt(50))],
)
def test_distance_to_lorentz(x, expected):
    assert distance_to_lorentz(x) == pytest.approx(expected)


def _distance_by_sampling(x: np.ndarray) -> float:
    if x[2] >= math.hypot(x[0], x[1]):
        return 0.0

    def ray_distance(theta: float) -> float:
        u = np.array([math.cos(theta), math.sin(theta), 1.0])
        rho = max(0.0, float(x @ u) / 2)
        return float(np.linalg.norm(x - rho * u))

    thetas = np.linspace(0.0, 2 * math.pi, 4096, endpoint=False)
    values = [ray_distance(theta) for theta in thetas]
    k = int(np.argmin(values))
    step = thetas[1] - thetas[0]
    refined = minimize_scalar(ray_distance, bounds=(thetas[k] - step, thetas[k] + step), method="bounded", options={"xatol": 1e-12})
    return min(values[k], float(refined.fun))


def test_distance_to_lorentz_matches_boundary_sampling():
    rng = np.random.default_rng(39)
    for x in rng.uniform(-5, 5, size=(100, 3)):
        assert distance_to_lorentz(tuple(x)) == pytest.approx(_distance_by_sampling(x), abs=1e-6)
