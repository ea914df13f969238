from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from app.core.errors import UnsupportedDimension, ZeroPolynomial
from app.models.direction import AlgebraicDirection
from app.models.enums import DirectionKind
from app.models.polynomial import ComplexRational, Polynomial
from app.services.characteristic_service import (
    characteristic_set,
    is_elliptic,
    isolate_real_roots,
    orthogonal_companion,
    rational_null_directions,
)
from app.services.polynomial_service import hom_decompose


def _reps(P: Polynomial) -> set[tuple[int, int]]:
    return {N.rational_vector() for N in characteristic_set(P).representatives()}


# ── Root isolation ───────────────────────────────────────────────────
def test_isolates_two_irrational_roots():
    intervals = isolate_real_roots([1, 0, -2])
    assert len(intervals) == 2
    (a1, b1), (a2, b2) = intervals
    assert b1 < a2
    for a, b in intervals:
        assert (a * a - 2) * (b * b - 2) <= 0


def test_rational_roots_are_inside_their_intervals():
    intervals = isolate_real_roots([1, -3, 2])
    assert [a <= root <= b for (a, b), root in zip(intervals, (1, 2))] == [True, True]


def test_no_real_roots():
    assert isolate_real_roots([1, 0, 1]) == []
    assert isolate_real_roots([5]) == []


def test_symmetric_roots_get_separated_intervals():
    # roots ±1/3 and ±5/2: bisection at 0 makes neighbours meet
    intervals = isolate_real_roots([36, 0, -229, 0, 25])
    assert len(intervals) == 4
    for (_, b1), (a2, _) in zip(intervals, intervals[1:]):
        assert b1 < a2


def test_isolation_of_random_squarefree_polynomials():
    rng = np.random.default_rng(13)
    for _ in range(200):
        roots = sorted({Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in range(int(rng.integers(1, 6)))})
        coefficients = [Fraction(1)]
        for root in roots:
            coefficients = [c - root * prev for c, prev in zip(coefficients + [Fraction(0)], [Fraction(0)] + coefficients)]
        with_surd = bool(rng.integers(0, 2))
        if with_surd:
            # times s^2 - 3, whose roots are irrational
            coefficients = [a - 3 * b for a, b in zip(coefficients + [0, 0], [0, 0] + coefficients)]
        intervals = isolate_real_roots(coefficients)
        assert len(intervals) == len(roots) + (2 if with_surd else 0)
        for (_, b1), (a2, _) in zip(intervals, intervals[1:]):
            assert b1 < a2
        for root in roots:
            assert sum(1 for a, b in intervals if a <= root <= b) == 1


def test_cube_root_of_two():
    [(a, b)] = isolate_real_roots([1, 0, 0, -2])
    assert a**3 <= 2 <= b**3


# ── Characteristic sets ──────────────────────────────────────────────
def test_wave_has_the_two_light_lines(wave):
    assert _reps(wave) == {(1, 1), (1, -1)}
    assert len(characteristic_set(wave)) == 4


def test_x1x2_has_the_axes(x1x2):
    assert _reps(x1x2) == {(1, 0), (0, 1)}


def test_heat_principal_part_vanishes_on_e1(heat):
    assert _reps(heat) == {(1, 0)}


def test_elliptic_symbol_has_no_characteristics(elliptic):
    assert characteristic_set(elliptic).is_empty
    assert is_elliptic(elliptic)


def test_irrational_characteristic_slope():
    P = Polynomial(2, {(2, 0): 1, (0, 2): -2})
    directions = characteristic_set(P)
    assert len(directions) == 4
    for N in directions:
        assert not N.is_rational
        assert N.sturm_count() == 1
        assert N.slope_float**2 == pytest.approx(0.5)


def test_complex_principal_part_needs_both_parts_to_vanish():
    square = Polynomial(2, {(2, 0): 1, (0, 2): -1, (1, 1): ComplexRational(0, 2)})
    assert characteristic_set(square).is_empty
    vertical_only = Polynomial(2, {(2, 0): 1, (1, 1): ComplexRational(0, 1)})
    assert _reps(vertical_only) == {(0, 1)}


def test_constant_symbol_has_no_characteristics():
    assert characteristic_set(Polynomial.constant(2, 3)).is_empty


def test_characteristic_set_requires_the_plane(wave3):
    with pytest.raises(UnsupportedDimension):
        characteristic_set(wave3)


def test_zero_symbol_is_rejected():
    with pytest.raises(ZeroPolynomial):
        characteristic_set(Polynomial.zero(2))


def test_products_of_linear_forms_vanish_on_their_kernels():
    rng = np.random.default_rng(11)
    for _ in range(25):
        P = Polynomial.constant(2, 1)
        kernels = []
        for _ in range(int(rng.integers(1, 4))):
            a, b = (int(v) for v in rng.integers(-3, 4, size=2))
            if a == 0 and b == 0:
                a = 1
            P = P * Polynomial(2, {(1, 0): a, (0, 1): b})
            kernels.append((-b, a))
        directions = characteristic_set(P)
        principal = hom_decompose(P).principal
        for kernel in kernels:
            assert directions.contains(AlgebraicDirection.from_vector(kernel))
            assert directions.contains(AlgebraicDirection.from_vector(kernel).negated())
        for N in directions:
            assert principal(N.rational_vector()).is_zero


def test_characteristic_set_is_closed_under_antipodes(wave, x1x2, heat):
    for P in (wave, x1x2, heat, Polynomial(2, {(2, 0): 1, (0, 2): -3})):
        directions = characteristic_set(P)
        for N in directions:
            assert directions.contains(N.negated())


def _random_complex_symbol(rng: np.random.Generator) -> Polynomial:
    terms = {}
    for _ in range(int(rng.integers(1, 7))):
        alpha = tuple(int(a) for a in rng.integers(0, 5, size=2))
        if sum(alpha) <= 4:
            terms[alpha] = ComplexRational(Fraction(int(rng.integers(-5, 6))), Fraction(int(rng.integers(-1, 2))))
    return Polynomial(2, terms)


def test_characteristic_set_ignores_a_constant_factor():
    rng = np.random.default_rng(14)
    checked = 0
    while checked < 60:
        P = _random_complex_symbol(rng)
        factor = ComplexRational(Fraction(int(rng.integers(-5, 6)), 3), Fraction(int(rng.integers(-5, 6)), 2))
        if P.is_zero or factor.is_zero:
            continue
        original, scaled = characteristic_set(P), characteristic_set(P.scale(factor))
        assert len(original) == len(scaled)
        assert all(scaled.contains(N) for N in original)
        checked += 1


def test_characteristic_set_size_and_certification():
    rng = np.random.default_rng(15)
    samples = 0
    while samples < 1000:
        P = _random_complex_symbol(rng)
        if P.is_zero or P.degree < 1:
            continue
        directions = characteristic_set(P)
        m = directions.source_degree
        assert len(directions) <= 2 * m
        principal = hom_decompose(P).principal
        intervals = [(N.lower, N.upper) for N in directions.representatives() if N.kind is not DirectionKind.AXIS]
        for N in directions:
            if N.is_rational:
                assert principal(N.rational_vector()).is_zero
            else:
                assert N.sturm_count() == 1
                finer = N.refined()
                assert finer.upper - finer.lower < N.upper - N.lower
                assert finer.sturm_count() == 1
        for _ in range(50):
            slope = Fraction(int(rng.integers(-400, 401)), int(rng.integers(1, 40)))
            if any(a <= slope <= b for a, b in intervals):
                continue
            assert not principal((1, slope)).is_zero
            samples += 1


# ── Orthogonal companions ────────────────────────────────────────────
@pytest.mark.parametrize(("v", "expected"), [((1, 0), (0, 1)), ((1, 1), (-1, 1)), ((0, 1), (-1, 0)), ((2, -3), (3, 2))])
def test_companion_of_a_rational_direction(v, expected):
    companion = orthogonal_companion(AlgebraicDirection.from_vector(v))
    assert companion.rational_vector() == expected


def test_companions_of_random_principal_roots_are_orthogonal():
    rng = np.random.default_rng(12)
    checked = 0
    while checked < 100:
        degree = int(rng.integers(2, 5))
        terms = {(k, degree - k): int(rng.integers(-5, 6)) for k in range(degree + 1)}
        P = Polynomial(2, terms)
        if P.is_zero:
            continue
        for N in characteristic_set(P):
            companion = orthogonal_companion(N)
            assert N.unit[0] * companion.unit[0] + N.unit[1] * companion.unit[1] == pytest.approx(0, abs=1e-12)
            assert orthogonal_companion(companion).same_as(N.negated())
        checked += 1


# ── Higher dimensions ────────────────────────────────────────────────
def test_rational_null_directions_of_the_three_dimensional_wave(wave3):
    found = set(rational_null_directions(wave3))
    assert {(1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1)} <= found
    assert (1, 0, 0) not in found
    assert (1, 1, 1) not in found


def test_ellipticity_in_three_dimensions(wave3):
    assert not is_elliptic(wave3)
    laplacian = Polynomial(3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
    assert is_elliptic(laplacian)


def test_ellipticity_of_a_constant():
    assert is_elliptic(Polynomial.constant(3, Fraction(1, 2)))
