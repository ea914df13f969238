"""
Characteristic service — real zeros of the principal part on the circle.

A planar direction (1, s) is characteristic iff s is a common real root of
the real and imaginary parts of p(s) = P_m(1, s), i.e. a root of their gcd
over ℚ.  The squarefree part of that gcd is factored over ℚ: linear
factors give rational slopes, every other irreducible factor is isolated
with a Sturm sequence and becomes the defining polynomial of its roots.
The vertical direction is tested separately through the x2^m coefficient.
"""

from __future__ import annotations

import itertools
import logging
import math
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np
import sympy

from app.core.errors import UnsupportedDimension
from app.models.direction import AlgebraicDirection, CharacteristicSet
from app.models.polynomial import Polynomial
from app.services.polynomial_service import evaluate_terms, float_terms, hom_decompose

logger = logging.getLogger(__name__)

_S = sympy.Symbol("s")
_ELLIPTIC_SAMPLES = 4096


# ── Sturm isolation ──────────────────────────────────────────────────
def _horner(coefficients: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coefficients:
        acc = acc * x + c
    return acc


def _as_fractions(poly: sympy.Poly) -> list[Fraction]:
    return [Fraction(str(c)) for c in poly.all_coeffs()]


def _sign_variations(sequence: Sequence[Sequence[Fraction]], x: Fraction) -> int:
    signs = [v > 0 for v in (_horner(q, x) for q in sequence) if v != 0]
    return sum(1 for a, b in itertools.pairwise(signs) if a != b)


def isolate_real_roots(coefficients: Sequence[Fraction | int]) -> list[tuple[Fraction, Fraction]]:
    """
    Isolating intervals for the real roots of a squarefree polynomial.

    ``coefficients`` are highest degree first.  Each returned closed
    interval [a, b] holds exactly one root; a == b marks an exact rational
    root.  Intervals are sorted and pairwise disjoint.
    """
    coeffs = [Fraction(c) for c in coefficients]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if len(coeffs) < 2:
        return []
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], _S, domain="QQ")
    sequence = [_as_fractions(q) for q in sympy.sturm(poly)]
    bound = 1 + max(abs(c / coeffs[0]) for c in coeffs[1:])

    def count(a: Fraction, b: Fraction) -> int:
        # roots in (a, b]
        return _sign_variations(sequence, a) - _sign_variations(sequence, b)

    found: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        if n > 1:
            mid = (a + b) / 2
            stack.extend([(a, mid), (mid, b)])
            continue
        if _horner(coeffs, b) == 0:
            found.append((b, b))
            continue
        while _horner(coeffs, a) == 0:
            mid = (a + b) / 2
            if _horner(coeffs, mid) == 0:
                a = b = mid
                break
            if count(a, mid) == 1:
                b = mid
            else:
                a = mid
        found.append((a, b))

    def refine(a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
        if a == b:
            return a, b
        mid = (a + b) / 2
        if _horner(coeffs, mid) == 0:
            return mid, mid
        return (a, mid) if count(a, mid) == 1 else (mid, b)

    found.sort()
    # neighbours may meet at a shared non-root endpoint
    for i in range(len(found) - 1):
        while found[i][1] >= found[i + 1][0]:
            found[i] = refine(*found[i])
            found[i + 1] = refine(*found[i + 1])
    return found


# ── Characteristic set ───────────────────────────────────────────────
def _slope_parts(principal: Polynomial, degree: int) -> tuple[list[Fraction], list[Fraction]]:
    """Real and imaginary coefficient lists (highest first) of p(s) = P_m(1, s)."""
    re = [Fraction(0)] * (degree + 1)
    im = [Fraction(0)] * (degree + 1)
    for (_, b), coeff in principal.items():
        re[degree - b] += coeff.re
        im[degree - b] += coeff.im
    return re, im


def _to_poly(coefficients: Sequence[Fraction]) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coefficients], _S, domain="QQ")


def characteristic_set(P: Polynomial) -> CharacteristicSet:
    """Unit directions N with P_m(N) = 0, exactly represented, antipode-closed."""
    if P.dimension != 2:
        raise UnsupportedDimension(
            f"characteristic sets are computed exactly for d = 2 only (got d = {P.dimension})"
        )
    decomposition = hom_decompose(P)
    m = decomposition.degree
    principal = decomposition.principal
    if m == 0:
        return CharacteristicSet(directions=(), source_degree=0)

    re, im = _slope_parts(principal, m)
    parts = [_to_poly(part) for part in (re, im) if any(part)]
    common = reduce(sympy.gcd, parts)

    directions: list[AlgebraicDirection] = []
    if common.degree() >= 1:
        squarefree = sympy.sqf_part(common)
        _, factors = sympy.factor_list(squarefree)
        for factor, _ in factors:
            factor = sympy.Poly(factor, _S, domain="QQ")
            coeffs = _as_fractions(factor)
            if factor.degree() == 1:
                root = -coeffs[1] / coeffs[0]
                for sign in (1, -1):
                    directions.append(AlgebraicDirection.slope_root(coeffs, root, root, sign))
                continue
            for lower, upper in isolate_real_roots(coeffs):
                for sign in (1, -1):
                    directions.append(AlgebraicDirection.slope_root(coeffs, lower, upper, sign))

    if principal.coefficient((0, m)).is_zero:
        directions.extend([AlgebraicDirection.axis(1), AlgebraicDirection.axis(-1)])

    directions.sort(key=lambda d: d.angle)
    logger.debug("P_m = %s has %d characteristic directions", principal, len(directions))
    return CharacteristicSet(directions=tuple(directions), source_degree=m)


def orthogonal_companion(N: AlgebraicDirection) -> AlgebraicDirection:
    """The direction N rotated by +90°, so ⟨x, N⟩ = 0 exactly."""
    return N.rotated()


def rational_null_directions(P: Polynomial, bound: int = 1) -> list[tuple[int, ...]]:
    """Primitive integer vectors with entries in [−bound, bound] on which P_m vanishes."""
    principal = hom_decompose(P).principal
    if principal.degree == 0:
        return []
    found = []
    for w in itertools.product(range(-bound, bound + 1), repeat=P.dimension):
        if not any(w) or reduce(math.gcd, (abs(c) for c in w)) != 1:
            continue
        if principal.evaluate(w).is_zero:
            found.append(tuple(w))
    return found


def is_elliptic(P: Polynomial) -> bool:
    """
    Whether P_m has no real zero on the unit sphere.

    Exact for d ≤ 2.  For d > 2 a rational null vector refutes ellipticity;
    otherwise P_m is sampled on the sphere and a real principal part must
    be sign-definite, a complex one bounded away from zero.
    """
    decomposition = hom_decompose(P)
    if decomposition.degree == 0 or P.dimension == 1:
        return True
    if P.dimension == 2:
        return characteristic_set(P).is_empty

    if rational_null_directions(P):
        return False
    principal = decomposition.principal
    rng = np.random.default_rng(0)
    points = rng.normal(size=(_ELLIPTIC_SAMPLES, P.dimension))
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    values = evaluate_terms(float_terms(principal), points)
    if all(c.is_real for _, c in principal.items()):
        real = values.real
        return bool(np.all(real > 0) or np.all(real < 0))
    magnitudes = np.abs(values)
    return bool(magnitudes.min() > 1e-9 * magnitudes.max())
