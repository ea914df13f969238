"""
Exact unit directions in the plane.

A direction is either the vertical axis ±(0, 1) or ±(1, s)/√(1 + s²)
where s is the unique real root of a squarefree integer polynomial inside
a rational isolating interval.  Comparisons against rational vectors are
decided exactly: the interval is bisected until the sign is forced, and a
rational candidate that is itself a root is caught by direct evaluation.
Refinement always produces a new value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterator, Mapping, Sequence

import sympy

from app.models.enums import DirectionKind
from app.models.polynomial import ComplexRational

_S = sympy.Symbol("s")
Vector2 = tuple[Fraction, Fraction]


def _sign(value: Fraction | int) -> int:
    return (value > 0) - (value < 0)


def _normalize_integer_coefficients(coefficients: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Primitive integer coefficients (highest degree first) with positive leading term."""
    coeffs = [Fraction(c) for c in coefficients]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs:
        raise ValueError("defining polynomial is zero")
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in coeffs), 1)
    ints = [int(c * lcm) for c in coeffs]
    g = reduce(math.gcd, (abs(i) for i in ints))
    ints = [i // g for i in ints]
    if ints[0] < 0:
        ints = [-i for i in ints]
    return tuple(ints)


def _horner(coefficients: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coefficients:
        acc = acc * x + c
    return acc


def _to_sympy(coefficients: Sequence[Fraction | int]) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in coefficients] or [0], _S, domain="QQ")


@dataclass(frozen=True)
class AlgebraicDirection:
    kind: DirectionKind
    sign: int
    defining: tuple[int, ...] = ()
    lower: Fraction = Fraction(0)
    upper: Fraction = Fraction(0)

    # ── Constructors ─────────────────────────────────────────────────
    @classmethod
    def axis(cls, sign: int = 1) -> AlgebraicDirection:
        return cls(DirectionKind.AXIS, 1 if sign > 0 else -1)

    @classmethod
    def slope_root(
        cls,
        defining: Sequence[Fraction | int],
        lower: Fraction | int,
        upper: Fraction | int,
        sign: int = 1,
    ) -> AlgebraicDirection:
        coeffs = _normalize_integer_coefficients(defining)
        lower, upper = Fraction(lower), Fraction(upper)
        if lower > upper:
            raise ValueError("isolating interval is empty")
        if len(coeffs) == 2:
            root = Fraction(-coeffs[1], coeffs[0])
            if not lower <= root <= upper:
                raise ValueError("interval does not contain the root of the linear factor")
            lower = upper = root
        return cls(DirectionKind.SLOPE, 1 if sign > 0 else -1, coeffs, lower, upper)

    @classmethod
    def from_vector(cls, vector: Sequence[Fraction | int]) -> AlgebraicDirection:
        """Exact direction of a non-zero rational 2-vector."""
        if len(vector) != 2:
            raise ValueError("planar directions need two coordinates")
        v1, v2 = Fraction(vector[0]), Fraction(vector[1])
        if v1 == 0 and v2 == 0:
            raise ValueError("the zero vector has no direction")
        if v1 == 0:
            return cls.axis(_sign(v2))
        slope = v2 / v1
        return cls.slope_root((slope.denominator, -slope.numerator), slope, slope, _sign(v1))

    # ── Exact structure ──────────────────────────────────────────────
    @property
    def is_rational(self) -> bool:
        return self.kind is DirectionKind.AXIS or len(self.defining) == 2

    @property
    def slope(self) -> Fraction:
        if self.kind is DirectionKind.AXIS or not self.is_rational:
            raise ValueError("direction has no rational slope")
        return self.lower

    def rational_vector(self) -> tuple[int, int]:
        """Primitive integer vector pointing along the direction (rational directions only)."""
        if self.kind is DirectionKind.AXIS:
            return (0, self.sign)
        s = self.slope
        return (self.sign * s.denominator, self.sign * s.numerator)

    def sympy_poly(self) -> sympy.Poly:
        return _to_sympy(self.defining)

    def sturm_count(self) -> int:
        """Number of real roots of the defining polynomial in the closed isolating interval."""
        if self.kind is DirectionKind.AXIS:
            return 1
        poly = self.sympy_poly()
        return int(poly.count_roots(sympy.Rational(self.lower.numerator, self.lower.denominator),
                                    sympy.Rational(self.upper.numerator, self.upper.denominator)))

    def _value(self, x: Fraction) -> Fraction:
        return _horner(self.defining, x)

    def refined(self) -> AlgebraicDirection:
        """Halve the isolating interval (returns a new direction)."""
        if self.kind is DirectionKind.AXIS or self.lower == self.upper:
            return self
        lo, hi = self.lower, self.upper
        if self._value(lo) == 0:
            return AlgebraicDirection(self.kind, self.sign, self.defining, lo, lo)
        if self._value(hi) == 0:
            return AlgebraicDirection(self.kind, self.sign, self.defining, hi, hi)
        mid = (lo + hi) / 2
        v_mid = self._value(mid)
        if v_mid == 0:
            lo = hi = mid
        elif _sign(self._value(lo)) * _sign(v_mid) < 0:
            hi = mid
        else:
            lo = mid
        return AlgebraicDirection(self.kind, self.sign, self.defining, lo, hi)

    def refined_to(self, width: Fraction) -> AlgebraicDirection:
        current = self
        while current.upper - current.lower > width:
            current = current.refined()
        return current

    def compare_slope(self, c: Fraction) -> int:
        """sign(s − c) for the slope s of this direction."""
        if self.kind is DirectionKind.AXIS:
            raise ValueError("the vertical axis has no slope")
        c = Fraction(c)
        current = self
        while True:
            if c < current.lower:
                return 1
            if c > current.upper:
                return -1
            if current.lower == current.upper:
                return 0
            if current._value(c) == 0:
                # c is inside the isolating interval and a root: it is the root
                return 0
            current = current.refined()

    # ── Signs against rational vectors ───────────────────────────────
    def dot_sign(self, v: Sequence[Fraction | int]) -> int:
        """sign ⟨v, N⟩."""
        v1, v2 = Fraction(v[0]), Fraction(v[1])
        if self.kind is DirectionKind.AXIS:
            return self.sign * _sign(v2)
        if v2 == 0:
            return self.sign * _sign(v1)
        # v1 + v2·s = v2·(s − (−v1/v2))
        return self.sign * _sign(v2) * self.compare_slope(-v1 / v2)

    def cross_sign(self, v: Sequence[Fraction | int]) -> int:
        """sign det(v, N): positive when N lies counterclockwise of v (within π)."""
        v1, v2 = Fraction(v[0]), Fraction(v[1])
        if self.kind is DirectionKind.AXIS:
            return self.sign * _sign(v1)
        if v1 == 0:
            return self.sign * _sign(-v2)
        # v1·s − v2 = v1·(s − v2/v1)
        return self.sign * _sign(v1) * self.compare_slope(v2 / v1)

    def det_sign(self, other: AlgebraicDirection) -> int:
        """sign det(self, other)."""
        if other.is_rational:
            return -self.cross_sign(other.rational_vector())
        if self.is_rational:
            return other.cross_sign(self.rational_vector())
        # both irrational slopes: det(σ(1,s), τ(1,t)) = στ(t − s)
        if self.same_slope(other):
            return 0
        a, b = self, other
        while not (a.upper < b.lower or b.upper < a.lower):
            a, b = a.refined(), b.refined()
        return self.sign * other.sign * (1 if a.upper < b.lower else -1)

    def same_slope(self, other: AlgebraicDirection) -> bool:
        if self.kind is DirectionKind.AXIS or other.kind is DirectionKind.AXIS:
            return self.kind is other.kind
        if other.is_rational:
            return self.compare_slope(other.slope) == 0
        if self.is_rational:
            return other.compare_slope(self.slope) == 0
        lo = max(self.lower, other.lower)
        hi = min(self.upper, other.upper)
        if lo > hi:
            return False
        common = sympy.gcd(self.sympy_poly(), other.sympy_poly())
        if common.degree() < 1:
            return False
        return common.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                                  sympy.Rational(hi.numerator, hi.denominator)) > 0

    def same_as(self, other: AlgebraicDirection) -> bool:
        return self.sign == other.sign and self.same_slope(other)

    def parallel_to(self, other: AlgebraicDirection) -> bool:
        return self.same_slope(other)

    # ── Derived directions ───────────────────────────────────────────
    def negated(self) -> AlgebraicDirection:
        return AlgebraicDirection(self.kind, -self.sign, self.defining, self.lower, self.upper)

    def rotated(self) -> AlgebraicDirection:
        """Counterclockwise quarter turn (a, b) ↦ (−b, a), exact."""
        if self.kind is DirectionKind.AXIS:
            # (0, τ) ↦ (−τ, 0): slope 0
            return AlgebraicDirection.slope_root((1, 0), 0, 0, -self.sign)
        current = self
        while current.lower <= 0 <= current.upper:
            if current.compare_slope(Fraction(0)) == 0:
                # σ(1, 0) ↦ σ(0, 1)
                return AlgebraicDirection.axis(self.sign)
            current = current.refined()
        root_sign = 1 if current.lower > 0 else -1
        # σ(−s, 1) = sign(−σ s)·(1, −1/s); −1/s is a root of t^n p(−1/t)
        n = len(self.defining) - 1
        # defining is highest-first: defining[j] multiplies s^(n−j); in t it multiplies
        # (−1)^(n−j) t^j, so the t-list highest-first is j = n .. 0
        t_coeffs = [self.defining[j] * (-1) ** (n - j) for j in range(n, -1, -1)]
        lo, hi = -1 / current.lower, -1 / current.upper
        return AlgebraicDirection.slope_root(
            t_coeffs, min(lo, hi), max(lo, hi), -self.sign * root_sign
        )

    # ── Floats and display ───────────────────────────────────────────
    @cached_property
    def slope_float(self) -> float:
        if self.kind is DirectionKind.AXIS:
            raise ValueError("the vertical axis has no slope")
        current = self
        for _ in range(200):
            mid = (current.lower + current.upper) / 2
            if current.upper - current.lower <= abs(mid) * Fraction(1, 2**60) + Fraction(1, 2**80):
                break
            current = current.refined()
        return float((current.lower + current.upper) / 2)

    @cached_property
    def unit(self) -> tuple[float, float]:
        if self.kind is DirectionKind.AXIS:
            return (0.0, float(self.sign))
        s = self.slope_float
        norm = math.hypot(1.0, s)
        return (self.sign / norm, self.sign * s / norm)

    @property
    def angle(self) -> float:
        """Polar angle in [0, 2π)."""
        theta = math.atan2(self.unit[1], self.unit[0])
        return theta if theta >= 0 else theta + 2 * math.pi

    def describe(self) -> dict:
        data: dict = {"vector": [self.unit[0], self.unit[1]], "kind": self.kind.value, "sign": self.sign}
        if self.kind is DirectionKind.SLOPE:
            data["defining_polynomial"] = list(self.defining)
            data["isolating_interval"] = [str(self.lower), str(self.upper)]
        if self.is_rational:
            data["rational_vector"] = list(self.rational_vector())
        return data

    def __str__(self) -> str:
        if self.is_rational:
            return f"dir{self.rational_vector()}"
        return f"dir(±{self.unit[0]:.6f}, {self.unit[1]:.6f})"

    # ── Roots of other polynomials at the slope ──────────────────────
    def reduce(self, coefficients: Mapping[int, ComplexRational]) -> dict[int, ComplexRational]:
        """Remainder of Σ_k c_k s^k modulo the defining polynomial (irrational slopes)."""
        if not coefficients:
            return {}
        top = max(coefficients)
        result: dict[int, ComplexRational] = {}
        parts = []
        for attr in ("re", "im"):
            coeffs = [getattr(coefficients.get(k, ComplexRational()), attr) for k in range(top, -1, -1)]
            remainder = sympy.rem(_to_sympy(coeffs), self.sympy_poly())
            parts.append(remainder.all_coeffs()[::-1])
        for k in range(max(len(parts[0]), len(parts[1]))):
            re = Fraction(str(parts[0][k])) if k < len(parts[0]) else Fraction(0)
            im = Fraction(str(parts[1][k])) if k < len(parts[1]) else Fraction(0)
            if re or im:
                result[k] = ComplexRational(re, im)
        return result


@dataclass(frozen=True)
class CharacteristicSet:
    directions: tuple[AlgebraicDirection, ...]
    source_degree: int

    def __len__(self) -> int:
        return len(self.directions)

    def __iter__(self) -> Iterator[AlgebraicDirection]:
        return iter(self.directions)

    @property
    def is_empty(self) -> bool:
        return not self.directions

    def contains(self, direction: AlgebraicDirection) -> bool:
        return any(d.same_as(direction) for d in self.directions)

    def representatives(self) -> tuple[AlgebraicDirection, ...]:
        """One direction per antipodal pair (the one with positive sign)."""
        return tuple(d for d in self.directions if d.sign > 0)
