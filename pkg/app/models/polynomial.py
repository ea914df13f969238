"""
Exact polynomial values.

Coefficients are complex rationals on top of ``fractions.Fraction`` (the
numerator/denominator pair is normalised by Fraction itself).  A polynomial
is a sparse map from exponent tuples to non-zero coefficients; the zero
polynomial is a legal intermediate value (P − P) but the services refuse
it wherever a symbol is expected.

Every value here is immutable and hashable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

from app.core.errors import DimensionMismatch, InvalidInput

MultiIndex = tuple[int, ...]
FloatTerms = tuple[tuple[MultiIndex, complex], ...]


@dataclass(frozen=True, slots=True)
class ComplexRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value: "Scalar") -> ComplexRational:
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, (int, Fraction, float)):
            return cls(Fraction(value), Fraction(0))
        raise TypeError(f"cannot use {type(value).__name__} as a complex rational")

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: "Scalar") -> ComplexRational:
        o = ComplexRational.coerce(other)
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> ComplexRational:
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other: "Scalar") -> ComplexRational:
        return self + (-ComplexRational.coerce(other))

    def __rsub__(self, other: "Scalar") -> ComplexRational:
        return ComplexRational.coerce(other) - self

    def __mul__(self, other: "Scalar") -> ComplexRational:
        o = ComplexRational.coerce(other)
        return ComplexRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: "Scalar") -> ComplexRational:
        o = ComplexRational.coerce(other)
        norm = o.abs2()
        if norm == 0:
            raise ZeroDivisionError("division by a zero complex rational")
        num = self * o.conjugate()
        return ComplexRational(num.re / norm, num.im / norm)

    def __pow__(self, exponent: int) -> ComplexRational:
        result = ComplexRational(Fraction(1))
        for _ in range(exponent):
            result = result * self
        return result

    def conjugate(self) -> ComplexRational:
        return ComplexRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return math.sqrt(float(self.abs2()))

    def __repr__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


Scalar = Union[int, Fraction, float, complex, ComplexRational]

ONE = ComplexRational(Fraction(1))
I = ComplexRational(Fraction(0), Fraction(1))


def order(alpha: MultiIndex) -> int:
    return sum(alpha)


def multi_factorial(alpha: MultiIndex) -> int:
    return math.prod(math.factorial(a) for a in alpha)


class Polynomial:
    """Sparse polynomial in ``dimension`` variables x1..xd with complex-rational coefficients."""

    __slots__ = ("_dimension", "_terms", "_hash")

    def __init__(self, dimension: int, terms: Mapping[MultiIndex, Scalar] | None = None) -> None:
        if dimension < 1:
            raise InvalidInput("polynomial dimension must be positive")
        cleaned: dict[MultiIndex, ComplexRational] = {}
        for alpha, coeff in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dimension:
                raise DimensionMismatch(
                    f"exponent {alpha} has length {len(alpha)}, expected {dimension}"
                )
            if any(a < 0 for a in alpha):
                raise InvalidInput(f"negative exponent in {alpha}")
            value = ComplexRational.coerce(coeff)
            if not value.is_zero:
                cleaned[alpha] = value
        self._dimension = dimension
        self._terms = MappingProxyType(dict(sorted(cleaned.items())))
        self._hash: int | None = None

    # ── Constructors ─────────────────────────────────────────────────
    @classmethod
    def zero(cls, dimension: int) -> Polynomial:
        return cls(dimension)

    @classmethod
    def constant(cls, dimension: int, value: Scalar) -> Polynomial:
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def variable(cls, dimension: int, index: int) -> Polynomial:
        alpha = [0] * dimension
        alpha[index] = 1
        return cls(dimension, {tuple(alpha): 1})

    @classmethod
    def from_terms(cls, dimension: int, terms: Iterable[tuple[MultiIndex, Scalar]]) -> Polynomial:
        """Build from (exponent, coefficient) pairs, summing repeated exponents."""
        acc: dict[MultiIndex, ComplexRational] = {}
        for alpha, coeff in terms:
            key = tuple(alpha)
            acc[key] = acc.get(key, ComplexRational()) + ComplexRational.coerce(coeff)
        return cls(dimension, acc)

    # ── Accessors ────────────────────────────────────────────────────
    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def terms(self) -> Mapping[MultiIndex, ComplexRational]:
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((order(alpha) for alpha in self._terms), default=-1)

    @property
    def is_constant(self) -> bool:
        return all(order(alpha) == 0 for alpha in self._terms)

    def coefficient(self, alpha: MultiIndex) -> ComplexRational:
        return self._terms.get(tuple(alpha), ComplexRational())

    def items(self) -> Iterator[tuple[MultiIndex, ComplexRational]]:
        return iter(self._terms.items())

    # ── Ring operations ──────────────────────────────────────────────
    def _check_same_space(self, other: Polynomial) -> None:
        if other._dimension != self._dimension:
            raise DimensionMismatch(
                f"polynomials live in {self._dimension} and {other._dimension} variables"
            )

    def _lift(self, other: Polynomial | Scalar) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check_same_space(other)
            return other
        return Polynomial.constant(self._dimension, other)

    def __add__(self, other: Polynomial | Scalar) -> Polynomial:
        o = self._lift(other)
        acc = dict(self._terms)
        for alpha, coeff in o._terms.items():
            acc[alpha] = acc.get(alpha, ComplexRational()) + coeff
        return Polynomial(self._dimension, acc)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self._dimension, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other: Polynomial | Scalar) -> Polynomial:
        return self + (-self._lift(other))

    def __rsub__(self, other: Polynomial | Scalar) -> Polynomial:
        return self._lift(other) - self

    def __mul__(self, other: Polynomial | Scalar) -> Polynomial:
        if not isinstance(other, Polynomial):
            factor = ComplexRational.coerce(other)
            return Polynomial(self._dimension, {a: c * factor for a, c in self._terms.items()})
        self._check_same_space(other)
        acc: dict[MultiIndex, ComplexRational] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                acc[key] = acc.get(key, ComplexRational()) + ca * cb
        return Polynomial(self._dimension, acc)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Polynomial:
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(self._dimension, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._dimension == other._dimension and dict(self._terms) == dict(other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._dimension, tuple(self._terms.items())))
        return self._hash

    # ── Evaluation ───────────────────────────────────────────────────
    def __call__(self, point: Sequence[Scalar]) -> ComplexRational:
        return self.evaluate(point)

    def evaluate(self, point: Sequence[Scalar]) -> ComplexRational:
        if len(point) != self._dimension:
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, polynomial has {self._dimension} variables"
            )
        values = [ComplexRational.coerce(v) for v in point]
        total = ComplexRational()
        for alpha, coeff in self._terms.items():
            term = coeff
            for v, a in zip(values, alpha):
                if a:
                    term = term * (v ** a)
            total = total + term
        return total

    # ── Structure ────────────────────────────────────────────────────
    def scale(self, factor: Scalar) -> Polynomial:
        return self * factor

    def homogeneous_component(self, degree: int) -> Polynomial:
        return Polynomial(
            self._dimension,
            {a: c for a, c in self._terms.items() if order(a) == degree},
        )

    def derivative(self, alpha: MultiIndex) -> Polynomial:
        alpha = tuple(alpha)
        if len(alpha) != self._dimension:
            raise DimensionMismatch(
                f"multi-index {alpha} has length {len(alpha)}, expected {self._dimension}"
            )
        acc: dict[MultiIndex, ComplexRational] = {}
        for beta, coeff in self._terms.items():
            if any(b < a for a, b in zip(alpha, beta)):
                continue
            factor = 1
            for a, b in zip(alpha, beta):
                # falling factorial b (b-1) ... (b-a+1)
                factor *= math.perm(b, a)
            acc[tuple(b - a for a, b in zip(alpha, beta))] = coeff * factor
        return Polynomial(self._dimension, acc)

    def substitute(self, images: Sequence[Polynomial]) -> Polynomial:
        """Compose: replace x_i by ``images[i]`` (all images share one ring)."""
        if len(images) != self._dimension:
            raise DimensionMismatch(
                f"{len(images)} images given for {self._dimension} variables"
            )
        target = images[0].dimension
        for image in images:
            if image.dimension != target:
                raise DimensionMismatch("substitution images live in different rings")
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in powers:
                powers[key] = (
                    Polynomial.constant(target, 1) if k == 0 else power(i, k - 1) * images[i]
                )
            return powers[key]

        result = Polynomial.zero(target)
        for alpha, coeff in self._terms.items():
            term = Polynomial.constant(target, coeff)
            for i, a in enumerate(alpha):
                if a:
                    term = term * power(i, a)
            result = result + term
        return result

    def extend(self, extra: int) -> Polynomial:
        """Embed into a ring with ``extra`` trailing variables."""
        return Polynomial(
            self._dimension + extra,
            {a + (0,) * extra: c for a, c in self._terms.items()},
        )

    def split_by_variable(self, index: int) -> dict[int, Polynomial]:
        """Group by the power of variable ``index``; coefficients drop that variable."""
        if self._dimension < 2:
            raise DimensionMismatch("cannot split a univariate polynomial into a smaller ring")
        groups: dict[int, dict[MultiIndex, ComplexRational]] = {}
        for alpha, coeff in self._terms.items():
            rest = alpha[:index] + alpha[index + 1:]
            groups.setdefault(alpha[index], {})[rest] = coeff
        return {k: Polynomial(self._dimension - 1, v) for k, v in sorted(groups.items())}

    def max_abs_component(self) -> Fraction:
        """max over coefficients of max(|re|, |im|)."""
        return max((max(abs(c.re), abs(c.im)) for c in self._terms.values()), default=Fraction(0))

    # ── Display ──────────────────────────────────────────────────────
    def __repr__(self) -> str:
        return f"Polynomial({self._dimension}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for alpha, coeff in sorted(self._terms.items(), key=lambda item: (-order(item[0]), item[0])):
            monomial = "*".join(
                f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}"
                for i, a in enumerate(alpha)
                if a
            )
            if not monomial:
                pieces.append(repr(coeff))
            elif coeff == ONE:
                pieces.append(monomial)
            elif coeff == -ONE:
                pieces.append(f"-{monomial}")
            else:
                pieces.append(f"{coeff!r}*{monomial}")
        return " + ".join(pieces).replace("+ -", "- ")
