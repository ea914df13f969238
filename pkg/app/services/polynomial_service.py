"""
Polynomial service — decomposition, translation, reflection and jets.

All operations are exact.  The parametric translation is the workhorse
of the localization code: it expands P(η + ξ(s)) where every coordinate
of ξ is a univariate polynomial in a formal parameter s, and returns the
coefficient of each power of s as a polynomial in η.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from app.core.errors import DimensionMismatch, ZeroPolynomial
from app.models.polynomial import (
    ComplexRational,
    FloatTerms,
    MultiIndex,
    Polynomial,
    Scalar,
    multi_factorial,
    order,
)

# A univariate polynomial in the path parameter: power -> rational coefficient.
ParameterCurve = Mapping[int, Fraction]


@dataclass(frozen=True)
class HomogeneousDecomposition:
    degree: int
    components: tuple[Polynomial, ...]
    principal: Polynomial


@dataclass(frozen=True)
class CoeffNorm:
    square: Fraction
    root: float


def require_nonzero(P: Polynomial) -> None:
    if P.is_zero:
        raise ZeroPolynomial("the symbol must be a non-zero polynomial")


def _check_vector(P: Polynomial, vector: Sequence[Scalar], name: str) -> None:
    if len(vector) != P.dimension:
        raise DimensionMismatch(
            f"{name} has {len(vector)} coordinates, polynomial has {P.dimension} variables"
        )


def hom_decompose(P: Polynomial) -> HomogeneousDecomposition:
    """Split P into homogeneous components P_0..P_m; the principal part is P_m."""
    require_nonzero(P)
    m = P.degree
    components = tuple(P.homogeneous_component(j) for j in range(m + 1))
    return HomogeneousDecomposition(degree=m, components=components, principal=components[m])


def principal_part(P: Polynomial) -> Polynomial:
    return hom_decompose(P).principal


def translate(P: Polynomial, xi: Sequence[Scalar]) -> Polynomial:
    """Return P_ξ, the polynomial η ↦ P(η + ξ)."""
    _check_vector(P, xi, "shift")
    d = P.dimension
    images = [
        Polynomial.variable(d, i) + Polynomial.constant(d, xi[i])
        for i in range(d)
    ]
    return P.substitute(images)


def translate_parametric(P: Polynomial, curves: Sequence[ParameterCurve]) -> dict[int, Polynomial]:
    """
    Expand P(η + ξ(s)) with ξ_i(s) = Σ_k curves[i][k]·s^k.

    Returns ``{k: coefficient of s^k}`` with every coefficient a polynomial
    in η (zero coefficients omitted).  This is the coefficients-in-r form of
    ``translate``: for a ray ξ = r·w pass ``curves[i] = {1: w_i}``.
    """
    _check_vector(P, curves, "parametric shift")
    d = P.dimension
    images = []
    for i, curve in enumerate(curves):
        image = Polynomial.variable(d + 1, i)
        for power, coeff in curve.items():
            if coeff:
                alpha = [0] * (d + 1)
                alpha[d] = power
                image = image + Polynomial(d + 1, {tuple(alpha): coeff})
        images.append(image)
    expanded = P.substitute(images)
    return {k: c for k, c in expanded.split_by_variable(d).items() if not c.is_zero}


def reflect(P: Polynomial) -> Polynomial:
    """P̌(ξ) = P(−ξ): each coefficient picks up (−1)^|α|."""
    return Polynomial(
        P.dimension,
        {alpha: (-c if order(alpha) % 2 else c) for alpha, c in P.items()},
    )


def derivative(P: Polynomial, alpha: MultiIndex) -> Polynomial:
    return P.derivative(alpha)


def directional_jet(
    P: Polynomial,
    y: Sequence[Scalar],
    xi: Sequence[Scalar],
    m: int,
) -> list[ComplexRational]:
    """d^k/ds^k P(ξ + s·y) at s = 0 for k = 0..m."""
    _check_vector(P, y, "direction")
    _check_vector(P, xi, "base point")
    d = P.dimension
    one_var = [
        Polynomial(1, {(0,): xi[i], (1,): y[i]})
        for i in range(d)
    ]
    q = P.substitute(one_var)
    return [q.coefficient((k,)) * math.factorial(k) for k in range(m + 1)]


def taylor_coefficients(P: Polynomial, xi: Sequence[Scalar]) -> dict[MultiIndex, ComplexRational]:
    """Coefficients c_α of P_ξ, so that P^{(α)}(ξ) = α!·c_α."""
    return dict(translate(P, xi).items())


def coeff_norm(P: Polynomial, xi: Sequence[Scalar] | None = None) -> CoeffNorm:
    """Σ_α |P^{(α)}(ξ)|² exactly, with its binary64 square root."""
    if xi is None:
        xi = (0,) * P.dimension
    square = Fraction(0)
    for alpha, c in taylor_coefficients(P, xi).items():
        square += (multi_factorial(alpha) ** 2) * c.abs2()
    return CoeffNorm(square=square, root=math.sqrt(square))


def canonical_scale(P: Polynomial) -> Polynomial:
    """Divide by the positive rational max(|re|, |im|) so the largest component is 1."""
    require_nonzero(P)
    return P * (1 / P.max_abs_component())


# ── Float evaluation ─────────────────────────────────────────────────
def float_terms(P: Polynomial, scale: float = 1.0) -> FloatTerms:
    """Binary64 copy of the coefficients, optionally divided by ``scale``."""
    return tuple((alpha, complex(c) / scale) for alpha, c in P.items())


def evaluate_terms(terms: FloatTerms, points: np.ndarray) -> np.ndarray:
    """Evaluate a float polynomial at every row of ``points`` (shape (n, d))."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    values = np.zeros(points.shape[0], dtype=complex)
    for alpha, coeff in terms:
        monomial = np.ones(points.shape[0])
        for i, a in enumerate(alpha):
            if a:
                monomial = monomial * points[:, i] ** a
        values += coeff * monomial
    return values
