"""
Localization service — limits of P(η + ξ(r)) along paths to infinity.

Paths are expanded exactly: with r = s^q every coordinate of
ξ(r) = r·w + r^{p/q}·v + b becomes a polynomial in s, the translated
symbol is grouped by powers of s, and the top non-zero group is the
localization (up to a positive factor).  Irrational characteristic
directions are handled in ℚ(i)[η, r, s] with s the slope, reduced modulo
its defining polynomial.

The path family per characteristic direction is: the pure ray, rays with
random rational drifts, sublinear drifts with random vectors and, when
enabled, Puiseux cancellation drifts whose coefficient is chosen so that
the leading order of the expansion cancels.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence, Union

import numpy as np
import sympy

from app.core.config import AnalysisConfig
from app.core.errors import DimensionMismatch, UnsupportedDimension
from app.models.direction import AlgebraicDirection
from app.models.localization import LinealitySpace, LocalizationProfile, PathSpec, SublinearTerm
from app.models.polynomial import ComplexRational, MultiIndex, Polynomial, multi_factorial
from app.services.characteristic_service import characteristic_set, rational_null_directions
from app.services.polynomial_service import (
    canonical_scale,
    coeff_norm,
    float_terms,
    require_nonzero,
    translate_parametric,
)

logger = logging.getLogger(__name__)

_C = sympy.Symbol("c")
PathItem = Union[PathSpec, AlgebraicDirection]
Direction = Union[AlgebraicDirection, Sequence[Fraction | int | float]]


# ── Single paths ─────────────────────────────────────────────────────
def _path_curves(path: PathSpec) -> tuple[list[dict[int, Fraction]], int]:
    q = path.sublinear.exponent.denominator if path.sublinear else 1
    p = path.sublinear.exponent.numerator if path.sublinear else 0
    curves = []
    for i in range(path.dimension):
        curve: dict[int, Fraction] = {q: Fraction(path.direction[i]), 0: path.drift[i]}
        if path.sublinear is not None:
            curve[p] = curve.get(p, Fraction(0)) + path.sublinear.vector[i]
        curves.append(curve)
    return curves, q


def _rational_profile(
    leading: Polynomial,
    exponent: Fraction,
    direction: tuple[float, ...],
    source: PathSpec | None,
) -> LocalizationProfile:
    profile = canonical_scale(leading)
    norm = coeff_norm(profile).root
    return LocalizationProfile(
        profile=profile,
        float_coefficients=float_terms(profile, norm),
        direction=direction,
        exponent=exponent,
        source=source,
        constant=profile.is_constant,
    )


def ray_localization(P: Polynomial, path: PathSpec) -> LocalizationProfile:
    """Leading coefficient of P(η + ξ(r)) along ``path``, exact up to positive scale."""
    require_nonzero(P)
    if path.dimension != P.dimension:
        raise DimensionMismatch(
            f"path lives in {path.dimension} dimensions, symbol in {P.dimension}"
        )
    curves, q = _path_curves(path)
    expansion = translate_parametric(P, curves)
    top = max(expansion)
    return _rational_profile(expansion[top], Fraction(top, q), path.unit, path)


def _group_by_eta(poly: Polynomial, eta: int) -> dict[MultiIndex, dict[int, ComplexRational]]:
    """Split a polynomial in (η_1..η_eta, u) into η-monomial -> univariate coefficients in u."""
    groups: dict[MultiIndex, dict[int, ComplexRational]] = {}
    for alpha, coeff in poly.items():
        groups.setdefault(alpha[:eta], {})[alpha[eta]] = coeff
    return groups


def algebraic_ray_localization(P: Polynomial, N: AlgebraicDirection) -> LocalizationProfile:
    """
    Localization along the pure ray r·N for a planar direction N.

    Rational directions reduce to ``ray_localization``.  For an irrational
    slope s the profile is a polynomial in (η1, η2, s) reduced modulo the
    defining polynomial of s, so a vanishing coefficient is an exact zero.
    """
    require_nonzero(P)
    if P.dimension != 2:
        raise UnsupportedDimension("algebraic directions are planar")
    if N.is_rational:
        return ray_localization(P, PathSpec(N.rational_vector()))

    # variables: η1, η2, r, s
    eta1, eta2 = Polynomial.variable(4, 0), Polynomial.variable(4, 1)
    r, s = Polynomial.variable(4, 2), Polynomial.variable(4, 3)
    expanded = P.substitute([eta1 + r * N.sign, eta2 + r * s * N.sign])
    by_r = expanded.split_by_variable(2)

    for power in sorted(by_r, reverse=True):
        reduced_terms: dict[MultiIndex, ComplexRational] = {}
        for eta_alpha, s_poly in _group_by_eta(by_r[power], 2).items():
            for k, coeff in N.reduce(s_poly).items():
                reduced_terms[eta_alpha + (k,)] = coeff
        if reduced_terms:
            leading = canonical_scale(Polynomial(3, reduced_terms))
            break
    else:  # pragma: no cover - P ≠ 0 keeps some coefficient alive
        raise ValueError("no non-vanishing coefficient along the ray")

    s0 = N.slope_float
    values: dict[MultiIndex, complex] = {}
    for alpha, coeff in leading.items():
        values[alpha[:2]] = values.get(alpha[:2], 0j) + complex(coeff) * s0 ** alpha[2]
    norm = float(np.sqrt(sum(multi_factorial(a) ** 2 * abs(v) ** 2 for a, v in values.items())))
    floats = tuple((a, v / norm) for a, v in sorted(values.items()) if v != 0)
    constant = all(sum(alpha[:2]) == 0 for alpha, _ in leading.items())
    logger.debug("algebraic ray %s: leading r^%d, constant=%s", N, power, constant)
    return LocalizationProfile(
        profile=leading,
        float_coefficients=floats,
        direction=N.unit,
        exponent=Fraction(power),
        algebraic_direction=N,
        constant=constant,
    )


def cancellation_paths(P: Polynomial, w: Sequence[int], exponent: Fraction) -> list[PathSpec]:
    """
    Paths r·w + c·r^{p/q}·w⊥ whose drift coefficient c ≠ 0 kills the leading order.

    The leading s-coefficient of P(η + s^q w + c s^p w⊥) is a polynomial in
    (η, c); the admissible c are the rational roots of the gcd over ℚ of its
    real and imaginary parts taken per η-monomial.
    """
    if P.dimension != 2:
        return []
    p, q = exponent.numerator, exponent.denominator
    perp = (-w[1], w[0])
    # variables: η1, η2, s, c
    s, c = Polynomial.variable(4, 2), Polynomial.variable(4, 3)
    images = [
        Polynomial.variable(4, i) + (s ** q) * w[i] + c * (s ** p) * perp[i]
        for i in range(2)
    ]
    by_s = P.substitute(images).split_by_variable(2)
    top = max(k for k, v in by_s.items() if not v.is_zero)

    parts = []
    for c_poly in _group_by_eta(by_s[top], 2).values():
        degree = max(c_poly)
        for attr in ("re", "im"):
            coeffs = [getattr(c_poly.get(k, ComplexRational()), attr) for k in range(degree, -1, -1)]
            if any(coeffs):
                parts.append(sympy.Poly([sympy.Rational(x.numerator, x.denominator) for x in coeffs], _C, domain="QQ"))
    common = reduce(sympy.gcd, parts)
    if common.degree() < 1:
        return []

    roots = sorted(Fraction(str(root)) for root in common.ground_roots())
    paths = []
    for root in roots:
        if root == 0:
            continue
        paths.append(PathSpec(tuple(w), sublinear=SublinearTerm(exponent, (root * perp[0], root * perp[1]))))
    if paths:
        logger.info("cancellation drifts along %s at exponent %s: %s", tuple(w), exponent, [str(r) for r in roots])
    return paths


# ── Path family ──────────────────────────────────────────────────────
def _random_rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-96, 97)), 97)


def _random_vector(rng: np.random.Generator, d: int, nonzero: bool = False) -> tuple[Fraction, ...]:
    while True:
        vector = tuple(_random_rational(rng) for _ in range(d))
        if not nonzero or any(vector):
            return vector


def _rational_family(
    P: Polynomial,
    w: tuple[int, ...],
    index: int,
    config: AnalysisConfig,
) -> list[PathSpec]:
    d = len(w)
    rng = np.random.default_rng([config.seed, index])
    drifts = [_random_vector(rng, d) for _ in range(config.drift_count)]
    subs = [
        (exponent, _random_vector(rng, d, nonzero=True))
        for exponent in config.exponents
        for _ in range(config.sublinear_count)
    ]
    family: list[PathSpec] = []
    for sign in (1, -1):
        ws = tuple(sign * x for x in w)
        family.append(PathSpec(ws))
        family.extend(PathSpec(ws, tuple(sign * b for b in drift)) for drift in drifts)
        family.extend(
            PathSpec(ws, sublinear=SublinearTerm(exponent, tuple(sign * v for v in vector)))
            for exponent, vector in subs
        )
        if config.adaptive_drifts:
            for exponent in config.exponents:
                family.extend(cancellation_paths(P, ws, exponent))
    return family


def _canonical_null_directions(P: Polynomial, bound: int) -> list[tuple[int, ...]]:
    """One vector per ± pair: the one whose first non-zero entry is positive."""
    found = []
    for w in rational_null_directions(P, bound):
        first = next(x for x in w if x)
        if first > 0:
            found.append(w)
    return found


def path_family(P: Polynomial, config: AnalysisConfig | None = None) -> list[PathItem]:
    """Every path the estimator localizes along, in a deterministic order."""
    config = config or AnalysisConfig()
    require_nonzero(P)
    family: list[PathItem] = []
    if P.dimension == 2:
        for index, N in enumerate(characteristic_set(P).representatives()):
            if N.is_rational:
                family.extend(_rational_family(P, N.rational_vector(), index, config))
            else:
                logger.debug("irrational characteristic direction %s: pure rays only", N)
                family.extend([N, N.negated()])
    else:
        for index, w in enumerate(_canonical_null_directions(P, config.null_search_bound)):
            family.extend(_rational_family(P, w, index, config))
    return family


@lru_cache(maxsize=128)
def collect_profiles(P: Polynomial, config: AnalysisConfig) -> tuple[LocalizationProfile, ...]:
    profiles = []
    for item in path_family(P, config):
        if isinstance(item, AlgebraicDirection):
            profiles.append(algebraic_ray_localization(P, item))
        else:
            profiles.append(ray_localization(P, item))
    logger.debug(
        "%d localization profiles for %s (%d non-constant)",
        len(profiles), P, sum(1 for prof in profiles if not prof.constant),
    )
    return tuple(profiles)


# ── Lineality ────────────────────────────────────────────────────────
def _gradient_pairing(Q: Polynomial, y: Sequence[Fraction]) -> Polynomial:
    d = Q.dimension
    result = Polynomial.zero(d)
    for i in range(d):
        if y[i]:
            alpha = tuple(1 if j == i else 0 for j in range(d))
            result = result + Q.derivative(alpha) * y[i]
    return result


def _rational_basis(vectors: list[sympy.Matrix]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(str(x)) for x in vec) for vec in vectors)


def lineality_space(Q: Polynomial) -> LinealitySpace:
    """Λ(Q) as the kernel of η ↦ ⟨∇Q, η⟩ (exact), and its orthogonal complement."""
    require_nonzero(Q)
    d = Q.dimension
    partials = [Q.derivative(tuple(1 if j == i else 0 for j in range(d))) for i in range(d)]
    monomials = sorted({alpha for partial in partials for alpha in partial.terms})
    rows = []
    for alpha in monomials:
        for attr in ("re", "im"):
            row = [getattr(partial.coefficient(alpha), attr) for partial in partials]
            if any(row):
                rows.append([sympy.Rational(x.numerator, x.denominator) for x in row])

    identity = [sympy.Matrix([1 if j == i else 0 for j in range(d)]) for i in range(d)]
    kernel = sympy.Matrix(rows).nullspace() if rows else identity
    if not kernel:
        return LinealitySpace(basis=(), complement=_rational_basis(identity))
    complement = sympy.Matrix.hstack(*kernel).T.nullspace()
    return LinealitySpace(basis=_rational_basis(kernel), complement=_rational_basis(complement))


def _exact_vector(y: Sequence[Fraction | int | float]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in y)


def contains_direction(profile: LocalizationProfile, y: Direction) -> bool:
    """Exact test y ∈ Λ(Q) for the profile Q."""
    Q = profile.profile
    N = profile.algebraic_direction
    if N is None:
        if isinstance(y, AlgebraicDirection):
            if y.is_rational:
                return _gradient_pairing(Q, _exact_vector(y.rational_vector())).is_zero
            return all(y.dot_sign(c) == 0 for c in lineality_space(Q).complement)
        if len(y) != Q.dimension:
            raise DimensionMismatch(f"direction has {len(y)} coordinates, profile {Q.dimension}")
        return _gradient_pairing(Q, _exact_vector(y)).is_zero

    # profile in (η1, η2, s) with s the slope of N
    if profile.constant:
        return True
    eta1_part = Q.derivative((1, 0, 0))
    eta2_part = Q.derivative((0, 1, 0))
    if isinstance(y, AlgebraicDirection) and not y.is_rational:
        if not y.parallel_to(N):
            # a non-constant planar localization at N has Λ = span{N}
            return False
        pairing = eta1_part + eta2_part * Polynomial.variable(3, 2)
    else:
        vector = _exact_vector(y.rational_vector() if isinstance(y, AlgebraicDirection) else y)
        if len(vector) != 2:
            raise DimensionMismatch("planar profiles need planar directions")
        pairing = eta1_part * vector[0] + eta2_part * vector[1]
    return all(not N.reduce(s_poly) for s_poly in _group_by_eta(pairing, 2).values())
