"""
σ service — the norms Q̃_V(ξ, t), the σ_P estimator and the hypoellipticity probe.

σ_P(y) vanishes exactly when some non-constant localization Q has
y ∈ Λ(Q); that case is decided symbolically and carries the profile as
witness.  Otherwise the estimate is the minimum of the line/ball norm
ratio over the collected profiles and the configured t-grid, and it is
never reported as zero.

Two norm modes are available.  ``sup`` is the literal supremum (a float,
planar balls only); ``deriv`` is Σ|c_α|·t^{|α|} over the Taylor
coefficients at ξ, which is exact, works in any dimension and dominates
``sup`` by at most ``norm_equivalence_constant(m)``.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
import numpy.polynomial.polynomial as npp
from scipy.optimize import minimize, minimize_scalar

from app.core.config import AnalysisConfig
from app.core.errors import BadT, DimensionMismatch, InvalidInput, UnsupportedDimension
from app.models.direction import AlgebraicDirection
from app.models.enums import HypoellipticityStatus, NormMode
from app.models.localization import (
    EllipticOneCertificate,
    ExactZeroCertificate,
    HypoellipticityVerdict,
    NumericPositiveCertificate,
    SigmaEstimate,
)
from app.models.polynomial import FloatTerms, Polynomial
from app.services.characteristic_service import characteristic_set, is_elliptic
from app.services.localization_service import collect_profiles, contains_direction
from app.services.polynomial_service import evaluate_terms, float_terms, require_nonzero, taylor_coefficients

logger = logging.getLogger(__name__)

SymbolLike = Union[Polynomial, FloatTerms]
Direction = Union[AlgebraicDirection, Sequence[Fraction | int | float]]

# Smallest value a numeric estimate is reported with.
_POSITIVE_FLOOR = 1e-300
_UNIT_TOLERANCE = 1e-12


# ── Helpers ──────────────────────────────────────────────────────────
def _terms(Q: SymbolLike) -> FloatTerms:
    return float_terms(Q) if isinstance(Q, Polynomial) else tuple(Q)


def _dimension(Q: SymbolLike) -> int:
    if isinstance(Q, Polynomial):
        return Q.dimension
    if not Q:
        raise InvalidInput("empty float polynomial has no dimension")
    return len(Q[0][0])


def _check_t(t: float) -> None:
    if not t >= 1:
        raise BadT(f"t must be >= 1 (got {t})")


def _mode(mode: NormMode | str) -> NormMode:
    try:
        return NormMode(mode)
    except ValueError as exc:
        raise InvalidInput(f"unknown norm mode {mode!r}") from exc


def shifted_terms(terms: FloatTerms, xi: Sequence[float]) -> FloatTerms:
    """Taylor coefficients at ξ of a float polynomial: Σ_α c_α ∏ C(α_i, β_i) ξ_i^{α_i−β_i}."""
    if not any(xi):
        return terms
    result: dict[tuple[int, ...], complex] = {}
    for alpha, coeff in terms:
        ranges = [range(a + 1) for a in alpha]
        for beta in np.ndindex(*[len(r) for r in ranges]):
            factor = coeff
            for a, b, x in zip(alpha, beta, xi):
                factor *= math.comb(a, b) * float(x) ** (a - b)
            result[beta] = result.get(beta, 0j) + factor
    return tuple(sorted(result.items()))


def _line_coefficients(terms: FloatTerms, xi: Sequence[float], y: Sequence[float]) -> np.ndarray:
    """Ascending coefficients of q(λ) = Q(ξ + λy)."""
    q = np.zeros(1, dtype=complex)
    for alpha, coeff in terms:
        mono = np.array([coeff], dtype=complex)
        for a, x, v in zip(alpha, xi, y):
            if a:
                mono = npp.polymul(mono, npp.polypow([float(x), float(v)], a))
        q = npp.polyadd(q, mono)
    return np.asarray(q, dtype=complex)


# ── Norms ────────────────────────────────────────────────────────────
def tilde_norm_line(
    Q: SymbolLike,
    xi: Sequence[float],
    y: Sequence[float],
    t: float,
    mode: NormMode | str = NormMode.SUP,
) -> float:
    """Q̃_V(ξ, t) for V = span{y}, |y| = 1."""
    _check_t(t)
    mode = _mode(mode)
    terms = _terms(Q)
    if len(xi) != len(y) or (terms and len(y) != _dimension(terms)):
        raise DimensionMismatch("ξ, y and Q must share a dimension")
    if abs(math.hypot(*y) - 1.0) > _UNIT_TOLERANCE:
        raise InvalidInput(f"line direction must be a unit vector (|y| = {math.hypot(*y)})")

    q = _line_coefficients(terms, xi, y)
    if mode is NormMode.DERIV:
        return float(sum(abs(c) * t**k for k, c in enumerate(q)))

    if len(q) == 1:
        return float(abs(q[0]))
    modulus_sq = npp.polymul(q, np.conj(q)).real
    critical = npp.polyroots(npp.polyder(modulus_sq)) if len(modulus_sq) > 2 else np.array([])
    candidates = [-t, t] + [
        r.real for r in np.atleast_1d(critical)
        if abs(r.imag) <= 1e-9 * max(1.0, abs(r)) and -t < r.real < t
    ]
    values = npp.polyval(np.array(candidates), q)
    return float(np.max(np.abs(values)))


@lru_cache(maxsize=8192)
def _ball_sup(terms: FloatTerms, xi: tuple[float, float], t: float, boundary: int, grid: int) -> float:
    center = np.asarray(xi, dtype=float)

    def modulus_sq(points: np.ndarray) -> np.ndarray:
        values = evaluate_terms(terms, points)
        return (values * np.conj(values)).real

    def on_circle(theta: float) -> float:
        point = center + t * np.array([math.cos(theta), math.sin(theta)])
        return -float(modulus_sq(point[None, :])[0])

    # boundary: dense angular grid, then a bounded local refinement
    angles = np.linspace(0.0, 2 * math.pi, boundary, endpoint=False)
    circle = center + t * np.column_stack([np.cos(angles), np.sin(angles)])
    ring = modulus_sq(circle)
    k = int(np.argmax(ring))
    step = 2 * math.pi / boundary
    refined = minimize_scalar(on_circle, bounds=(angles[k] - step, angles[k] + step), method="bounded")
    best = max(float(ring[k]), -float(refined.fun))

    # interior: coarse grid inside the disk, polished only when it beats the boundary
    axis = np.linspace(-t, t, grid)
    gx, gy = np.meshgrid(axis, axis)
    offsets = np.column_stack([gx.ravel(), gy.ravel()])
    inside = offsets[np.einsum("ij,ij->i", offsets, offsets) < t * t]
    if len(inside):
        values = modulus_sq(center + inside)
        j = int(np.argmax(values))
        if values[j] > best:
            best = float(values[j])
            polished = minimize(
                lambda p: -float(modulus_sq((center + p)[None, :])[0]),
                inside[j],
                method="L-BFGS-B",
                bounds=[(-t, t), (-t, t)],
            )
            if float(np.dot(polished.x, polished.x)) <= t * t:
                best = max(best, -float(polished.fun))
    return math.sqrt(best)


def tilde_norm_ball(
    Q: SymbolLike,
    xi: Sequence[float],
    t: float,
    mode: NormMode | str = NormMode.SUP,
    config: AnalysisConfig | None = None,
) -> float:
    """Q̃(ξ, t), the norm over the full ball of radius t around ξ."""
    _check_t(t)
    mode = _mode(mode)
    config = config or AnalysisConfig()
    d = _dimension(Q)
    if len(xi) != d:
        raise DimensionMismatch(f"ξ has {len(xi)} coordinates, Q has {d} variables")

    if mode is NormMode.DERIV:
        if isinstance(Q, Polynomial) and all(isinstance(x, (int, Fraction)) for x in xi):
            coefficients = taylor_coefficients(Q, xi)
            return float(sum(abs(c) * t ** sum(alpha) for alpha, c in coefficients.items()))
        shifted = shifted_terms(_terms(Q), [float(x) for x in xi])
        return float(sum(abs(c) * t ** sum(alpha) for alpha, c in shifted))

    if d != 2:
        raise UnsupportedDimension("the sup-mode ball norm is implemented for d = 2")
    return _ball_sup(
        _terms(Q),
        (float(xi[0]), float(xi[1])),
        float(t),
        config.boundary_samples,
        config.interior_grid,
    )


def norm_equivalence_constant(m: int) -> float:
    """C(m) with sup ≤ deriv ≤ C(m)·sup for every polynomial of degree ≤ m in two variables."""
    return (m + 1) * (m + 2) / 2 * (1 + math.sqrt(2)) ** (2 * m) * 2 ** (m / 2)


# ── σ estimation ─────────────────────────────────────────────────────
def _resolve_direction(y: Direction, d: int) -> tuple[Direction, tuple[float, ...]]:
    """The exact direction for the Λ test and the float unit vector for the norms."""
    if isinstance(y, AlgebraicDirection):
        if d != 2:
            raise DimensionMismatch("algebraic directions are planar")
        return y, y.unit
    if len(y) != d:
        raise DimensionMismatch(f"direction has {len(y)} coordinates, symbol has {d} variables")
    exact = tuple(Fraction(v) for v in y)
    if not any(exact):
        raise InvalidInput("σ is evaluated at a non-zero direction")
    norm = math.sqrt(sum(float(v) ** 2 for v in exact))
    return exact, tuple(float(v) / norm for v in exact)


def sigma_estimate(P: Polynomial, y: Direction, config: AnalysisConfig | None = None) -> SigmaEstimate:
    """σ_P(span{y}) with an exact-zero, numeric-positive or elliptic certificate."""
    config = config or AnalysisConfig()
    require_nonzero(P)
    exact, unit = _resolve_direction(y, P.dimension)
    mode = NormMode(config.norm_mode) if P.dimension == 2 else NormMode.DERIV

    if is_elliptic(P):
        return SigmaEstimate(1.0, EllipticOneCertificate(), unit, config.echo())

    profiles = [prof for prof in collect_profiles(P, config) if not prof.constant]
    echo = {**config.echo(), "effective_norm_mode": mode.value, "non_constant_profiles": len(profiles)}
    for profile in profiles:
        if contains_direction(profile, exact):
            logger.debug("σ(%s) = 0, witnessed by %s", unit, profile.profile)
            return SigmaEstimate(0.0, ExactZeroCertificate(profile), unit, echo)

    best, argmin_t, samples = 1.0, 1.0, 0
    origin = (0.0,) * P.dimension
    for profile in profiles:
        for t in config.t_grid():
            line = tilde_norm_line(profile.float_coefficients, origin, unit, t, mode)
            ball = tilde_norm_ball(profile.float_coefficients, origin, t, mode, config)
            samples += 1
            if ball > 0 and line / ball < best:
                best, argmin_t = line / ball, t

    value = min(1.0, max(best, _POSITIVE_FLOOR))
    if value < config.sigma_threshold:
        logger.warning("σ(%s) ≈ %.3e is below the threshold %.1e but not certified zero", unit, value, config.sigma_threshold)
    return SigmaEstimate(value, NumericPositiveCertificate(value, samples, argmin_t), unit, echo)


def hypoellipticity_probe(P: Polynomial, config: AnalysisConfig | None = None) -> HypoellipticityVerdict:
    """Elliptic, certified non-hypoelliptic (a non-constant localization) or likely hypoelliptic."""
    config = config or AnalysisConfig()
    require_nonzero(P)
    if P.dimension != 2:
        raise UnsupportedDimension("the hypoellipticity probe works in the plane")
    if is_elliptic(P):
        return HypoellipticityVerdict(HypoellipticityStatus.ELLIPTIC)

    for profile in collect_profiles(P, config):
        if not profile.constant:
            logger.info("%s is not hypoelliptic: non-constant localization %s", P, profile.profile)
            return HypoellipticityVerdict(HypoellipticityStatus.CERTIFIED_NON_HYPOELLIPTIC, witness=profile)

    evidence = tuple(sigma_estimate(P, N, config) for N in characteristic_set(P).representatives())
    logger.info("%s: every collected localization is constant; likely hypoelliptic", P)
    return HypoellipticityVerdict(HypoellipticityStatus.LIKELY_HYPOELLIPTIC, evidence=evidence)
