"""
Analysis service: the full surjectivity pipeline.

Planar inputs go through ellipticity, the hypoellipticity probe, the
characteristic sweep (supports) and the σ-zero sweep (singular supports),
followed by the implication check between the two verdicts.  A Lorentz
cone complement with a wave-type symbol in d ≥ 3 has its own closed-form
route, where that implication is not expected to hold.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction

from app.core.config import AnalysisConfig
from app.core.errors import DimensionMismatch, InternalInconsistency, UnsupportedDimension
from app.core.predicates import Point
from app.models.cones import LorentzCone
from app.models.domain import Geometry, LineSpec, LorentzComplement, PlanarDomain, Verdict
from app.models.enums import Conclusion, ConvexityMode, HypoellipticityStatus, VerdictStatus
from app.models.polynomial import Polynomial
from app.models.report import PATH_FAMILY_CAVEAT, AnalysisReport, ConeAvoidance, SigmaRecord
from app.services.characteristic_service import characteristic_set
from app.services.cone_service import cone_avoids_zeroset, wave_zero_set
from app.services.domain_service import convexity_verdict, exterior_cone_diagnostic, min_principle_check
from app.services.polynomial_service import require_nonzero
from app.services.sigma_service import hypoellipticity_probe, sigma_estimate

logger = logging.getLogger(__name__)


# ── Verdict helpers ──────────────────────────────────────────────────
def _singular_verdict(
    domain: PlanarDomain,
    records: list[SigmaRecord],
    threshold: float,
) -> Verdict:
    """Sweep the certified σ-zero directions; flag uncertified small σ only if it would matter."""
    zeros = [r.direction for r in records if r.estimate.is_zero]
    inconclusive = [r.direction for r in records if r.estimate.below(threshold)]
    verdict = convexity_verdict(domain, zeros, ConvexityMode.SINGULAR_SUPPORTS)
    if not verdict.passed or not inconclusive:
        return verdict

    probe = convexity_verdict(domain, inconclusive, ConvexityMode.SINGULAR_SUPPORTS)
    if probe.passed:
        return verdict
    caveats = tuple(
        f"σ at {w.direction} is below {threshold:g} but not certified zero, "
        f"and the domain is not convex along it"
        for w in probe.witnesses
    )
    for caveat in caveats:
        logger.warning(caveat)
    return Verdict(
        VerdictStatus.PASS_WITH_CAVEAT,
        ConvexityMode.SINGULAR_SUPPORTS,
        checked_directions=verdict.checked_directions,
        caveats=caveats,
    )


def _conclusions(supports: Verdict, singular: Verdict, config: AnalysisConfig) -> tuple[Conclusion, Conclusion]:
    c_infinity = Conclusion.SURJECTIVE if supports.passed else Conclusion.NOT_SURJECTIVE
    if not (supports.passed and singular.passed):
        d_prime = Conclusion.NOT_SURJECTIVE
    elif singular.status is VerdictStatus.PASS_WITH_CAVEAT and config.caveat_policy == "downgrade":
        d_prime = Conclusion.INCONCLUSIVE
    else:
        d_prime = Conclusion.SURJECTIVE
    return c_infinity, d_prime


def _check_implication(supports: Verdict, singular: Verdict) -> None:
    if supports.passed and not singular.passed:
        raise InternalInconsistency(
            "the domain passed the supports sweep but failed the singular-supports sweep"
        )


# ── Planar pipeline ──────────────────────────────────────────────────
def _boundary_samples(domain: PlanarDomain) -> list[Point]:
    """Every vertex and three interior points per edge."""
    samples = list(domain.vertices)
    for a, b in domain.edges():
        for k in (1, 2, 3):
            t = Fraction(k, 4)
            samples.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    return samples


def _analyze_planar(P: Polynomial, domain: PlanarDomain, config: AnalysisConfig) -> AnalysisReport:
    echo = config.echo()
    caveats = [PATH_FAMILY_CAVEAT]

    probe = hypoellipticity_probe(P, config)
    if probe.status is HypoellipticityStatus.ELLIPTIC:
        logger.info("%s is elliptic: every open set passes both sweeps", P)
        supports = Verdict(VerdictStatus.PASS, ConvexityMode.SUPPORTS)
        singular = Verdict(VerdictStatus.PASS, ConvexityMode.SINGULAR_SUPPORTS)
        c_infinity, d_prime = _conclusions(supports, singular, config)
        return AnalysisReport(
            symbol=P,
            geometry=domain,
            config=echo,
            elliptic=True,
            supports=supports,
            singular=singular,
            c_infinity=c_infinity,
            d_prime=d_prime,
            hypoellipticity=probe,
            characteristic_set=characteristic_set(P),
            consistency={"supports_implies_singular": "holds"},
            caveats=tuple(caveats),
        )

    chars = characteristic_set(P)
    representatives = chars.representatives()
    supports = convexity_verdict(domain, chars, ConvexityMode.SUPPORTS)

    if probe.status is HypoellipticityStatus.LIKELY_HYPOELLIPTIC:
        # σ never vanishes for a hypoelliptic symbol; the probe already sampled it
        records = [SigmaRecord(N, est) for N, est in zip(representatives, probe.evidence)]
    else:
        records = [SigmaRecord(N, sigma_estimate(P, N, config)) for N in representatives]
    singular = _singular_verdict(domain, records, config.sigma_threshold)
    caveats.extend(singular.caveats)

    _check_implication(supports, singular)
    c_infinity, d_prime = _conclusions(supports, singular, config)

    diagnostics = ()
    if config.diagnostics and not chars.is_empty:
        diagnostics = tuple(exterior_cone_diagnostic(domain, x0, chars) for x0 in _boundary_samples(domain))

    logger.info(
        "%s: supports %s, singular supports %s → C∞ %s, D′ %s",
        P, supports.status.value, singular.status.value, c_infinity.value, d_prime.value,
    )
    return AnalysisReport(
        symbol=P,
        geometry=domain,
        config=echo,
        elliptic=False,
        supports=supports,
        singular=singular,
        c_infinity=c_infinity,
        d_prime=d_prime,
        hypoellipticity=probe,
        characteristic_set=chars,
        sigma=tuple(records),
        consistency={"supports_implies_singular": "holds"},
        caveats=tuple(caveats),
        diagnostics=diagnostics,
    )


# ── Lorentz complement pipeline ──────────────────────────────────────
def _analyze_lorentz(P: Polynomial, geometry: LorentzComplement, config: AnalysisConfig) -> AnalysisReport:
    d = P.dimension
    if geometry.dimension != d:
        raise DimensionMismatch(f"the symbol has {d} variables, the cone complement lives in ℝ^{geometry.dimension}")
    if d < 3:
        raise UnsupportedDimension("the Lorentz complement route needs d >= 3; planar inputs use polygons")
    if wave_zero_set(P) is None:
        raise UnsupportedDimension(f"no verdict for {P} on the cone complement: only wave-type symbols are supported")

    cone = LorentzCone(d)
    avoidance = cone_avoids_zeroset(cone, P)
    supports = Verdict(VerdictStatus.PASS, ConvexityMode.SUPPORTS)

    e_d = tuple(Fraction(int(i == d - 1)) for i in range(d))
    estimate = sigma_estimate(P, e_d, config)
    root3 = math.sqrt(3.0)
    segment = (
        (-root3, *([0.0] * (d - 2)), -1.0),
        (root3, *([0.0] * (d - 2)), -1.0),
    )
    check = min_principle_check(geometry, segment, LineSpec(e_d, Fraction(-1)), tol=config.min_principle_tol)

    caveats = [PATH_FAMILY_CAVEAT]
    if estimate.is_zero and not check.holds:
        singular = Verdict(VerdictStatus.FAIL, ConvexityMode.SINGULAR_SUPPORTS, violations=(check,))
    else:
        reason = (
            "the minimum principle was checked on a single segment of {x_d = -1}"
            if estimate.is_zero
            else "σ at e_d is not certified zero, so no σ-null hyperplane was examined"
        )
        caveats.append(reason)
        singular = Verdict(VerdictStatus.PASS_WITH_CAVEAT, ConvexityMode.SINGULAR_SUPPORTS, caveats=(reason,))

    c_infinity, d_prime = _conclusions(supports, singular, config)
    logger.info(
        "%s on the Lorentz complement in ℝ^%d: supports pass, singular supports %s",
        P, d, singular.status.value,
    )
    return AnalysisReport(
        symbol=P,
        geometry=geometry,
        config=config.echo(),
        elliptic=False,
        supports=supports,
        singular=singular,
        c_infinity=c_infinity,
        d_prime=d_prime,
        sigma=(SigmaRecord(e_d, estimate),),
        consistency={"supports_implies_singular": "not_applicable"},
        caveats=tuple(caveats),
        avoidance=ConeAvoidance(cone, avoidance.avoids, avoidance.justification),
        min_principle=check,
    )


# ── Entry point ──────────────────────────────────────────────────────
def analyze(P: Polynomial, geometry: Geometry, config: AnalysisConfig | None = None) -> AnalysisReport:
    """Decide P-convexity for supports and singular supports and map the verdicts to surjectivity."""
    config = config or AnalysisConfig()
    require_nonzero(P)
    if isinstance(geometry, LorentzComplement):
        return _analyze_lorentz(P, geometry, config)
    if P.dimension != 2:
        raise UnsupportedDimension(f"planar domains need a symbol in 2 variables, got {P.dimension}")
    return _analyze_planar(P, geometry, config)

