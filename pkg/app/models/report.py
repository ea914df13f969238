"""
The analysis report: everything ``analyze`` decided, with the evidence.

Conclusions are stored as computed by the pipeline; the exit code is
derived from them and nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from app.models.cones import LorentzCone
from app.models.direction import AlgebraicDirection, CharacteristicSet
from app.models.domain import DiagnosticResult, Geometry, MinPrincipleResult, Verdict
from app.models.enums import Conclusion
from app.models.localization import HypoellipticityVerdict, SigmaEstimate
from app.models.polynomial import Polynomial

ReportDirection = Union[AlgebraicDirection, tuple[Fraction, ...]]

PATH_FAMILY_CAVEAT = (
    "path-family approximation: localizations at infinity are collected along a finite "
    "family of rays, drifts and sublinear curves; a non-constant localization found this "
    "way is exact, but absence of one along the family is not a proof"
)

EXIT_SURJECTIVE = 0
EXIT_NOT_SURJECTIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3
EXIT_INTERNAL = 4


@dataclass(frozen=True)
class SigmaRecord:
    """σ_P at one direction, keyed by the exact direction it was asked for."""

    direction: ReportDirection
    estimate: SigmaEstimate


@dataclass(frozen=True)
class ConeAvoidance:
    """Closed-form avoidance of the zero set by an exterior cone (d > 2 pipeline)."""

    cone: LorentzCone
    avoids: bool
    justification: str


@dataclass(frozen=True)
class AnalysisReport:
    symbol: Polynomial
    geometry: Geometry
    config: dict
    elliptic: bool
    supports: Verdict
    singular: Verdict
    c_infinity: Conclusion
    d_prime: Conclusion
    hypoellipticity: HypoellipticityVerdict | None = None
    characteristic_set: CharacteristicSet | None = None
    sigma: tuple[SigmaRecord, ...] = ()
    consistency: dict = field(default_factory=dict)
    caveats: tuple[str, ...] = ()
    diagnostics: tuple[DiagnosticResult, ...] = ()
    avoidance: ConeAvoidance | None = None
    min_principle: MinPrincipleResult | None = None

    @property
    def sigma_zero(self) -> tuple[SigmaRecord, ...]:
        return tuple(record for record in self.sigma if record.estimate.is_zero)

    @property
    def exit_code(self) -> int:
        conclusions = (self.c_infinity, self.d_prime)
        if Conclusion.NOT_SURJECTIVE in conclusions:
            return EXIT_NOT_SURJECTIVE
        if Conclusion.INCONCLUSIVE in conclusions:
            return EXIT_INCONCLUSIVE
        return EXIT_SURJECTIVE
