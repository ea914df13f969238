"""
Localization values: paths to infinity, limit profiles, lineality spaces
and σ estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from app.core.errors import InvalidInput
from app.models.direction import AlgebraicDirection
from app.models.enums import CertificateKind, HypoellipticityStatus
from app.models.polynomial import FloatTerms, Polynomial

RationalVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class SublinearTerm:
    exponent: Fraction
    vector: RationalVector

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponent", Fraction(self.exponent))
        object.__setattr__(self, "vector", tuple(Fraction(v) for v in self.vector))
        if not 0 < self.exponent < 1:
            raise InvalidInput(f"sublinear exponent {self.exponent} must lie in (0, 1)")


@dataclass(frozen=True)
class PathSpec:
    """The path ξ(r) = r·w + r^{p/q}·v + b, r → ∞."""

    direction: tuple[int, ...]
    drift: RationalVector = ()
    sublinear: SublinearTerm | None = None

    def __post_init__(self) -> None:
        direction = tuple(Fraction(w) for w in self.direction)
        if any(w.denominator != 1 for w in direction):
            raise InvalidInput(f"path direction must be an integer vector, got {[str(w) for w in direction]}")
        object.__setattr__(self, "direction", tuple(int(w) for w in direction))
        if not any(self.direction):
            raise InvalidInput("path direction must be non-zero")
        drift = tuple(Fraction(b) for b in self.drift) or (Fraction(0),) * len(self.direction)
        object.__setattr__(self, "drift", drift)
        if len(drift) != len(self.direction):
            raise InvalidInput("drift and direction have different dimensions")
        if self.sublinear is not None and len(self.sublinear.vector) != len(self.direction):
            raise InvalidInput("sublinear vector and direction have different dimensions")

    @property
    def dimension(self) -> int:
        return len(self.direction)

    @property
    def unit(self) -> tuple[float, ...]:
        norm = math.sqrt(sum(w * w for w in self.direction))
        return tuple(w / norm for w in self.direction)

    def describe(self) -> dict:
        data: dict = {
            "direction": list(self.direction),
            "drift": [str(b) for b in self.drift],
        }
        if self.sublinear is not None:
            data["sublinear"] = {
                "exponent": str(self.sublinear.exponent),
                "vector": [str(v) for v in self.sublinear.vector],
            }
        return data


@dataclass(frozen=True)
class LocalizationProfile:
    """
    Leading coefficient of P(η + ξ(r)) as r → ∞.

    ``profile`` is exact up to a positive rational factor.  For a ray along
    an irrational direction ``algebraic_direction`` is that direction and the profile
    carries one extra trailing variable standing for its slope, already
    reduced modulo the defining polynomial.
    """

    profile: Polynomial
    float_coefficients: FloatTerms
    direction: tuple[float, ...]
    exponent: Fraction
    source: PathSpec | None = None
    algebraic_direction: AlgebraicDirection | None = None
    constant: bool = False

    @property
    def dimension(self) -> int:
        return len(self.direction)

    def describe(self) -> dict:
        data: dict = {
            "profile": str(self.profile),
            "constant": self.constant,
            "direction": list(self.direction),
            "leading_exponent": str(self.exponent),
            "float_coefficients": [
                {"exponent": list(alpha), "re": c.real, "im": c.imag}
                for alpha, c in self.float_coefficients
            ],
        }
        if self.source is not None:
            data["path"] = self.source.describe()
        if self.algebraic_direction is not None:
            data["algebraic_direction"] = self.algebraic_direction.describe()
            data["slope_variable"] = f"x{self.profile.dimension}"
        return data


@dataclass(frozen=True)
class LinealitySpace:
    basis: tuple[RationalVector, ...]
    complement: tuple[RationalVector, ...]

    def contains(self, y: RationalVector) -> bool:
        return all(sum(a * b for a, b in zip(y, c)) == 0 for c in self.complement)

    def describe(self) -> dict:
        return {
            "basis": [[str(v) for v in vec] for vec in self.basis],
            "complement": [[str(v) for v in vec] for vec in self.complement],
        }


@dataclass(frozen=True)
class ExactZeroCertificate:
    witness: LocalizationProfile
    kind: CertificateKind = CertificateKind.EXACT_ZERO


@dataclass(frozen=True)
class NumericPositiveCertificate:
    lower_estimate: float
    samples: int
    argmin_t: float
    kind: CertificateKind = CertificateKind.NUMERIC_POSITIVE


@dataclass(frozen=True)
class EllipticOneCertificate:
    kind: CertificateKind = CertificateKind.ELLIPTIC_ONE


Certificate = Union[ExactZeroCertificate, NumericPositiveCertificate, EllipticOneCertificate]


@dataclass(frozen=True)
class SigmaEstimate:
    value: float
    certificate: Certificate
    direction: tuple[float, ...]
    config: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"σ estimate {self.value} outside [0, 1]")
        if isinstance(self.certificate, ExactZeroCertificate) and self.value != 0.0:
            raise ValueError("an exact-zero certificate requires value 0")
        if isinstance(self.certificate, NumericPositiveCertificate) and self.value <= 0.0:
            raise ValueError("a numeric estimate is never reported as zero")

    @property
    def kind(self) -> CertificateKind:
        return self.certificate.kind

    @property
    def is_zero(self) -> bool:
        return self.kind is CertificateKind.EXACT_ZERO

    def below(self, threshold: float) -> bool:
        """Positive estimate under the threshold: inconclusive-positive."""
        return self.kind is CertificateKind.NUMERIC_POSITIVE and self.value < threshold


@dataclass(frozen=True)
class HypoellipticityVerdict:
    status: HypoellipticityStatus
    witness: LocalizationProfile | None = None
    evidence: tuple[SigmaEstimate, ...] = ()

    @property
    def certified(self) -> bool:
        return self.status is not HypoellipticityStatus.LIKELY_HYPOELLIPTIC
